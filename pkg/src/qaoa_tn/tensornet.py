"""Tensor networks over binary variables built from circuits.

Variables are plain integer ids; every variable has dimension 2. A tensor's
data is a C-ordered array of shape ``(2,) * rank`` whose axes follow
``Tensor.vars``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, GateKind, gate_matrix
from .errors import InvalidInputError

VAR_SIZE = 2


@dataclass
class Tensor:
    label: str
    vars: tuple
    data: np.ndarray

    def __post_init__(self):
        self.vars = tuple(int(v) for v in self.vars)
        if len(set(self.vars)) != len(self.vars):
            raise InvalidInputError(f"tensor {self.label!r} repeats a variable: {self.vars}")
        data = np.asarray(self.data)
        if data.size != VAR_SIZE ** len(self.vars):
            raise InvalidInputError(
                f"tensor {self.label!r}: {data.size} entries for rank {len(self.vars)}")
        self.data = data.reshape((VAR_SIZE,) * len(self.vars))

    @property
    def rank(self) -> int:
        return len(self.vars)

    def transpose_to(self, order) -> "Tensor":
        """Same tensor with axes permuted to ``order``."""
        order = tuple(order)
        perm = [self.vars.index(v) for v in order]
        return Tensor(self.label, order, np.transpose(self.data, perm))

    def __repr__(self):
        return f"Tensor({self.label!r}, vars={self.vars}, dtype={self.data.dtype})"


@dataclass
class TensorNetwork:
    tensors: list = field(default_factory=list)
    free_vars: tuple = ()
    next_var_id: int = 0

    def new_var(self) -> int:
        v = self.next_var_id
        self.next_var_id += 1
        return v

    def variables(self) -> list[int]:
        return sorted({v for t in self.tensors for v in t.vars})

    def summed_vars(self) -> list[int]:
        free = set(self.free_vars)
        return [v for v in self.variables() if v not in free]


def circuit_to_network(circ: Circuit, dtype=np.complex128) -> TensorNetwork:
    """Translate a circuit into a closed tensor network.

    One current variable is tracked per qubit wire. Diagonal two-qubit gates
    become rank-2 tensors over the two current wire variables (the diagonal
    reshaped to 2x2) and do not advance the wires. Mixers create a fresh
    variable on their wire and become ``(out, in)`` matrices.
    """
    net = TensorNetwork()
    wire = [None] * circ.n_qubits
    for i, gate in enumerate(circ.gates):
        kind = gate.kind
        label = f"{kind.value}{list(gate.qubits)}#{i}"
        mat = gate_matrix(gate)
        if kind == GateKind.PLUS:
            (q,) = gate.qubits
            wire[q] = net.new_var()
            net.tensors.append(Tensor(label, (wire[q],), mat.astype(dtype)))
        elif kind == GateKind.BRA_PLUS:
            (q,) = gate.qubits
            net.tensors.append(Tensor(label, (wire[q],), mat.conj().astype(dtype)))
        elif gate.diagonal:
            a, b = (wire[q] for q in gate.qubits)
            data = np.diag(mat).reshape(2, 2).astype(dtype)
            net.tensors.append(Tensor(label, (a, b), data))
        elif kind in (GateKind.MIXER_X, GateKind.CONJ_MIXER_X):
            (q,) = gate.qubits
            inp = wire[q]
            out = net.new_var()
            if kind == GateKind.CONJ_MIXER_X:
                # bra side propagates through conj(G)[old, new] = G^dag[new, old]
                mat = mat.T
            net.tensors.append(Tensor(label, (out, inp), mat.astype(dtype)))
            wire[q] = out
        else:
            raise InvalidInputError(f"unsupported gate kind {kind!r}")
    return net


def line_graph(net: TensorNetwork) -> dict[int, set[int]]:
    """Variable interaction graph: nodes are variables, edges join
    variables that share a tensor."""
    adj = {v: set() for t in net.tensors for v in t.vars}
    for t in net.tensors:
        for a in t.vars:
            adj[a].update(b for b in t.vars if b != a)
    return adj
