"""Dense state-vector reference simulator for small QAOA instances.

Amplitudes are stored as an ``(2,) * n`` array, axis ``q`` being qubit ``q``
(qubit 0 is the most significant bit of the flat index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Angles, Gate, GateKind, build_ansatz, gate_matrix
from .errors import InvalidInputError, ResourceLimitError
from .graphs import Graph

DEFAULT_QUBIT_CAP = 24


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def plus(cls, n: int) -> "StateVector":
        amps = np.full((2,) * n, 2 ** (-n / 2), dtype=np.complex128)
        return cls(n, amps)

    @property
    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat))

    def apply_1q(self, mat, q):
        psi = np.moveaxis(self.amplitudes, q, 0)
        psi = np.tensordot(mat, psi, axes=([1], [0]))
        self.amplitudes = np.moveaxis(psi, 0, q)

    def apply_diag_2q(self, diag, q0, q1):
        # elementwise phase over the (q0, q1) pair, broadcast over the rest
        shape = [1] * self.n_qubits
        shape[q0] = shape[q1] = 2
        phase = np.asarray(diag).reshape(2, 2)
        if q0 > q1:
            phase = phase.T
        self.amplitudes = self.amplitudes * phase.reshape(shape)

    def apply(self, gate: Gate):
        mat = gate_matrix(gate)
        if gate.kind == GateKind.PLUS:
            return
        if gate.diagonal:
            self.apply_diag_2q(np.diag(mat), *gate.qubits)
        elif gate.kind in (GateKind.MIXER_X, GateKind.CONJ_MIXER_X):
            self.apply_1q(mat, gate.qubits[0])
        else:
            raise InvalidInputError(f"state-vector oracle cannot apply {gate.kind.value}")


def run_ansatz(g: Graph, angles: Angles, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Evolve ``|+>^n`` through the QAOA ansatz for ``g``."""
    if g.n > cap:
        raise ResourceLimitError(f"{g.n} qubits exceed state-vector cap {cap}", width=g.n)
    sv = StateVector.plus(g.n)
    for gate in build_ansatz(g, angles).gates:
        sv.apply(gate)
    return sv


def _spins(n: int, q: int) -> np.ndarray:
    shape = [1] * n
    shape[q] = 2
    return np.array([1.0, -1.0]).reshape(shape)


def expectation_zz(sv: StateVector, edge) -> float:
    u, v = edge
    if not (0 <= u < sv.n_qubits and 0 <= v < sv.n_qubits):
        raise InvalidInputError(f"edge {edge} outside {sv.n_qubits} qubits")
    prob = np.abs(sv.amplitudes) ** 2
    return float(np.sum(prob * _spins(sv.n_qubits, u) * _spins(sv.n_qubits, v)))


def cut_values(g: Graph) -> np.ndarray:
    """Cut size of every basis state, as an ``(2,) * n`` array."""
    cuts = np.zeros((2,) * g.n)
    for u, v in g.edges:
        cuts = cuts + (1 - _spins(g.n, u) * _spins(g.n, v)) / 2
    return cuts


def expectation_cost(sv: StateVector, g: Graph) -> float:
    """``<C>`` assembled from the per-edge ZZ terms."""
    return g.m / 2 - 0.5 * sum(expectation_zz(sv, e) for e in g.edges)


def expectation_cost_direct(sv: StateVector, g: Graph) -> float:
    """``<C>`` as the probability-weighted mean cut size."""
    return float(np.sum(np.abs(sv.amplitudes) ** 2 * cut_values(g)))


def oracle_energy(g: Graph, angles: Angles, cap: int = DEFAULT_QUBIT_CAP) -> float:
    return expectation_cost(run_ansatz(g, angles, cap), g)
