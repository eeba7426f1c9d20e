"""QAOA MaxCut ansatz circuits and per-edge expectation circuits."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .graphs import Graph, lightcone


@dataclass(frozen=True)
class Angles:
    """QAOA parameters; ``p = len(gammas) = len(betas)``."""

    gammas: tuple
    betas: tuple

    def __post_init__(self):
        gammas = tuple(float(x) for x in self.gammas)
        betas = tuple(float(x) for x in self.betas)
        if len(gammas) != len(betas):
            raise InvalidInputError(
                f"got {len(gammas)} gammas but {len(betas)} betas")
        if not gammas:
            raise InvalidInputError("QAOA depth must be >= 1")
        if not all(math.isfinite(x) for x in gammas + betas):
            raise InvalidInputError("angles must be finite")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def zeros(cls, p: int) -> "Angles":
        return cls((0.0,) * p, (0.0,) * p)

    @classmethod
    def random(cls, p: int, seed=None) -> "Angles":
        rng = np.random.default_rng(seed)
        return cls(tuple(rng.uniform(0, np.pi, p)), tuple(rng.uniform(0, np.pi / 2, p)))

    @classmethod
    def from_strings(cls, gammas: str, betas: str) -> "Angles":
        """Parse comma-separated radian lists, e.g. ``"0.1,0.2"``."""
        try:
            g = [float(x) for x in gammas.split(",") if x.strip()]
            b = [float(x) for x in betas.split(",") if x.strip()]
        except ValueError as exc:
            raise InvalidInputError(f"bad angle list: {exc}") from exc
        return cls(tuple(g), tuple(b))

    @classmethod
    def from_json(cls, text: str) -> "Angles":
        data = json.loads(text)
        try:
            return cls(tuple(data["gammas"]), tuple(data["betas"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"angles JSON needs 'gammas' and 'betas': {exc}") from exc

    def to_json(self) -> str:
        return json.dumps({"gammas": list(self.gammas), "betas": list(self.betas)})


class GateKind(str, enum.Enum):
    PLUS = "PlusState"
    PHASE_ZZ = "PhaseZZ"
    MIXER_X = "MixerX"
    OBSERVABLE_ZZ = "ObservableZZ"
    CONJ_PHASE_ZZ = "ConjPhaseZZ"
    CONJ_MIXER_X = "ConjMixerX"
    BRA_PLUS = "BraPlus"


TWO_QUBIT = {GateKind.PHASE_ZZ, GateKind.CONJ_PHASE_ZZ, GateKind.OBSERVABLE_ZZ}
DIAGONAL = TWO_QUBIT
PARAMETRIC = {GateKind.PHASE_ZZ, GateKind.CONJ_PHASE_ZZ,
              GateKind.MIXER_X, GateKind.CONJ_MIXER_X}
CONJUGATE = {
    GateKind.PLUS: GateKind.BRA_PLUS,
    GateKind.PHASE_ZZ: GateKind.CONJ_PHASE_ZZ,
    GateKind.MIXER_X: GateKind.CONJ_MIXER_X,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple
    angle: float = 0.0

    def __post_init__(self):
        kind = GateKind(self.kind)
        qubits = tuple(int(q) for q in self.qubits)
        need = 2 if kind in TWO_QUBIT else 1
        if len(qubits) != need:
            raise InvalidInputError(f"{kind.value} acts on {need} qubit(s), got {qubits}")
        if need == 2 and qubits[0] == qubits[1]:
            raise InvalidInputError(f"{kind.value} needs distinct qubits, got {qubits}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)

    @property
    def diagonal(self) -> bool:
        return self.kind in DIAGONAL

    def conjugate(self) -> "Gate":
        return Gate(CONJUGATE[self.kind], self.qubits, self.angle)


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate):
        if any(q < 0 or q >= self.n_qubits for q in gate.qubits):
            raise InvalidInputError(
                f"gate {gate.kind.value} on {gate.qubits} outside {self.n_qubits} qubits")

    def append(self, gate: Gate):
        self._check(gate)
        self.gates.append(gate)

    def __len__(self):
        return len(self.gates)

    def count(self, kind) -> int:
        return sum(1 for g in self.gates if g.kind == GateKind(kind))


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense complex128 data for a gate.

    ``PlusState``/``BraPlus`` give a length-2 vector, mixers a 2x2 matrix
    and the two-qubit diagonal gates a 4x4 diagonal matrix over the basis
    ``00, 01, 10, 11``. ``Conj*`` kinds are elementwise conjugates.
    """
    kind = gate.kind
    if kind in (GateKind.PLUS, GateKind.BRA_PLUS):
        return np.full(2, 1 / np.sqrt(2), dtype=np.complex128)
    if kind in (GateKind.MIXER_X, GateKind.CONJ_MIXER_X):
        c, s = np.cos(gate.angle), np.sin(gate.angle)
        m = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
        return m.conj() if kind == GateKind.CONJ_MIXER_X else m
    if kind == GateKind.OBSERVABLE_ZZ:
        return np.diag(np.array([1, -1, -1, 1], dtype=np.complex128))
    # exp(-i*gamma*(1 - s_j s_k)/2): phase only when the bits differ
    phase = np.exp(-1j * gate.angle)
    diag = np.array([1, phase, phase, 1], dtype=np.complex128)
    if kind == GateKind.CONJ_PHASE_ZZ:
        diag = diag.conj()
    return np.diag(diag)


def build_ansatz(g: Graph, angles: Angles) -> Circuit:
    """``|+>`` on every qubit followed by ``p`` cost/mixer layers."""
    circ = Circuit(g.n)
    for q in range(g.n):
        circ.append(Gate(GateKind.PLUS, (q,)))
    for gamma, beta in zip(angles.gammas, angles.betas):
        for u, v in g.edges:
            circ.append(Gate(GateKind.PHASE_ZZ, (u, v), gamma))
        for q in range(g.n):
            circ.append(Gate(GateKind.MIXER_X, (q,), beta))
    return circ


def cancel_commuting(gates, observed) -> list:
    """Drop forward gates that cancel against their mirror in ``U^dag O U``.

    Walks the forward gates from last to first, keeping a gate only if it
    fails to commute with the operator built so far (the observable on
    qubits ``observed`` plus the gates already kept). A mixer commutes when
    its qubit is untouched; a diagonal gate commutes unless one of its
    qubits carries a kept mixer. State preparations on qubits that end up
    untouched are dropped too, since ``<+|+> = 1``.
    """
    touched = set(observed)
    mixed = set()
    kept = []
    for gate in reversed(gates):
        if gate.kind == GateKind.PLUS:
            kept.append(gate)
        elif gate.diagonal:
            if mixed.intersection(gate.qubits):
                kept.append(gate)
                touched.update(gate.qubits)
        elif gate.qubits[0] in touched:
            kept.append(gate)
            mixed.add(gate.qubits[0])
    kept.reverse()
    return [g for g in kept if g.kind != GateKind.PLUS or g.qubits[0] in touched]


def build_edge_expectation_circuit(g: Graph, edge, angles: Angles, simplify=True) -> Circuit:
    """Sandwich circuit ``<+| U^dag ZZ_e U |+>`` on the edge's lightcone.

    The ansatz is built on the depth-``p`` lightcone of ``edge`` only; the
    gates outside it cancel against their conjugates. With ``simplify``,
    gates inside the lightcone that still cancel (e.g. last-layer mixers
    away from the edge) are removed as well; the value is unchanged.
    """
    cone = lightcone(g, edge, angles.p)
    forward = build_ansatz(cone.graph, angles).gates
    if simplify:
        forward = cancel_commuting(forward, cone.edge)
    circ = Circuit(cone.graph.n, list(forward))
    circ.append(Gate(GateKind.OBSERVABLE_ZZ, cone.edge))
    for gate in reversed(forward):
        circ.append(gate.conjugate())
    return circ
