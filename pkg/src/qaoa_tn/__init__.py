"""Lightcone tensor-network simulation of QAOA MaxCut energies."""

from .circuits import Angles, Circuit, Gate, GateKind, build_ansatz, build_edge_expectation_circuit
from .graphs import Graph, lightcone, maxcut_value, random_regular
from .engine import energy_expectation, get_backend
from .statevector import oracle_energy

__version__ = "0.1.0"
