import numpy as np
import pytest

from qaoa_tn.circuits import (Angles, Circuit, Gate, GateKind, build_edge_expectation_circuit)
from qaoa_tn.errors import InvalidInputError
from qaoa_tn.statevector import expectation_zz, run_ansatz
from qaoa_tn.tensornet import Tensor, TensorNetwork, circuit_to_network, line_graph

from helpers import einsum_network


def test_plus_bra_network():
    circ = Circuit(1, [Gate(GateKind.PLUS, (0,)), Gate(GateKind.BRA_PLUS, (0,))])
    net = circuit_to_network(circ)
    assert [t.vars for t in net.tensors] == [(0,), (0,)]
    assert net.free_vars == ()
    assert einsum_network(net) == pytest.approx(1.0)


def test_diagonal_gates_are_rank_two(single_edge):
    circ = build_edge_expectation_circuit(single_edge, (0, 1), Angles((0.3,), (0.2,)))
    net = circuit_to_network(circ)
    for gate_label, t in ((t.label, t) for t in net.tensors):
        if "ZZ" in gate_label:
            assert t.rank == 2


def test_variable_count_follows_construction_rule(k4):
    circ = build_edge_expectation_circuit(k4, (0, 2), Angles((0.3,), (0.6,)), simplify=False)
    net = circuit_to_network(circ)
    # independent walk: one variable per prepared wire, one per mixer application
    expected = sum(1 for g in circ.gates
                   if g.kind in (GateKind.PLUS, GateKind.MIXER_X, GateKind.CONJ_MIXER_X))
    assert len(net.variables()) == expected == net.next_var_id


def test_mixer_tensor_axis_order_is_out_in():
    circ = Circuit(1, [Gate(GateKind.PLUS, (0,)), Gate(GateKind.MIXER_X, (0,), 0.4)])
    net = circuit_to_network(circ)
    mixer = net.tensors[1]
    assert mixer.vars == (1, 0)
    c, s = np.cos(0.4), np.sin(0.4)
    np.testing.assert_allclose(mixer.data, [[c, -1j * s], [-1j * s, c]])


@pytest.mark.parametrize("simplify", [False, True])
def test_triangle_network_matches_state_vector(triangle, simplify):
    a = Angles((0.7,), (0.3,))
    sv = run_ansatz(triangle, a)
    for e in triangle.edges:
        net = circuit_to_network(build_edge_expectation_circuit(triangle, e, a, simplify=simplify))
        assert einsum_network(net) == pytest.approx(expectation_zz(sv, e), abs=1e-12)


def test_complex64_networks():
    circ = Circuit(1, [Gate(GateKind.PLUS, (0,)), Gate(GateKind.BRA_PLUS, (0,))])
    net = circuit_to_network(circ, dtype=np.complex64)
    assert all(t.data.dtype == np.complex64 for t in net.tensors)


def test_unknown_gate_kind_is_rejected():
    class Fake:
        kind = type("K", (), {"value": "Bogus"})()
        qubits = (0,)
        diagonal = False
        angle = 0.0

    circ = Circuit(1)
    circ.gates.append(Fake())
    with pytest.raises((InvalidInputError, KeyError, ValueError)):
        circuit_to_network(circ)


# --- Tensor ------------------------------------------------------------------

def test_tensor_layout_is_row_major():
    data = np.arange(8)
    t = Tensor("t", (5, 6, 7), data)
    for b in np.ndindex(2, 2, 2):
        assert t.data[b] == b[0] * 4 + b[1] * 2 + b[2]


def test_tensor_validation():
    with pytest.raises(InvalidInputError):
        Tensor("t", (1, 1), np.zeros(4))
    with pytest.raises(InvalidInputError):
        Tensor("t", (1, 2), np.zeros(3))


def test_transpose_to():
    t = Tensor("t", (3, 9), np.array([[1, 2], [3, 4]]))
    u = t.transpose_to((9, 3))
    assert u.vars == (9, 3)
    np.testing.assert_array_equal(u.data, [[1, 3], [2, 4]])


# --- line graph ------------------------------------------------------------

def test_line_graph_examples():
    net = TensorNetwork([Tensor("t", (0, 1), np.zeros(4))])
    assert line_graph(net) == {0: {1}, 1: {0}}
    plus = circuit_to_network(Circuit(1, [Gate(GateKind.PLUS, (0,)), Gate(GateKind.BRA_PLUS, (0,))]))
    assert line_graph(plus) == {0: set()}


def test_line_graph_matches_pairwise_scan(triangle):
    net = circuit_to_network(build_edge_expectation_circuit(triangle, (0, 1), Angles((0.7,), (0.3,))))
    adj = line_graph(net)
    variables = net.variables()
    for a in variables:
        for b in variables:
            shared = any(a in t.vars and b in t.vars for t in net.tensors)
            assert (b in adj[a]) == (shared and a != b)
