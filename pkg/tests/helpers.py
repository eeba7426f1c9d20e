"""Independent reference contractions used across the tests."""

import itertools

import numpy as np


def einsum_network(net):
    """Full contraction of a closed network with numpy's own path search."""
    labels = {v: i for i, v in enumerate(net.variables())}
    ops = []
    for t in net.tensors:
        ops.extend([t.data, [labels[v] for v in t.vars]])
    return complex(np.einsum(*ops, [], optimize="greedy"))


def enumerate_bucket(tensors, sum_vars):
    """Sum of products over every assignment, result axes in ascending var id."""
    all_vars = sorted({v for t in tensors for v in t.vars})
    out_vars = [v for v in all_vars if v not in set(sum_vars)]
    result = np.zeros((2,) * len(out_vars), dtype=np.complex128)
    for bits in itertools.product((0, 1), repeat=len(all_vars)):
        at = dict(zip(all_vars, bits))
        term = 1
        for t in tensors:
            term = term * t.data[tuple(at[v] for v in t.vars)]
        result[tuple(at[v] for v in out_vars)] += term
    return tuple(out_vars), result


def random_tensor(rng, label, vars_):
    shape = (2,) * len(vars_)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
