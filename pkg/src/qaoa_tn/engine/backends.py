"""Bucket contraction backends.

Two CPU engines with opposite cost profiles (low overhead vs. high throughput):

* ``naive`` enumerates every index assignment in one ``numpy.einsum`` call
  with path optimization disabled. Few Python-level calls, no BLAS.
* ``matmul`` folds the bucket's tensors pairwise; each pair is permuted and
  reshaped into a batched matrix product. More calls per bucket, but the
  heavy lifting goes through the matrix-multiply kernel.

``MixedBackend`` routes each bucket to one of two backends by width. To plug
in an accelerator, subclass :class:`Backend`, implement
:meth:`Backend.contract_arrays`, and :func:`register_backend` it.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError, ResourceLimitError
from ..tensornet import Tensor

DEFAULT_MAX_WIDTH = 30
# numpy.einsum operand limit (NPY_MAXARGS is 32 on numpy<2)
_EINSUM_MAX_OPERANDS = 30


def tensor_bytes(width: int, dtype=np.complex128) -> int:
    """Bytes held by a dense tensor over ``width`` binary variables."""
    return np.dtype(dtype).itemsize * 2 ** width


def pairwise_contract(a, a_ix, b, b_ix, keep):
    """Contract two arrays, summing every index not in ``keep``.

    Indices shared by both operands and kept are batch dimensions. Indices
    summed and present in only one operand are reduced first. Returns the
    result array and its index tuple (batch, left-only, right-only order).
    Works for any index dimensions.
    """
    a_ix, b_ix = tuple(a_ix), tuple(b_ix)
    keep = set(keep)
    a, a_ix = _reduce_private(a, a_ix, b_ix, keep)
    b, b_ix = _reduce_private(b, b_ix, a_ix, keep)
    shared = [i for i in a_ix if i in b_ix]
    batch = [i for i in shared if i in keep]
    summed = [i for i in shared if i not in keep]
    left = [i for i in a_ix if i not in b_ix]
    right = [i for i in b_ix if i not in a_ix]
    dims = dict(zip(a_ix, a.shape))
    dims.update(zip(b_ix, b.shape))

    def size(ixs):
        return int(np.prod([dims[i] for i in ixs], dtype=np.int64))

    am = np.transpose(a, [a_ix.index(i) for i in batch + left + summed])
    am = am.reshape(size(batch), size(left), size(summed))
    bm = np.transpose(b, [b_ix.index(i) for i in batch + summed + right])
    bm = bm.reshape(size(batch), size(summed), size(right))
    out = np.matmul(am, bm)
    out_ix = tuple(batch + left + right)
    return out.reshape([dims[i] for i in out_ix]), out_ix


def _reduce_private(x, x_ix, other_ix, keep):
    drop = [k for k, i in enumerate(x_ix) if i not in keep and i not in other_ix]
    if not drop:
        return x, x_ix
    return x.sum(axis=tuple(drop)), tuple(i for k, i in enumerate(x_ix) if k not in drop)


def einsum_contract(arrays, indices, out_ix):
    """Direct enumeration over all index assignments (no path search)."""
    labels = {}
    for ix in list(indices) + [out_ix]:
        for i in ix:
            labels.setdefault(i, len(labels))
    if len(labels) > 52:
        raise InvalidInputError(f"{len(labels)} distinct indices exceed einsum's 52 labels")
    ops = []
    for arr, ix in zip(arrays, indices):
        ops.extend([arr, [labels[i] for i in ix]])
    ops.append([labels[i] for i in out_ix])
    return np.einsum(*ops, optimize=False)


class Backend:
    """Contracts one bucket. Subclasses implement :meth:`contract_arrays`."""

    name = "abstract"

    def __init__(self, max_width: int = DEFAULT_MAX_WIDTH):
        self.max_width = max_width

    def contract_arrays(self, arrays, indices, sum_vars, out_vars):
        """Return an array over ``out_vars`` (in that axis order)."""
        raise NotImplementedError

    def select(self, width: int) -> "Backend":
        """Backend that will actually run a bucket of this width."""
        return self

    def contract(self, bucket) -> Tensor:
        """Sum ``bucket``'s product over its ``sum_vars``.

        Result axes are in ascending variable id order; a bucket that sums
        all its variables yields a rank-0 tensor.
        """
        varset = bucket.variables()
        out_vars = tuple(sorted(varset.difference(bucket.sum_vars)))
        if len(out_vars) > self.max_width:
            raise ResourceLimitError(
                f"bucket result width {len(out_vars)} exceeds cap {self.max_width} "
                f"({tensor_bytes(len(out_vars)) / 2**30:.0f} GiB at complex128)",
                width=len(out_vars))
        sum_vars = [v for v in bucket.sum_vars if v in varset]
        data = self.select(len(varset)).contract_arrays(
            [t.data for t in bucket.tensors], [t.vars for t in bucket.tensors],
            sum_vars, out_vars)
        label = "sum(" + ",".join(str(v) for v in bucket.sum_vars) + ")"
        return Tensor(label, out_vars, data)

    def __repr__(self):
        return f"{type(self).__name__}(max_width={self.max_width})"


class NaiveBackend(Backend):
    name = "naive"

    def contract_arrays(self, arrays, indices, sum_vars, out_vars):
        arrays, indices = list(arrays), [tuple(ix) for ix in indices]
        if len(arrays) > _EINSUM_MAX_OPERANDS:
            # fold the overflow into one partial product over its own indices
            head, tail = arrays[:_EINSUM_MAX_OPERANDS - 1], arrays[_EINSUM_MAX_OPERANDS - 1:]
            tail_ix = indices[_EINSUM_MAX_OPERANDS - 1:]
            keep = set(out_vars) | {i for ix in indices[:_EINSUM_MAX_OPERANDS - 1] for i in ix}
            part_ix = tuple(sorted({i for ix in tail_ix for i in ix} & keep))
            part = self.contract_arrays(tail, tail_ix, [], part_ix)
            arrays = head + [part]
            indices = indices[:_EINSUM_MAX_OPERANDS - 1] + [part_ix]
        return einsum_contract(arrays, indices, out_vars)


class MatmulBackend(Backend):
    name = "matmul"

    def contract_arrays(self, arrays, indices, sum_vars, out_vars):
        sum_set = set(sum_vars)
        # smallest operands first: the wide tensor is touched by one product
        order = sorted(range(len(arrays)), key=lambda k: np.size(arrays[k]))
        arrays = [arrays[k] for k in order]
        indices = [tuple(indices[k]) for k in order]
        # a summed index can be eliminated at the last pair that touches it
        last = {}
        for k, ix in enumerate(indices):
            for i in ix:
                last[i] = k
        acc, acc_ix = arrays[0], indices[0]
        if len(arrays) == 1:
            return _finish(acc, acc_ix, out_vars)
        for k in range(1, len(arrays)):
            keep = {i for i in acc_ix + indices[k] if i not in sum_set or last[i] > k}
            acc, acc_ix = pairwise_contract(acc, acc_ix, arrays[k], indices[k], keep)
        return _finish(acc, acc_ix, out_vars)


def _finish(arr, ix, out_vars):
    extra = tuple(k for k, i in enumerate(ix) if i not in out_vars)
    if extra:
        arr = arr.sum(axis=extra)
        ix = tuple(i for i in ix if i in out_vars)
    return np.transpose(arr, [ix.index(v) for v in out_vars])


class MixedBackend(Backend):
    """Width-threshold dispatcher: ``width <= threshold`` goes to ``low``,
    anything wider to ``high``."""

    def __init__(self, threshold: int = 15, low: Backend = None, high: Backend = None,
                 max_width: int = DEFAULT_MAX_WIDTH):
        super().__init__(max_width)
        if not 1 <= threshold <= 40:
            raise InvalidInputError(f"threshold must be in [1, 40], got {threshold}")
        self.threshold = threshold
        self.low = low if low is not None else NaiveBackend(max_width)
        self.high = high if high is not None else MatmulBackend(max_width)

    @property
    def name(self):
        return f"mixed({self.threshold})"

    def select(self, width):
        return self.low if width <= self.threshold else self.high

    def contract_arrays(self, arrays, indices, sum_vars, out_vars):
        width = len({i for ix in indices for i in ix})
        return self.select(width).contract_arrays(arrays, indices, sum_vars, out_vars)

    def __repr__(self):
        return f"MixedBackend(threshold={self.threshold}, low={self.low!r}, high={self.high!r})"


_REGISTRY = {"naive": NaiveBackend, "matmul": MatmulBackend}


def register_backend(name: str, factory) -> None:
    """Make ``factory(max_width=...)`` available through :func:`get_backend`."""
    _REGISTRY[name] = factory


def get_backend(name: str, threshold: int = 15, max_width: int = DEFAULT_MAX_WIDTH) -> Backend:
    """Look up a backend by name; ``"mixed"`` builds naive/matmul dispatch."""
    if name == "mixed":
        return MixedBackend(threshold, max_width=max_width)
    if name.startswith("mixed(") and name.endswith(")"):
        return MixedBackend(int(name[6:-1]), max_width=max_width)
    try:
        return _REGISTRY[name](max_width=max_width)
    except KeyError:
        raise InvalidInputError(
            f"unknown backend {name!r}; choose from {sorted(_REGISTRY) + ['mixed']}") from None
