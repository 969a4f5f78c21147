"""First-positive-index sketch: the four universal matrices and the
composed pipeline that maps a non-negative vector to the binary
representation of its first positive index.

Tree/array convention: a full binary tree over m = 2^d leaves is stored
root-first in a length 2m-1 array with 1-based node indices; children of
node j sit at 2j and 2j+1, leaf i at m-1+i. `parents` and `lop` speak
this 1-based index language; matrix rows/columns and numpy vectors are
0-based (array slot i holds node i+1).

The pipeline is sketch @ pairwise @ i(roots @ i(tree @ x)) where i() is
the entrywise zero test. Over the reals it is exact; modulo a prime p it
decodes the same index whenever p divides none of the nonzero tree sums
along the target leaf's root path (see modring.is_A_correct).

All matrices depend only on m. They are built once per size and cached;
construction is excluded from query accounting.
"""

from functools import lru_cache

import numpy as np

from .errors import NegativeInputError
from .modring import ceil_log2

__all__ = [
    "SparseBinaryMatrix",
    "next_pow2",
    "parents",
    "lop",
    "tree_matrix",
    "roots_matrix",
    "pairwise_matrix",
    "sketch_matrix",
    "first_positive_real",
    "first_positive_mod",
    "witness_sums",
]


def next_pow2(m: int) -> int:
    assert m >= 1
    return 1 << ceil_log2(m)


def _require_pow2(m: int):
    if m < 1 or m & (m - 1):
        raise ValueError(f"m must be a power of two (pad inputs first), got {m}")


class SparseBinaryMatrix:
    """Row-indexed sparse matrix with entries in {-1, 0, +1}.

    Stored CSR-style: row_ptr (rows+1), col_idx and sign (nnz), with
    column indices strictly ascending inside each row.
    """

    def __init__(self, rows: int, cols: int, row_ptr, col_idx, sign):
        self.rows = rows
        self.cols = cols
        self.row_ptr = np.asarray(row_ptr, dtype=np.int64)
        self.col_idx = np.asarray(col_idx, dtype=np.int64)
        self.sign = np.asarray(sign, dtype=np.int64)
        assert self.row_ptr.shape == (rows + 1,)
        assert self.row_ptr[0] == 0 and self.row_ptr[-1] == len(self.col_idx)

    @classmethod
    def from_rows(cls, rows_entries, cols: int) -> "SparseBinaryMatrix":
        """Build from a list of per-row [(col, sign), ...] lists."""
        ptr = [0]
        col_idx, sign = [], []
        for entries in rows_entries:
            assert all(c2 > c1 for (c1, _), (c2, _) in zip(entries, entries[1:]))
            for c, s in entries:
                assert 0 <= c < cols and s in (-1, 1)
                col_idx.append(c)
                sign.append(s)
            ptr.append(len(col_idx))
        return cls(len(rows_entries), cols, ptr, col_idx, sign)

    @property
    def nnz(self) -> int:
        return len(self.col_idx)

    def row_entries(self, j: int) -> list[tuple[int, int]]:
        lo, hi = self.row_ptr[j], self.row_ptr[j + 1]
        return list(zip(self.col_idx[lo:hi].tolist(), self.sign[lo:hi].tolist()))

    def has_empty_rows(self) -> bool:
        return bool(np.any(np.diff(self.row_ptr) == 0))

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Plain (unmetered) matrix-vector product for 1-D or (k, cols) input."""
        vec = np.asarray(vec)
        if vec.shape[-1] != self.cols:
            raise ValueError(f"matrix has {self.cols} cols, vector has {vec.shape[-1]}")
        if self.rows == 0:
            return np.zeros(vec.shape[:-1] + (0,), dtype=vec.dtype)
        contrib = self.sign.astype(vec.dtype) * vec[..., self.col_idx]
        if self.has_empty_rows():
            out = np.zeros(vec.shape[:-1] + (self.rows,), dtype=vec.dtype)
            nonempty = np.nonzero(np.diff(self.row_ptr))[0]
            if len(nonempty):
                # consecutive nonempty row starts delimit exactly their own
                # entries, since empty rows do not advance row_ptr
                out[..., nonempty] = np.add.reduceat(contrib, self.row_ptr[nonempty], axis=-1)
            return out
        return np.add.reduceat(contrib, self.row_ptr[:-1], axis=-1)


def parents(m: int, j: int) -> set[int]:
    """Array indices (1-based) of leaf j's ancestors, leaf and root included."""
    _require_pow2(m)
    if not 1 <= j <= m:
        raise ValueError(f"leaf index {j} out of range [1, {m}]")
    i = m - 1 + j
    out = set()
    while i >= 1:
        out.add(i)
        i //= 2
    return out


def lop(m: int, j: int) -> set[int]:
    """Left-siblings of leaf j's ancestors that are themselves right children.

    Summing tree labels over lop(j+1) gives the prefix sum of the first j
    leaves. j = m+1 addresses the virtual leaf past the end; its set is
    the root alone, whose label is the total sum.
    """
    _require_pow2(m)
    if not 1 <= j <= m + 1:
        raise ValueError(f"index {j} out of range [1, {m + 1}]")
    if j == m + 1:
        return {1}
    return {k - 1 for k in parents(m, j) if k % 2 == 1 and k != 1}


@lru_cache(maxsize=None)
def tree_matrix(m: int) -> SparseBinaryMatrix:
    """(2m-1) x m matrix whose product with x is the tree's array
    representation: row j-1 marks the leaves under node j."""
    _require_pow2(m)
    d = ceil_log2(m)
    ptr = [0]
    cols = []
    for level in range(d + 1):
        width = m >> level
        for _ in range(1 << level):
            ptr.append(ptr[-1] + width)
        cols.append(np.arange(m, dtype=np.int64))
    col_idx = np.concatenate(cols)
    return SparseBinaryMatrix(2 * m - 1, m, ptr, col_idx, np.ones(len(col_idx), dtype=np.int64))


@lru_cache(maxsize=None)
def roots_matrix(m: int) -> SparseBinaryMatrix:
    """m x (2m-1) matrix with row j-1 the indicator of lop(j+1): applied to
    a tree array it yields all m prefix sums. Each row has at most log2 m
    entries (row m has exactly one, the root)."""
    _require_pow2(m)
    rows = [sorted(k - 1 for k in lop(m, j + 1)) for j in range(1, m + 1)]
    return SparseBinaryMatrix.from_rows(
        [[(c, 1) for c in row] for row in rows], 2 * m - 1
    )


@lru_cache(maxsize=None)
def pairwise_matrix(m: int) -> SparseBinaryMatrix:
    """m x m first-difference matrix: (Pu)(k) = u(k) - u(k-1), (Pu)(1) = u(1)."""
    _require_pow2(m)
    rows = [[(0, 1)]] + [[(k - 1, -1), (k, 1)] for k in range(1, m)]
    return SparseBinaryMatrix.from_rows(rows, m)


@lru_cache(maxsize=None)
def sketch_matrix(m: int) -> SparseBinaryMatrix:
    """log2(m) x m matrix whose column k is the binary representation of
    k-1, most significant bit in row 0. Product with a one-hot vector at
    position k yields the bits of k-1."""
    _require_pow2(m)
    d = ceil_log2(m)
    rows = []
    for r in range(d):
        bit = d - 1 - r
        rows.append([(k, 1) for k in range(m) if (k >> bit) & 1])
    return SparseBinaryMatrix.from_rows(rows, m)


def _as_nonneg_array(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("input must be a non-empty 1-D vector")
    if np.any(arr < 0):
        raise NegativeInputError("input entries must be non-negative")
    return arr


def first_positive_real(x) -> list[int]:
    """Binary representation (MSB first) of the first positive index minus
    one, over the reals. All zeros for the zero vector; callers separate
    the index-0/index-1 ambiguity by inspecting x(1).

    Inputs of non-power-of-two length are zero-padded on the right.
    """
    arr = _as_nonneg_array(x)
    m = next_pow2(len(arr))
    if m != len(arr):
        arr = np.concatenate([arr, np.zeros(m - len(arr))])
    w = tree_matrix(m).apply(arr)
    wp = (w != 0).astype(np.float64)
    v = roots_matrix(m).apply(wp)
    u = (v != 0).astype(np.float64)
    b = sketch_matrix(m).apply(pairwise_matrix(m).apply(u))
    return [int(round(t)) for t in b]


def first_positive_mod(values, backend) -> list:
    """The metered mod-p pipeline over a vector of backend values.

    Returns the log2(m) output bits as MeteredValues. On fresh inputs the
    output degree is exactly (p-1)^2: the two zero tests each multiply
    degree by p-1 and the matrix stages leave it unchanged. The output is
    correct whenever p is compatible with the tree sums on the target
    leaf's root path; p > m suffices.

    Input of non-power-of-two length is padded with constants.
    """
    values = list(values)
    m = next_pow2(len(values))
    values = values + [backend.constant(0)] * (m - len(values))
    w = backend.mat_vec(tree_matrix(m), values)
    wp = backend.is_positive(w)
    v = backend.mat_vec(roots_matrix(m), wp)
    u = backend.is_positive(v)
    return backend.mat_vec(sketch_matrix(m), backend.mat_vec(pairwise_matrix(m), u))


def witness_sums(indicator, i_star: int) -> set[int]:
    """The set A of tree sums along parents(i_star), computed over the
    integers. These are the values a prime must not divide for the mod-p
    run to decode i_star. Non-power-of-two inputs are zero-padded first.
    """
    arr = np.asarray(indicator, dtype=np.int64)
    m = next_pow2(len(arr))
    if m != len(arr):
        arr = np.concatenate([arr, np.zeros(m - len(arr), dtype=np.int64)])
    w = tree_matrix(m).apply(arr)
    return {int(w[k - 1]) for k in parents(m, i_star)}
