"""Vectorized evaluation of the witness circuits for a whole prime set.

One server query evaluates the same circuit family over every prime in
the search set. This evaluator runs them all in a single pass on (k, n)
integer arrays (one row per prime), which is what makes the oracle suites
affordable, while keeping per-prime metrics identical to what the scalar
ZpBackend would have recorded:

* the zero test stores the mathematically equal value (x != 0) -- exact
  for prime p by Fermat -- but meters the canonical square-and-multiply
  chain, exactly like the scalar gadget performs it;
* matrix stages are additions/subtractions only and meter zero
  multiplications;
* degree bounds follow the max/sum rules. Within one stage every entry
  derived from real input shares one degree, so a per-prime scalar bound
  is exact (padding constants sit at degree 0 and never set the max).

Equivalence with the scalar backend (values and metrics) is pinned by
tests. Evaluations for distinct primes are independent; a single run()
is the non-interactive "one parallel call" of the protocol.
"""

import numpy as np

from .circuit import EvalMetrics, RingSpec, fermat_chain_muls
from .sketch import next_pow2, pairwise_matrix, roots_matrix, sketch_matrix, tree_matrix

__all__ = ["BatchVec", "PrimeBatch"]


class BatchVec:
    """Values (k, n) reduced per prime row, plus a per-prime degree bound (k,)."""

    __slots__ = ("vals", "deg")

    def __init__(self, vals, deg):
        self.vals = vals
        self.deg = deg

    @property
    def width(self):
        return self.vals.shape[1]


class PrimeBatch:
    """Metered ring operations carried out for k primes at once."""

    def __init__(self, primes):
        for p in primes:
            RingSpec(p)  # rejects non-primes
        self.primes = tuple(int(p) for p in primes)
        self.k = len(self.primes)
        self.pcol = np.asarray(self.primes, dtype=np.int64)[:, None]
        self._chain = np.array([fermat_chain_muls(p) for p in self.primes], dtype=np.int64)
        self._mul = np.zeros(self.k, dtype=np.int64)
        self._add = np.zeros(self.k, dtype=np.int64)
        self._ispos = np.zeros(self.k, dtype=np.int64)
        self._maxdeg = np.zeros(self.k, dtype=np.int64)
        self.calls = 0

    @property
    def fermat_chains(self):
        """Per-prime multiplication counts of the canonical x^(p-1) chain."""
        return self._chain

    def _saw(self, deg):
        np.maximum(self._maxdeg, deg, out=self._maxdeg)

    def metrics(self) -> list[EvalMetrics]:
        """Per-prime metrics snapshot, in prime order."""
        return [
            EvalMetrics(int(self._mul[i]), int(self._add[i]), int(self._maxdeg[i]), int(self._ispos[i]))
            for i in range(self.k)
        ]

    def charge(self, mul=0, add=0, ispos=0, deg_seen=None):
        """Account ring work performed outside the generic ops (per-prime
        scalars or arrays)."""
        self._mul += mul
        self._add += add
        self._ispos += ispos
        if deg_seen is not None:
            self._saw(deg_seen)

    # -- constructors ---------------------------------------------------------

    def broadcast(self, ints, deg: int) -> BatchVec:
        """Lift one integer vector into every prime row (inputs deg 1,
        constants deg 0)."""
        vals = np.asarray(ints, dtype=np.int64)[None, :] % self.pcol
        d = np.full(self.k, deg, dtype=np.int64)
        self._saw(d)
        return BatchVec(vals, d)

    def lift(self, vals_kn, deg) -> BatchVec:
        """Adopt per-prime values (k, n) with a per-prime degree bound."""
        vals = np.asarray(vals_kn, dtype=np.int64) % self.pcol
        d = np.asarray(deg, dtype=np.int64).copy()
        self._saw(d)
        return BatchVec(vals, d)

    # -- ring operations --------------------------------------------------------

    def add(self, a: BatchVec, b: BatchVec) -> BatchVec:
        self._add += a.width
        d = np.maximum(a.deg, b.deg)
        self._saw(d)
        return BatchVec((a.vals + b.vals) % self.pcol, d)

    def sub(self, a: BatchVec, b: BatchVec) -> BatchVec:
        self._add += a.width
        d = np.maximum(a.deg, b.deg)
        self._saw(d)
        return BatchVec((a.vals - b.vals) % self.pcol, d)

    def mul(self, a: BatchVec, b: BatchVec) -> BatchVec:
        self._mul += a.width
        d = a.deg + b.deg
        self._saw(d)
        return BatchVec((a.vals * b.vals) % self.pcol, d)

    def is_positive(self, a: BatchVec) -> BatchVec:
        n = a.width
        self._mul += n * self._chain
        self._ispos += n
        d = a.deg * (self.pcol[:, 0] - 1)
        self._saw(d)
        return BatchVec((a.vals != 0).astype(np.int64), d)

    def mat_vec(self, M, a: BatchVec) -> BatchVec:
        """Sum-of-subsets stage: no multiplications, degree unchanged."""
        self._add += M.nnz - M.rows + int(np.sum(np.diff(M.row_ptr) == 0))
        return BatchVec(M.apply(a.vals) % self.pcol, a.deg.copy())

    def mat_vec_shared(self, M, ints, deg) -> BatchVec:
        """mat_vec over a ring-independent integer vector: the product is
        computed once over the integers and reduced per prime afterwards,
        which is the same value by the mod homomorphism. deg may be a
        scalar or a per-prime array."""
        w = M.apply(np.asarray(ints, dtype=np.int64))
        self._add += M.nnz - M.rows + int(np.sum(np.diff(M.row_ptr) == 0))
        d = np.broadcast_to(np.asarray(deg, dtype=np.int64), (self.k,)).copy()
        self._saw(d)
        return BatchVec(w[None, :] % self.pcol, d)

    def dot_planes(self, a: BatchVec, planes) -> BatchVec:
        """Inner products of each prime's row with every plane (t, n):
        one multiplication level on top of a's degree."""
        planes = np.asarray(planes, dtype=np.int64)
        t, n = planes.shape
        self._mul += t * n
        self._add += t * (n - 1)
        d = a.deg + 1
        self._saw(d)
        return BatchVec((a.vals @ planes.T) % self.pcol, d)

    # -- the witness pipeline -----------------------------------------------------

    def run_witnesses(self, ind_ints, ind_deg, value_planes=None):
        """Evaluate the first-positive circuit (and optional value
        retrieval) for every prime in one non-interactive call.

        ind_ints is the ring-independent {0, 1} indicator, already padded
        to a power-of-two length; ind_deg its degree bound (scalar or per
        prime). Returns (bits, values): bits has one row of log2(m)
        entries per prime; values is None or one row per prime of
        len(value_planes) retrieved bits.
        """
        self.calls += 1
        ind_ints = np.asarray(ind_ints, dtype=np.int64)
        m = len(ind_ints)
        assert m == next_pow2(m), "indicator must be padded to a power of two"
        w = self.mat_vec_shared(tree_matrix(m), ind_ints, ind_deg)
        u = self.is_positive(self.mat_vec(roots_matrix(m), self.is_positive(w)))
        one_hot = self.mat_vec(pairwise_matrix(m), u)
        bits = self.mat_vec(sketch_matrix(m), one_hot)
        values = None
        if value_planes is not None:
            values = self.dot_planes(one_hot, value_planes)
        return bits, values
