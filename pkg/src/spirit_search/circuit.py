"""Ring-restricted, metered evaluation backend over Z_p.

This is the reference "server side": every computation goes through
addition, subtraction, and multiplication modulo a prime p, plus the two
polynomial gadgets built from them (a Fermat zero test and a bitwise
equality test). There is deliberately no comparison, branch-on-value, or
division anywhere on the public surface, so anything expressed against
this backend is a polynomial and could run under an encryption scheme
that evaluates polynomials over Z_p. A real encrypted backend would slot
in behind the same method set; only this plaintext one is provided.

Metering conventions
--------------------
Every value carries an upper bound on its multiplicative degree:

* a fresh input has degree 1, a constant degree 0;
* deg(a + b) = max(deg a, deg b);
* deg(a * b) = deg a + deg b.

Cancellations are not detected, matching the fact that complexity claims
about the evaluated polynomials are upper bounds. EvalMetrics counts the
ring operations actually performed; polynomial *size* (monomial count) is
not tracked directly, operation counts are the measurable proxy for it.
"""

from dataclasses import dataclass, field

from .errors import (
    DimensionMismatchError,
    LengthMismatchError,
    NonPrimeModulusError,
    RingMismatchError,
)
from .modring import is_prime

__all__ = ["RingSpec", "MeteredValue", "EvalMetrics", "ZpBackend", "fermat_chain_muls"]


@dataclass(frozen=True)
class RingSpec:
    """The ring Z_p. The modulus must be prime: the zero-test gadget maps
    x to x^(p-1), which sends every nonzero residue to 1 only for prime p."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrimeModulusError(f"modulus {self.p} is not prime")


@dataclass
class EvalMetrics:
    """Operation counters for one evaluation session.

    mul_count / add_count are ring multiplications and additions
    (subtraction counts as an addition: it is addition of the additive
    inverse). ispos_calls counts per-entry invocations of the zero-test
    gadget. max_degree is the largest degree bound of any value produced.
    All fields only grow while a session runs.
    """

    mul_count: int = 0
    add_count: int = 0
    max_degree: int = 0
    ispos_calls: int = 0

    def saw(self, deg: int) -> None:
        if deg > self.max_degree:
            self.max_degree = deg

    def merge(self, other: "EvalMetrics") -> None:
        self.mul_count += other.mul_count
        self.add_count += other.add_count
        self.ispos_calls += other.ispos_calls
        self.saw(other.max_degree)

    def copy(self) -> "EvalMetrics":
        return EvalMetrics(self.mul_count, self.add_count, self.max_degree, self.ispos_calls)

    def as_dict(self) -> dict:
        return {
            "mul": self.mul_count,
            "add": self.add_count,
            "ispos": self.ispos_calls,
            "max_degree": self.max_degree,
        }


@dataclass(frozen=True)
class MeteredValue:
    """An element of Z_p together with its accumulated degree bound."""

    v: int
    deg: int
    ring: RingSpec
    backend: "ZpBackend" = field(compare=False, repr=False)

    def __add__(self, other):
        return self.backend.add(self, other)

    def __sub__(self, other):
        return self.backend.sub(self, other)

    def __mul__(self, other):
        return self.backend.mul(self, other)


def fermat_chain_muls(p: int) -> int:
    """Ring multiplications in the canonical square-and-multiply chain for
    x^(p-1): one square per exponent bit after the first, plus one multiply
    per set bit after the first."""
    e = p - 1
    if e <= 1:
        return 0
    return (e.bit_length() - 1) + (bin(e).count("1") - 1)


class ZpBackend:
    """Plaintext reference implementation of the evaluation backend.

    Values are plain residues; a separate vectorized evaluator
    (batch.PrimeBatch) produces identical values and metrics for whole
    prime sets at once. Instances are cheap; use one per evaluation
    session so the metrics describe a single circuit.
    """

    def __init__(self, p: int):
        self.ring = RingSpec(p)
        self.metrics = EvalMetrics()

    # -- value constructors -------------------------------------------------

    def input(self, v: int) -> MeteredValue:
        """A fresh input variable (degree 1), reduced into the ring."""
        return self._make(v % self.ring.p, 1)

    def constant(self, v: int) -> MeteredValue:
        return self._make(v % self.ring.p, 0)

    def _make(self, v, deg):
        self.metrics.saw(deg)
        return MeteredValue(v, deg, self.ring, self)

    def _check(self, a: MeteredValue, b: MeteredValue):
        if a.ring.p != b.ring.p:
            raise RingMismatchError(f"mixed moduli {a.ring.p} and {b.ring.p}")

    # -- ring operations ----------------------------------------------------

    def add(self, a: MeteredValue, b: MeteredValue) -> MeteredValue:
        self._check(a, b)
        self.metrics.add_count += 1
        return self._make((a.v + b.v) % self.ring.p, max(a.deg, b.deg))

    def sub(self, a: MeteredValue, b: MeteredValue) -> MeteredValue:
        self._check(a, b)
        self.metrics.add_count += 1
        return self._make((a.v - b.v) % self.ring.p, max(a.deg, b.deg))

    def mul(self, a: MeteredValue, b: MeteredValue) -> MeteredValue:
        self._check(a, b)
        self.metrics.mul_count += 1
        return self._make((a.v * b.v) % self.ring.p, a.deg + b.deg)

    # -- gadgets --------------------------------------------------------------

    def is_positive(self, xs) -> list[MeteredValue]:
        """Entrywise zero test: 0 maps to 0, everything else to 1.

        Computed as x^(p-1) by square-and-multiply, so the degree of each
        output is exactly (p-1) times the input degree while only
        O(log p) ring multiplications are spent per entry.
        """
        e = self.ring.p - 1
        out = []
        for x in xs:
            if x.ring.p != self.ring.p:
                raise RingMismatchError(f"value in Z_{x.ring.p}, backend in Z_{self.ring.p}")
            acc = x  # x^1; p = 2 ends here with zero multiplications
            for bit in bin(e)[3:]:
                acc = self.mul(acc, acc)
                if bit == "1":
                    acc = self.mul(acc, x)
            self.metrics.ispos_calls += 1
            out.append(acc)
        return out

    def is_eq(self, a_bits, b_bits) -> MeteredValue:
        """1 iff the two bit-vectors are equal, via prod(1 - (a_i - b_i)^2).

        Operands may be MeteredValues or plain 0/1 ints (lifted to fresh
        inputs). Works over any prime ring since every intermediate stays
        in {0, 1}; the result degree is 2t times the operand degree.
        """
        a_bits = [x if isinstance(x, MeteredValue) else self.input(x) for x in a_bits]
        b_bits = [x if isinstance(x, MeteredValue) else self.input(x) for x in b_bits]
        if len(a_bits) != len(b_bits):
            raise LengthMismatchError(f"{len(a_bits)} vs {len(b_bits)} bits")
        assert a_bits, "equality test needs at least one bit"
        assert all(x.v in (0, 1) for x in a_bits + b_bits)
        one = self.constant(1)
        acc = None
        for a, b in zip(a_bits, b_bits):
            d = self.sub(a, b)
            term = self.sub(one, self.mul(d, d))
            acc = term if acc is None else self.mul(acc, term)
        return acc

    def mat_vec(self, M, xs) -> list[MeteredValue]:
        """y = M @ xs using additions and subtractions only.

        M is a sparse matrix with entries in {-1, 0, +1} (see
        sketch.SparseBinaryMatrix). Each row is accumulated starting from
        its first +1 entry, so a row with k entries costs k - 1 ring
        operations and zero multiplications. Empty rows yield constant 0.
        """
        if len(xs) != M.cols:
            raise DimensionMismatchError(f"matrix has {M.cols} cols, vector has {len(xs)}")
        out = []
        for j in range(M.rows):
            entries = M.row_entries(j)
            if not entries:
                out.append(self.constant(0))
                continue
            seed = next((i for i, (_, s) in enumerate(entries) if s > 0), None)
            if seed is None:
                acc = self.constant(0)
            else:
                acc = xs[entries[seed][0]]
            for i, (col, sign) in enumerate(entries):
                if i == seed:
                    continue
                acc = self.add(acc, xs[col]) if sign > 0 else self.sub(acc, xs[col])
            out.append(acc)
        return out
