"""Modular-arithmetic utilities: prime generation, the search prime set,
and compatibility checks between a prime and a set of witness sums.

A prime p is *compatible* with a set A of non-negative integers when every
a in A satisfies: a == 0 iff a % p == 0. Running the sketch modulo such a
prime decodes the same index as the run over the integers, which is what
makes the per-prime coreset items trustworthy.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NoCorrectPrimeError

__all__ = [
    "PrimeSet",
    "ceil_log2",
    "is_prime",
    "gen_primes_gt",
    "primes_for_search",
    "is_A_correct",
    "find_correct_prime",
]


def ceil_log2(n: int) -> int:
    """ceil(log2 n) for n >= 1, computed exactly on integers."""
    assert n >= 1
    return (n - 1).bit_length()


def is_prime(n: int) -> bool:
    """Deterministic trial division; all primes here are desk-scale (< ~10^4)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def gen_primes_gt(b: int, count: int) -> list[int]:
    """The `count` smallest primes strictly greater than `b`, ascending."""
    assert b >= 2 and count >= 1
    out = []
    n = b
    while len(out) < count:
        n += 1
        if is_prime(n):
            out.append(n)
    return out


@lru_cache(maxsize=None)
def first_prime_above(b: int) -> int:
    return gen_primes_gt(b, 1)[0]


def _ceil_log_base(m: int, s: int, b: int) -> int:
    """Smallest integer c >= 0 with b**c >= m**s, i.e. ceil(s * log_b m).

    Exact integer comparison avoids float trouble when s*log_b(m) lands on
    an integer (m a perfect power of b).
    """
    if m <= 1:
        return 0
    c = max(0, math.floor(s * math.log(m) / math.log(b)) - 2)
    target = m**s
    while b**c < target:
        c += 1
    return c


@dataclass(frozen=True)
class PrimeSet:
    """The ordered prime set used for the per-prime search witnesses.

    b is the exclusive lower bound on the primes; the set holds the
    1 + ceil(s * log_b m) smallest primes above b, ascending.
    """

    m: int
    s: int
    b: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def count(self) -> int:
        return len(self.primes)

    @property
    def largest(self) -> int:
        return self.primes[-1]


@lru_cache(maxsize=None)
def primes_for_search(m: int, s: int, b_floor: int = 2) -> PrimeSet:
    """Prime set for an array of length m with sparsity parameter s.

    b = max(2, ceil(log2 m)), raised to b_floor when the match circuit
    needs larger rings (see protocol.MatchPredicate.min_modulus). The
    count 1 + ceil(s * log_b m) is what the divisor-counting argument
    needs: each nonzero witness sum <= m has at most log_b m prime
    divisors above b, so with |A| <= s at least one prime survives.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    b = max(2, ceil_log2(m), b_floor)
    count = 1 + _ceil_log_base(m, s, b)
    return PrimeSet(m=m, s=s, b=b, primes=tuple(gen_primes_gt(b, count)))


def is_A_correct(p: int, A) -> bool:
    """True iff no nonzero element of A is divisible by p."""
    assert p >= 2
    return all(a == 0 or a % p != 0 for a in A)


def find_correct_prime(ps: PrimeSet, A) -> int:
    """Smallest prime in ps compatible with every element of A.

    Raises NoCorrectPrimeError when none qualifies, which means the
    pigeonhole precondition (|A| <= s, elements <= m) was violated.
    """
    A = set(A)
    for p in ps.primes:
        if is_A_correct(p, A):
            return p
    raise NoCorrectPrimeError(
        f"no prime in {ps.primes} is compatible with A={sorted(A)}"
    )
