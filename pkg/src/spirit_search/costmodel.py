"""Practical running-time estimator and prime-set step detection.

The estimate for a query over m entries with values below r, on a machine
farm with `cores` workers each packing `simd` values per ciphertext, is

    T = n * (1 + ceil(log2 n)) * ADD + ceil(log2 r) * MUL + 2n * IsPOSITIVE

with n = ceil(m / (cores * simd)) packed units per worker. ADD / MUL /
IsPOSITIVE are measured per-operation times in milliseconds for the
deployment's ring and depth; they are taken as constants here. The bench
harness records the largest prime (ring size) next to its measurements so
users can fit per-ring constants; that ring size changes exactly at the
prime-set step points below, which is where measured curves jump.

On the value range: a binary column can be described either as r = 1
("the data is a 0/1 indicator, no value multiplications needed") or
r = 2 (one-bit values). The estimator takes r literally: ceil(log2 r)
is 0 for r = 1 and 1 for r = 2.
"""

from dataclasses import dataclass

from .modring import _ceil_log_base, ceil_log2, first_prime_above, primes_for_search

__all__ = [
    "CostParams",
    "estimate_time",
    "estimate_breakdown",
    "packed_units",
    "step_points",
    "prime_set_for_length",
    "ring_size",
    "fits_measurement",
]


@dataclass(frozen=True)
class CostParams:
    """Machine constants for the time formula (times in milliseconds)."""

    cores: int
    simd: int
    add_ms: float
    mul_ms: float
    ispos_ms: float

    def __post_init__(self):
        for name in ("cores", "simd", "add_ms", "mul_ms", "ispos_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


def packed_units(m: int, params: CostParams) -> int:
    """n = ceil(m / (cores * simd)); the per-worker slowdown factor."""
    assert m >= 1
    return -(-m // (params.cores * params.simd))


def estimate_time(m: int, r: int, params: CostParams) -> float:
    """Predicted wall time in milliseconds."""
    assert r >= 1
    n = packed_units(m, params)
    return (
        n * (1 + ceil_log2(n)) * params.add_ms
        + ceil_log2(r) * params.mul_ms
        + 2 * n * params.ispos_ms
    )


def estimate_breakdown(m: int, r: int, params: CostParams) -> dict:
    """Per-term breakdown of the estimate. The MUL entry is absent when
    its coefficient ceil(log2 r) is zero (r = 1)."""
    n = packed_units(m, params)
    out = {"n": n, "add_ms": n * (1 + ceil_log2(n)) * params.add_ms}
    if ceil_log2(r) > 0:
        out["mul_ms"] = ceil_log2(r) * params.mul_ms
    out["ispos_ms"] = 2 * n * params.ispos_ms
    out["total_ms"] = estimate_time(m, r, params)
    return out


# -- prime-set steps ---------------------------------------------------------


def prime_set_for_length(m: int):
    """The prime set an exact-match query of length m uses (sparsity
    ceil(log2 m); length 1 behaves like length 2)."""
    mm = max(2, m)
    return primes_for_search(mm, max(1, ceil_log2(mm)))


def ring_size(m: int) -> int:
    """Largest prime of the query's set: the ring size that drives the
    zero-test depth, and so the per-operation constants of a deployment."""
    return prime_set_for_length(m).largest


def _signature(m: int) -> tuple[int, int]:
    """(first prime, count) of prime_set_for_length(m); the set is that
    many consecutive primes from that start, so the pair identifies it."""
    mm = max(2, m)
    v = ceil_log2(mm)
    b = max(2, v)
    s = max(1, v)
    return first_prime_above(b), 1 + _ceil_log_base(mm, s, b)


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) by bisection on exact integers."""
    if n < 2:
        return n
    hi = 1 << (-(-n.bit_length() // k) + 1)
    lo = 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def step_points(m_lo: int, m_hi: int) -> list[int]:
    """All m in (m_lo, m_hi] where the query prime set differs from its
    value at m - 1. These are the points where measured time curves jump.

    Candidates are enumerated analytically: the boundaries where
    ceil(log2 m) increments, plus, inside each constant-b stretch, the
    exact thresholds where the set's size 1 + ceil(s * log_b m) grows
    (smallest m with m^s > b^(c-1), via integer roots). Each candidate is
    then confirmed against the set signatures of m and m - 1.
    """
    assert m_lo < m_hi
    candidates = set()
    v_lo = ceil_log2(max(2, m_lo))
    v_hi = ceil_log2(max(2, m_hi))
    for v in range(max(2, v_lo), v_hi + 1):
        start = (1 << (v - 1)) + 1  # first m with ceil(log2 m) == v
        end = 1 << v
        lo = max(start, m_lo)
        hi = min(end, m_hi)
        if lo > hi:
            continue
        candidates.add(start)
        c_lo = _ceil_log_base(lo, v, v)
        c_hi = _ceil_log_base(hi, v, v)
        for c in range(c_lo + 1, c_hi + 1):
            candidates.add(_iroot(v ** (c - 1), v) + 1)
    candidates.add(3)  # b and s first move at m = 3
    out = [
        m
        for m in sorted(candidates)
        if m_lo < m <= m_hi and _signature(m) != _signature(m - 1)
    ]
    return out


def fits_measurement(m: int, r: int, params: CostParams, measured_ms: float,
                     rel_tol: float = 0.15) -> bool:
    """Whether the estimate lands within rel_tol of a measured time."""
    predicted = estimate_time(m, r, params)
    return abs(predicted - measured_ms) <= rel_tol * measured_ms
