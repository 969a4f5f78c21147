"""End-to-end search protocol.

The query pipeline: turn the data column into a {0,1} indicator of
positions matching the lookup value (one equality or match circuit per
entry), feed the indicator through the first-positive sketch once per
prime in the search set (a single non-interactive batch), then decode on
the client side: each prime contributes a candidate index, and the
smallest candidate that verifies as a real match wins. At least one prime
in the set is compatible with the tree sums of the true first match, so
the winner is exact, not approximate.

Verification modes: by default the client reads the data column directly
(plaintext-client mode). With with_value=True each witness additionally
carries the bits of the value at its candidate index (one inner product
per bit, one extra multiplication level), and verification compares those
bits instead of touching the column.

Bit order everywhere is most significant bit first.
"""

from dataclasses import dataclass, field

import numpy as np

from .batch import PrimeBatch
from .circuit import EvalMetrics, ZpBackend
from .errors import (
    LookupOutOfRangeError,
    ThresholdOutOfRangeError,
    ValueOutOfRangeError,
)
from .modring import PrimeSet, ceil_log2, primes_for_search
from .sketch import first_positive_mod, next_pow2

__all__ = [
    "SearchInput",
    "MatchPredicate",
    "ExactMatch",
    "HammingMatch",
    "EXACT",
    "hamming_match",
    "CoresetItem",
    "SearchCoreset",
    "SearchResult",
    "WitnessResult",
    "bits_of",
    "decode_bits",
    "bit_planes",
    "search_primes",
    "to_binary_indicator",
    "one_witness",
    "secure_search",
]


# -- inputs and bit helpers ------------------------------------------------


@dataclass(frozen=True)
class SearchInput:
    """A data column over {0, ..., r-1} plus the lookup value."""

    cost: tuple
    r: int
    lookup: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        object.__setattr__(self, "cost", tuple(int(v) for v in self.cost))
        if len(self.cost) < 1:
            raise ValueError("cost must be non-empty")
        for i, v in enumerate(self.cost):
            if not 0 <= v < self.r:
                raise ValueOutOfRangeError(f"cost({i + 1}) = {v} outside [0, {self.r})")
        if not 0 <= self.lookup < self.r:
            raise LookupOutOfRangeError(f"lookup {self.lookup} outside [0, {self.r})")

    @property
    def m(self) -> int:
        return len(self.cost)

    @property
    def t(self) -> int:
        """Bits per value."""
        return max(1, ceil_log2(self.r))


def bits_of(value: int, t: int) -> tuple[int, ...]:
    """t-bit binary representation, MSB first."""
    assert 0 <= value < (1 << t)
    return tuple((value >> (t - 1 - i)) & 1 for i in range(t))


def decode_bits(bits) -> int:
    """Index encoded by a witness bit-vector: 1 + the number the bits
    spell (MSB first). The empty vector decodes to 1 (the m = 1 case).
    The all-zeros/index-1 ambiguity is resolved by match verification."""
    bits = list(bits)
    assert all(b in (0, 1) for b in bits)
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx + 1


def _try_decode(bits) -> int:
    """decode_bits, but 0 for bit values outside {0, 1} (a witness whose
    prime was incompatible; it carries no candidate)."""
    if any(b not in (0, 1) for b in bits):
        return 0
    return decode_bits(bits)


def _bits_to_int(bits) -> int | None:
    """MSB-first bits to an integer, or None if any entry is not a bit."""
    if any(b not in (0, 1) for b in bits):
        return None
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def bit_planes(values, t: int, width: int) -> np.ndarray:
    """(t, width) array of bit planes, MSB first, zero-padded on the right."""
    vals = np.asarray(values, dtype=np.uint64)
    planes = np.zeros((t, width), dtype=np.int64)
    for i in range(t):
        planes[i, : len(vals)] = ((vals >> np.uint64(t - 1 - i)) & np.uint64(1)).astype(np.int64)
    return planes


# -- match predicates ---------------------------------------------------------


class MatchPredicate:
    """A circuit-realizable binary match test between two t-bit values.

    Subclasses supply the plaintext predicate, the indicator circuit (in
    both scalar-backend and batched form), its degree, and the smallest
    ring the circuit is faithful in (min_modulus). The protocol only uses
    primes >= min_modulus, so the integer-space indicator equals the
    circuit output for every prime in play.
    """

    name = "match"

    def plain(self, a: int, b: int, t: int) -> bool:
        raise NotImplementedError

    def min_modulus(self, t: int) -> int:
        return 2

    def indicator_ints(self, values: np.ndarray, lookup: int, t: int) -> np.ndarray:
        raise NotImplementedError

    def indicator_deg(self, t: int, primes):
        raise NotImplementedError

    def charge_indicator(self, batch: PrimeBatch, m: int, t: int) -> None:
        raise NotImplementedError

    def scalar_entry(self, backend: ZpBackend, a_bits, b_bits):
        raise NotImplementedError

    def witness_degree_bound(self, t: int, p: int, with_value: bool = False) -> int:
        """Upper bound on the metered degree of one witness circuit: the
        indicator degree times (p-1)^2 from the two zero tests, plus one
        level for value retrieval."""
        bound = np.max(np.atleast_1d(self.indicator_deg(t, [p]))) * (p - 1) ** 2
        return int(bound) + (1 if with_value else 0)


class ExactMatch(MatchPredicate):
    """Bitwise equality: prod(1 - (a_i - b_i)^2), degree 2t, faithful in
    every prime ring."""

    name = "exact"

    def plain(self, a, b, t):
        return a == b

    def indicator_ints(self, values, lookup, t):
        vals = np.asarray(values, dtype=np.uint64)
        return (vals == np.uint64(lookup)).astype(np.int64)

    def indicator_deg(self, t, primes):
        return 2 * t

    def charge_indicator(self, batch, m, t):
        # per entry: t bit differences + t complements, t squares + t-1
        # product steps (see ZpBackend.is_eq)
        batch.charge(mul=m * (2 * t - 1), add=m * 2 * t, deg_seen=2 * t)

    def scalar_entry(self, backend, a_bits, b_bits):
        return backend.is_eq(a_bits, b_bits)


class HammingMatch(MatchPredicate):
    """Hamming distance at most h: with D = sum (a_i - b_i)^2, the circuit
    multiplies the zero tests (D - d)^(p-1) for every rejected distance
    d in {h+1, ..., t}; the product is 1 iff D <= h.

    Faithful only in rings with p > t (distances up to t must not wrap),
    so min_modulus raises the protocol's prime floor. h = t accepts
    everything and compiles to the constant 1.
    """

    name = "hamming"

    def __init__(self, threshold: int):
        if threshold < 0:
            raise ThresholdOutOfRangeError(f"threshold must be >= 0, got {threshold}")
        self.threshold = threshold

    def _check_t(self, t):
        if self.threshold > t:
            raise ThresholdOutOfRangeError(
                f"threshold {self.threshold} exceeds value width {t}"
            )

    def plain(self, a, b, t):
        self._check_t(t)
        return bin(a ^ b).count("1") <= self.threshold

    def min_modulus(self, t):
        return t + 1

    def indicator_ints(self, values, lookup, t):
        self._check_t(t)
        vals = np.asarray(values, dtype=np.uint64)
        dist = np.bitwise_count(vals ^ np.uint64(lookup)).astype(np.int64)
        return (dist <= self.threshold).astype(np.int64)

    def indicator_deg(self, t, primes):
        self._check_t(t)
        nf = t - self.threshold
        if nf == 0:
            return 0
        return 2 * nf * (np.asarray(primes, dtype=np.int64) - 1)

    def charge_indicator(self, batch, m, t):
        self._check_t(t)
        nf = t - self.threshold
        if nf == 0:
            batch.charge(deg_seen=1)  # inputs exist; indicator is constant 1
            return
        # per entry: t differences + t squares + t-1 sums for D, then per
        # rejected distance one subtraction and one Fermat zero test,
        # followed by nf-1 product steps
        batch.charge(
            mul=m * (t + nf - 1) + m * nf * batch.fermat_chains,
            add=m * (2 * t - 1 + nf),
            ispos=m * nf,
            deg_seen=self.indicator_deg(t, batch.primes),
        )

    def scalar_entry(self, backend, a_bits, b_bits):
        from .circuit import MeteredValue

        a_bits = [x if isinstance(x, MeteredValue) else backend.input(x) for x in a_bits]
        b_bits = [x if isinstance(x, MeteredValue) else backend.input(x) for x in b_bits]
        t = len(a_bits)
        self._check_t(t)
        nf = t - self.threshold
        if nf == 0:
            return backend.constant(1)
        dist = None
        for a, b in zip(a_bits, b_bits):
            d = backend.sub(a, b)
            sq = backend.mul(d, d)
            dist = sq if dist is None else backend.add(dist, sq)
        acc = None
        for d in range(self.threshold + 1, t + 1):
            not_d = backend.is_positive([backend.sub(dist, backend.constant(d))])[0]
            acc = not_d if acc is None else backend.mul(acc, not_d)
        return acc


EXACT = ExactMatch()


def hamming_match(threshold: int) -> HammingMatch:
    return HammingMatch(threshold)


# -- prime selection -------------------------------------------------------------


def search_primes(m: int, t: int, match: MatchPredicate = EXACT) -> PrimeSet:
    """The prime set a query over m entries uses: sparsity s = ceil(log2 m)
    (the root-path length of the padded tree), prime floor raised when the
    match circuit needs larger rings."""
    s = max(1, ceil_log2(m))
    return primes_for_search(max(2, m), s, b_floor=max(2, match.min_modulus(t) - 1))


# -- witnesses and coreset ---------------------------------------------------------


@dataclass(frozen=True)
class WitnessResult:
    p: int
    bits: tuple[int, ...]
    value_bits: tuple[int, ...] | None
    metrics: EvalMetrics


@dataclass(frozen=True)
class CoresetItem:
    """One prime's contribution: its candidate index (0 when the witness
    bits are not binary, i.e. the prime was incompatible) and, in
    with_value mode, the retrieved value (None when its bits are not
    binary)."""

    p: int
    bits: tuple[int, ...]
    index: int
    value_bits: tuple[int, ...] | None = None
    value: int | None = None
    metrics: EvalMetrics = field(default_factory=EvalMetrics)


@dataclass(frozen=True)
class SearchCoreset:
    prime_set: PrimeSet
    items: tuple[CoresetItem, ...]

    def __len__(self):
        return len(self.items)

    def aggregate_metrics(self) -> EvalMetrics:
        total = EvalMetrics()
        for item in self.items:
            total.merge(item.metrics)
        return total


@dataclass(frozen=True)
class SearchResult:
    index: int
    coreset: SearchCoreset
    backend_calls: int
    with_value: bool
    match: str

    @property
    def p_max(self) -> int:
        return self.coreset.prime_set.largest


def to_binary_indicator(inp: SearchInput, p: int = None, match: MatchPredicate = EXACT,
                        backend: ZpBackend = None) -> list:
    """Scalar reference indicator: one match circuit per entry, lookup
    bits lifted once and shared. Returns m MeteredValues in {0, 1}."""
    if backend is None:
        backend = ZpBackend(p)
    t = inp.t
    ell_bits = [backend.input(b) for b in bits_of(inp.lookup, t)]
    out = []
    for v in inp.cost:
        a_bits = [backend.input(b) for b in bits_of(v, t)]
        out.append(match.scalar_entry(backend, a_bits, ell_bits))
    return out


def one_witness(inp: SearchInput, p: int, with_value: bool = False,
                match: MatchPredicate = EXACT) -> WitnessResult:
    """Evaluate the witness circuit for a single prime."""
    t = inp.t
    if p < match.min_modulus(t):
        raise ValueError(f"prime {p} below the match circuit's minimum ring {match.min_modulus(t)}")
    batch = PrimeBatch([p])
    bits, values = _run_batch(batch, inp, match, with_value)
    return WitnessResult(
        p=p,
        bits=tuple(bits.vals[0].tolist()),
        value_bits=tuple(values.vals[0].tolist()) if values is not None else None,
        metrics=batch.metrics()[0],
    )


def _run_batch(batch: PrimeBatch, inp: SearchInput, match: MatchPredicate, with_value: bool):
    t = inp.t
    m_pad = next_pow2(inp.m)
    values = np.asarray(inp.cost, dtype=np.uint64)
    ind = match.indicator_ints(values, inp.lookup, t)
    if len(ind) < m_pad:
        ind = np.concatenate([ind, np.zeros(m_pad - len(ind), dtype=np.int64)])
    match.charge_indicator(batch, inp.m, t)
    planes = bit_planes(values, t, m_pad) if with_value else None
    return batch.run_witnesses(ind, match.indicator_deg(t, batch.primes), planes)


def secure_search(inp: SearchInput, match: MatchPredicate = EXACT,
                  with_value: bool = False) -> SearchResult:
    """Full query: witnesses for every prime in one batch, then client-side
    decode and verification. Returns index 0 when nothing matches.

    Ties: the smallest verified candidate wins; among witnesses agreeing
    on it, the smallest prime is the recorded one (items stay in
    ascending prime order).
    """
    ps = search_primes(inp.m, inp.t, match)
    batch = PrimeBatch(ps.primes)
    bits, values = _run_batch(batch, inp, match, with_value)
    metrics = batch.metrics()

    items = []
    best = 0
    for i, p in enumerate(ps.primes):
        brow = bits.vals[i].tolist()
        idx = _try_decode(brow)
        vrow = values.vals[i].tolist() if values is not None else None
        val = _bits_to_int(vrow) if vrow is not None else None
        items.append(CoresetItem(
            p=p, bits=tuple(brow), index=idx,
            value_bits=tuple(vrow) if vrow is not None else None,
            value=val, metrics=metrics[i],
        ))
        if not 1 <= idx <= inp.m:
            continue  # no candidate, or candidate in the padding
        if with_value:
            verified = val is not None and match.plain(val, inp.lookup, inp.t)
        else:
            verified = match.plain(inp.cost[idx - 1], inp.lookup, inp.t)
        if verified and (best == 0 or idx < best):
            best = idx

    return SearchResult(
        index=best,
        coreset=SearchCoreset(prime_set=ps, items=tuple(items)),
        backend_calls=batch.calls,
        with_value=with_value,
        match=match.name,
    )
