"""Randomized oracle verification: secure_search against linear scan,
plus per-witness metering checks on every instance.

Each instance verifies three things beyond the answer itself:

* one backend batch per query (non-interactivity);
* every witness's metered degree within the match circuit's bound;
* the multiplication count equals the closed-form expectation for the
  indicator plus the zero-test chains (so the matrix stages contributed
  exactly zero multiplications).
"""

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .circuit import fermat_chain_muls
from .oracle import adversarial_instances, linear_scan_oracle
from .protocol import EXACT, SearchInput, secure_search
from .sketch import next_pow2

__all__ = ["VerifyFailure", "VerifyReport", "run_verification", "worker_count"]


def worker_count() -> int:
    """Worker count for instance fan-out; SPIRIT_THREADS overrides."""
    raw = os.environ.get("SPIRIT_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class VerifyFailure:
    label: str
    cost: tuple
    r: int
    lookup: int
    expected: int
    got: int
    detail: str = ""


@dataclass
class VerifyReport:
    instances: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def expected_witness_muls(m: int, t: int, p: int, with_value: bool) -> int:
    """Exact multiplication count of one exact-match witness: the indicator
    equality circuits plus both zero-test stages (and the value-retrieval
    dot products). Matrix stages contribute none."""
    m_pad = next_pow2(m)
    chain = fermat_chain_muls(p)
    muls = m * (2 * t - 1) + (3 * m_pad - 1) * chain
    if with_value:
        muls += t * m_pad
    return muls


def check_instance(cost, r, lookup, label="", with_value=False) -> list[VerifyFailure]:
    """Run one instance against the oracle and the metering contracts."""
    failures = []
    inp = SearchInput(tuple(cost), r, lookup)
    result = secure_search(inp, with_value=with_value)
    expected = linear_scan_oracle(inp.cost, lookup, EXACT, inp.t)

    def fail(got, detail):
        failures.append(VerifyFailure(label, inp.cost, r, lookup, expected, got, detail))

    if result.index != expected:
        fail(result.index, "index mismatch vs linear scan")
    if result.backend_calls != 1:
        fail(result.index, f"{result.backend_calls} backend batches, expected 1")
    for item in result.coreset.items:
        bound = EXACT.witness_degree_bound(inp.t, item.p, with_value)
        if item.metrics.max_degree > bound:
            fail(result.index, f"witness p={item.p} degree {item.metrics.max_degree} > {bound}")
        want = expected_witness_muls(inp.m, inp.t, item.p, with_value)
        if item.metrics.mul_count != want:
            fail(result.index, f"witness p={item.p} muls {item.metrics.mul_count} != {want}")
    if with_value and expected:
        winner = [it for it in result.coreset.items if it.index == expected and it.value is not None]
        if not winner or winner[0].value != inp.cost[expected - 1]:
            fail(result.index, "retrieved value does not decode to cost(i*)")
    return failures


def _random_instance(rng: random.Random, max_m: int, r: int):
    m = rng.randint(1, max_m)
    cost = [rng.randrange(r) for _ in range(m)]
    if rng.random() < 0.5 and m:
        lookup = cost[rng.randrange(m)]  # guaranteed present
    else:
        lookup = rng.randrange(r)
    return cost, lookup


def run_verification(trials: int = 1000, max_m: int = 4096, r: int = 65536,
                     seed: int = 0, with_value: bool = False) -> VerifyReport:
    """The fixed adversarial suite plus `trials` random instances.

    Results are deterministic in (trials, max_m, r, seed); the worker
    fan-out (SPIRIT_THREADS) never changes outputs, only wall time.
    """
    rng = random.Random(seed)
    jobs = [(cost, 16, lookup, label) for label, cost, lookup in adversarial_instances(16)]
    for i in range(trials):
        cost, lookup = _random_instance(rng, max_m, r)
        jobs.append((cost, r, lookup, f"random #{i}"))

    report = VerifyReport()
    workers = worker_count()

    def run_job(job):
        cost, rr, lookup, label = job
        return check_instance(cost, rr, lookup, label, with_value)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(j) for j in jobs]
    for fs in results:
        report.instances += 1
        report.failures.extend(fs)
    return report
