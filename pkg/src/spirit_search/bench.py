"""Bench runner: one timed search per point, CSV emission.

Column order is part of the interface and is pinned by tests:
m,r,p_max,k,wall_ms,mul,add,ispos,max_degree,backend. Everything except
wall_ms is deterministic in (m, r, seed, backend).
"""

import csv
import time
from dataclasses import dataclass

from .dataio import generate_values
from .protocol import SearchInput, secure_search

BACKEND_ID = "plain-zp"

BENCH_COLUMNS = ["m", "r", "p_max", "k", "wall_ms", "mul", "add", "ispos", "max_degree", "backend"]

__all__ = ["BACKEND_ID", "BENCH_COLUMNS", "BenchRecord", "run_point", "run_bench", "write_csv"]


@dataclass(frozen=True)
class BenchRecord:
    m: int
    r: int
    p_max: int
    k: int
    wall_ms: float
    mul: int
    add: int
    ispos: int
    max_degree: int
    backend: str = BACKEND_ID

    def to_row(self) -> list:
        return [self.m, self.r, self.p_max, self.k, f"{self.wall_ms:.3f}",
                self.mul, self.add, self.ispos, self.max_degree, self.backend]


def run_point(m: int, r: int, seed: int = 0, mode: str = None) -> BenchRecord:
    """Generate a dataset, search for a value that is present, and record
    the aggregate metrics over all witnesses of the query."""
    if mode is None:
        mode = "one-hot" if r == 2 else "uniform"
    values = generate_values(m, r, seed, mode)
    lookup = 1 if mode == "one-hot" else values[seed % m]
    inp = SearchInput(tuple(values), r, lookup)
    start = time.perf_counter()
    result = secure_search(inp)
    wall_ms = (time.perf_counter() - start) * 1000.0
    totals = result.coreset.aggregate_metrics()
    return BenchRecord(
        m=m, r=r,
        p_max=result.p_max,
        k=len(result.coreset),
        wall_ms=wall_ms,
        mul=totals.mul_count,
        add=totals.add_count,
        ispos=totals.ispos_calls,
        max_degree=totals.max_degree,
    )


def run_bench(m_list, r: int, seed: int = 0, mode: str = None) -> list[BenchRecord]:
    return [run_point(m, r, seed, mode) for m in m_list]


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_row())
