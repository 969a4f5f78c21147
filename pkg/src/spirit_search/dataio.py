"""Binary dataset files.

Layout (all integers little-endian):

    bytes  0..7    magic "SPIRITv1"
    bytes  8..15   m, unsigned 64-bit: number of values
    bytes 16..31   r, unsigned 128-bit: value range bound (may be 2^64,
                   which is why it gets 16 bytes while values get 8)
    bytes 32..39   seed, unsigned 64-bit: RNG seed the data came from
    bytes 40..     payload: m values, unsigned 64-bit each, all < r
"""

import random
from dataclasses import dataclass

import numpy as np

from .errors import MalformedFileError

MAGIC = b"SPIRITv1"
HEADER_LEN = 40

__all__ = ["MAGIC", "DatasetHeader", "generate_values", "write_dataset", "read_dataset"]


@dataclass(frozen=True)
class DatasetHeader:
    m: int
    r: int
    seed: int


def generate_values(m: int, r: int, seed: int, mode: str = "uniform") -> list[int]:
    """Deterministic pseudo-random values for a dataset.

    "one-hot": all zeros except a single 1 at a seeded random index
    (needs r >= 2). "uniform": independent draws from [0, r).
    """
    assert m >= 1 and r >= 1
    rng = random.Random(seed)
    if mode == "one-hot":
        if r < 2:
            raise ValueError("one-hot data needs r >= 2")
        values = [0] * m
        values[rng.randrange(m)] = 1
        return values
    if mode == "uniform":
        return [rng.randrange(r) for _ in range(m)]
    raise ValueError(f"unknown mode {mode!r}")


def write_dataset(path, values, r: int, seed: int) -> None:
    values = np.asarray(values, dtype=np.uint64)
    if not 1 <= r <= 1 << 64:
        raise ValueError(f"r = {r} outside [1, 2^64]")
    header = (
        MAGIC
        + len(values).to_bytes(8, "little")
        + r.to_bytes(16, "little")
        + int(seed).to_bytes(8, "little")
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(values.astype("<u8").tobytes())


def read_dataset(path) -> tuple[DatasetHeader, np.ndarray]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER_LEN or raw[:8] != MAGIC:
        raise MalformedFileError(f"{path}: not a dataset file (bad magic or truncated header)")
    m = int.from_bytes(raw[8:16], "little")
    r = int.from_bytes(raw[16:32], "little")
    seed = int.from_bytes(raw[32:40], "little")
    payload = raw[HEADER_LEN:]
    if len(payload) != 8 * m:
        raise MalformedFileError(
            f"{path}: payload holds {len(payload) // 8} values, header says {m}"
        )
    values = np.frombuffer(payload, dtype="<u8").astype(np.uint64)
    if r < 1 or (len(values) and int(values.max()) >= r):
        raise MalformedFileError(f"{path}: values exceed the declared range r = {r}")
    return DatasetHeader(m=m, r=r, seed=seed), values
