"""Exact integer kernels: sieved mu/lambda/prime tables and their sums.

All sums run in 64-bit integers (values are in {-1,0,1}, so no overflow
below 2^63 terms); results are bit-exact and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import OutOfRangeError

__all__ = [
    "MobiusTable",
    "sieve",
    "mertens",
    "mertens_values",
    "primes_below",
    "primes_upto",
    "chowla_sum",
]


@dataclass(frozen=True)
class MobiusTable:
    """Sieved multiplicative data on 1..limit.

    Arrays have length limit+1 with index 0 as padding, so ``mu[n]`` is the
    value at the integer n.  Immutable after construction; all operations
    are pure reads, safe to share across threads.
    """

    limit: int
    mu: np.ndarray  # int8, mu[n] in {-1, 0, 1}
    lam: np.ndarray  # int8, lam[n] = (-1)^Omega(n) in {-1, 1}
    is_prime: np.ndarray  # uint8 flags

    def __post_init__(self):
        for arr in (self.mu, self.lam, self.is_prime):
            arr.setflags(write=False)

    def require(self, n: int) -> None:
        if n > self.limit:
            raise OutOfRangeError(f"n={n} exceeds table limit {self.limit}")


def sieve(limit: int) -> MobiusTable:
    """Segmented sieve of mu, lambda and prime flags on [1, limit]."""
    if limit < 1:
        raise ValueError("sieve limit must be a positive integer")
    mu, lam, isp = _kernels.sieve_mu_lambda(int(limit))
    return MobiusTable(limit=int(limit), mu=mu, lam=lam, is_prime=isp)


def mertens(table: MobiusTable, n: int) -> int:
    """Exact summatory value sum_{k<=n} mu(k)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table.require(n)
    return int(np.sum(table.mu[1 : n + 1], dtype=np.int64))


def mertens_values(table: MobiusTable, checkpoints) -> np.ndarray:
    """Exact summatory values at each checkpoint (ascending counts)."""
    cps = np.asarray(checkpoints, dtype=np.int64)
    if len(cps) == 0:
        return np.empty(0, dtype=np.int64)
    if cps[-1] > table.limit:
        raise OutOfRangeError(f"checkpoint {cps[-1]} exceeds table limit {table.limit}")
    csum = np.cumsum(table.mu[1 : int(cps[-1]) + 1], dtype=np.int64)
    return csum[cps - 1]


def primes_below(table: MobiusTable, x: float) -> np.ndarray:
    """Ascending primes <= x drawn from the table's flags."""
    if x > table.limit:
        raise OutOfRangeError(f"x={x} exceeds table limit {table.limit}")
    if x < 2:
        return np.empty(0, dtype=np.int64)
    cutoff = int(math.floor(x))
    return np.nonzero(table.is_prime[: cutoff + 1])[0].astype(np.int64)


def primes_upto(x: float) -> np.ndarray:
    """Ascending primes <= x by a standalone sieve (no table required)."""
    if x < 2:
        return np.empty(0, dtype=np.int64)
    n = int(math.floor(x))
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def chowla_sum(table: MobiusTable, exponents, n: int, use_liouville: bool = False) -> float:
    """Normalized shifted-product sum (1/n) * sum_{k<=n} prod_i f(k+off_i)^pow_i.

    ``exponents`` is a list of (offset, power) pairs with offset >= 0 and
    power >= 1; f is mu, or lambda when ``use_liouville`` is set.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not exponents:
        raise ValueError("exponents must be a non-empty list of (offset, power)")
    offs = [(int(o), int(p)) for o, p in exponents]
    for off, power in offs:
        if off < 0 or power < 1:
            raise ValueError("offsets must be >= 0 and powers >= 1")
    max_off = max(o for o, _ in offs)
    if max_off + n > table.limit:
        raise OutOfRangeError(
            f"needs values up to {max_off + n}, beyond table limit {table.limit}"
        )
    f = table.lam if use_liouville else table.mu
    acc = np.ones(n, dtype=np.int64)
    for off, power in offs:
        window = f[1 + off : 1 + off + n].astype(np.int64)
        acc *= window**power
    return int(np.sum(acc, dtype=np.int64)) / n
