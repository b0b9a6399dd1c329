"""Prime-pair orthogonality engine: the correlation matrix over small
primes, violation accounting, and the disjointness verdict bound
2*sqrt(tau*log(1/tau)).

The criterion's tau_0 is not computable, so the verdict exposes
``allowed_exceptions`` as the knob for the small exceptional set of
primes instead of guessing a threshold.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels, arith
from .arith import MobiusTable
from .correlator import CorrelationSeries, _resolve_checkpoints, _series_from_values
from .errors import OutOfRangeError

__all__ = [
    "BoundedSequence",
    "CriterionReport",
    "Verdict",
    "pair_matrix",
    "direct_mobius_correlation",
    "verdict",
]


@dataclass
class BoundedSequence:
    """A sequence F: N -> C with a declared sup bound.

    ``evaluate`` maps a positive integer to a complex value; the bound is
    spot-checked by sampling wherever the sequence enters a computation.
    """

    evaluate: Callable[[int], complex]
    declared_bound: float = 1.0
    vector_evaluate: Optional[Callable] = None
    is_constant_one: bool = False

    @classmethod
    def ones(cls) -> "BoundedSequence":
        return cls(evaluate=lambda n: 1.0, declared_bound=1.0,
                   vector_evaluate=lambda ns: np.ones(len(ns), dtype=np.complex128),
                   is_constant_one=True)

    @classmethod
    def from_values(cls, values, declared_bound: float = 1.0) -> "BoundedSequence":
        """Sequence backed by an array of values for n = 1..len(values)."""
        arr = np.ascontiguousarray(values, dtype=np.complex128)

        def ev(n: int) -> complex:
            if not 1 <= n <= len(arr):
                raise OutOfRangeError(f"n={n} outside stored range 1..{len(arr)}")
            return complex(arr[n - 1])

        def vec(ns) -> np.ndarray:
            ns = np.asarray(ns, dtype=np.int64)
            if ns.min() < 1 or ns.max() > len(arr):
                raise OutOfRangeError("index outside stored range")
            return arr[ns - 1]

        return cls(evaluate=ev, declared_bound=declared_bound, vector_evaluate=vec)

    @classmethod
    def from_callable(cls, fn: Callable[[int], complex],
                      declared_bound: float = 1.0) -> "BoundedSequence":
        return cls(evaluate=fn, declared_bound=declared_bound)

    def values(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        if self.vector_evaluate is not None:
            return np.asarray(self.vector_evaluate(ns), dtype=np.complex128)
        return np.array([self.evaluate(int(n)) for n in ns], dtype=np.complex128)

    def assert_bounded(self, n_max: int, samples: int = 64) -> None:
        ns = np.unique(np.linspace(1, max(1, n_max), samples).astype(np.int64))
        vals = self.values(ns)
        worst = float(np.max(np.abs(vals)))
        if worst > self.declared_bound + 1e-9:
            raise ValueError(
                f"|F| reached {worst}, above the declared bound {self.declared_bound}"
            )


@dataclass(frozen=True)
class CriterionReport:
    """Prime-pair correlation magnitudes at threshold tau.

    pairs maps each unordered pair (p, q), p < q of distinct primes up to
    e^(1/tau) to (1/M)|sum_{m<=M} F(pm) conj(F(qm))|; violations exceed
    tau, sorted by descending magnitude.
    """

    tau: float
    m: int
    prime_cutoff: float
    primes: tuple
    pairs: dict
    violations: tuple
    verdict_bound: float
    declared_bound: float
    n_pairs: int = field(default=0)

    def magnitude(self, p: int, q: int) -> float:
        key = (min(p, q), max(p, q))
        return self.pairs[key]


def _pair_magnitude(values: np.ndarray, p: int, q: int, m: int) -> float:
    idx = np.arange(1, m + 1, dtype=np.int64)
    prod = values[idx * p - 1] * np.conj(values[idx * q - 1])
    total = _kernels.weighted_partial_sums(None, prod, [m])[0]
    return float(abs(total)) / m


def pair_matrix(F: BoundedSequence, tau: float, m: int, threads: int = 1) -> CriterionReport:
    """Correlation magnitudes for all unordered pairs of distinct primes <= e^(1/tau)."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    if m < 1:
        raise ValueError("M must be >= 1")
    cutoff = math.exp(1.0 / tau)
    primes = [int(p) for p in arith.primes_upto(cutoff)]
    n_max = (max(primes) if primes else 1) * m
    F.assert_bounded(n_max)
    values = F.values(np.arange(1, n_max + 1, dtype=np.int64))
    keys = [(p, q) for i, p in enumerate(primes) for q in primes[i + 1 :]]

    def compute(key):
        return key, _pair_magnitude(values, key[0], key[1], m)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(pool.map(compute, keys))
    else:
        results = dict(compute(k) for k in keys)
    violations = tuple(
        sorted(
            ((p, q, mag) for (p, q), mag in results.items() if mag > tau),
            key=lambda t: -t[2],
        )
    )
    return CriterionReport(
        tau=float(tau),
        m=int(m),
        prime_cutoff=cutoff,
        primes=tuple(primes),
        pairs=results,
        violations=violations,
        verdict_bound=2.0 * math.sqrt(tau * math.log(1.0 / tau)),
        declared_bound=F.declared_bound,
        n_pairs=len(keys),
    )


def direct_mobius_correlation(F: BoundedSequence, table: MobiusTable, n: int,
                              checkpoints=None) -> CorrelationSeries:
    """Running averages (1/N') sum_{k<=N'} mu(k)·F(k), the quantity the
    criterion is a proxy for.  Constant-one input reduces to the exact
    integer summatory path."""
    cps = _resolve_checkpoints(n, checkpoints)
    top = int(cps[-1])
    if top > table.limit:
        raise OutOfRangeError(f"N={top} exceeds table limit {table.limit}")
    if F.is_constant_one:
        exact = arith.mertens_values(table, cps)
        # real division is correctly rounded; complex division may differ by 1 ulp
        vals = (exact.astype(np.float64) / cps.astype(np.float64)).astype(np.complex128)
        return CorrelationSeries(tuple(int(c) for c in cps), vals, "mobius")
    F.assert_bounded(top)
    values = F.values(np.arange(1, top + 1, dtype=np.int64))
    return _series_from_values(values, cps, "mobius", weights=table.mu[1 : top + 1])


@dataclass(frozen=True)
class Verdict:
    """Outcome of the exceptional-set check plus the implied average bound."""

    ok: bool
    bound: float
    vacuous: bool
    n_violations: int
    allowed_exceptions: int
    explanation: str

    def __bool__(self):
        return self.ok


def verdict(report: CriterionReport, allowed_exceptions: int = 0) -> Verdict:
    """True iff at most ``allowed_exceptions`` pairs violate tau.

    The implied bound on |sum nu(n) F(n)|/N is 2*sqrt(tau log(1/tau)),
    flagged vacuous when it is not smaller than the trivial bound.
    """
    if allowed_exceptions < 0:
        raise ValueError("allowed_exceptions must be >= 0")
    bound = report.verdict_bound
    trivial = report.declared_bound
    vacuous = bound >= trivial
    ok = len(report.violations) <= allowed_exceptions
    lines = [
        f"{len(report.violations)} of {report.n_pairs} prime pairs exceed tau={report.tau}"
        f" (primes up to e^(1/tau) = {report.prime_cutoff:.3f}; allowed: {allowed_exceptions})",
    ]
    for p, q, mag in report.violations[:5]:
        lines.append(f"  worst pair ({p},{q}): magnitude {mag:.6f}")
    lines.append(
        f"implied bound: limsup |sum nu(n)F(n)|/N <= 2*sqrt(tau*log(1/tau)) = {bound:.6f}"
    )
    if vacuous:
        lines.append(
            f"bound is VACUOUS: it is >= the trivial bound {trivial} from |F| <= {trivial}"
        )
    return Verdict(
        ok=ok,
        bound=bound,
        vacuous=vacuous,
        n_violations=len(report.violations),
        allowed_exceptions=allowed_exceptions,
        explanation="\n".join(lines),
    )
