"""Birkhoff averages, Möbius-weighted correlations, and prime-pair
correlations along unipotent orbits, with convergence diagnostics and the
1/(pq) sweep against the resonant-mode bound.

All accumulation is compensated and runs in a fixed index order, so a
given backend reproduces its sums bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels, arith, dynsys, harmonic
from .arith import MobiusTable
from .dynsys import Observable, SystemSpec
from .errors import OutOfRangeError

__all__ = [
    "CorrelationSeries",
    "ConvergenceDiagnostic",
    "PairSweepRow",
    "default_checkpoints",
    "orbit_values",
    "birkhoff",
    "mobius_correlation",
    "pair_correlation",
    "pq_sweep",
    "convergence_diagnostic",
]


@dataclass(frozen=True)
class CorrelationSeries:
    """Running partial averages A_N' at strictly increasing checkpoints."""

    checkpoints: tuple
    values: np.ndarray  # complex128 per checkpoint
    kind: str

    @property
    def final(self) -> complex:
        return complex(self.values[-1])

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)


def default_checkpoints(n: int) -> list:
    """1-2-5 ladder up to n, always ending at n (log-spaced convergence plots)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cps = []
    decade = 1
    while decade <= n:
        for mult in (1, 2, 5):
            c = mult * decade
            if c <= n:
                cps.append(c)
        decade *= 10
    if not cps or cps[-1] != n:
        cps.append(n)
    return cps


def _resolve_checkpoints(n: int, checkpoints) -> np.ndarray:
    if checkpoints is None:
        cps = default_checkpoints(n)
    else:
        cps = [int(c) for c in checkpoints]
        if not cps or any(c < 1 for c in cps) or any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoints must be a non-empty strictly increasing list, all >= 1")
        if cps[-1] > n:
            raise OutOfRangeError(f"checkpoint {cps[-1]} exceeds N={n}")
        if cps[-1] != n:
            cps.append(n)
    return np.asarray(cps, dtype=np.int64)


def orbit_values(spec: SystemSpec, f: Observable, count: int) -> np.ndarray:
    """Observable values f(x·u^n) for n = 0..count-1.

    Product systems evaluate a tensor observable on the two strided
    component trajectories.
    """
    if spec.kind == "product":
        base, p, q = spec.step_element
        if f.observable_id == "tensor":
            inner = f.params["inner"]
        elif f.observable_id == "one":
            inner = f
        else:
            raise ValueError(
                "product systems take tensor observables (wrap with dynsys.tensor)"
            )
        vals_p = orbit_values(dynsys.power_system(base, p), inner, count)
        vals_q = orbit_values(dynsys.power_system(base, q), inner, count)
        out = vals_p * np.conj(vals_q)
        if f.shift:
            out = out - f.shift
        return out
    data = dynsys.trajectory_data(spec, count)
    return dynsys.observable_values(f, spec.kind, data)


def _series_from_values(values: np.ndarray, cps: np.ndarray, kind: str,
                        weights=None) -> CorrelationSeries:
    sums = _kernels.weighted_partial_sums(weights, values, cps)
    return CorrelationSeries(
        checkpoints=tuple(int(c) for c in cps),
        values=sums / cps.astype(np.float64),
        kind=kind,
    )


def birkhoff(spec: SystemSpec, f: Observable, n: int,
             checkpoints=None) -> CorrelationSeries:
    """A_N' = (1/N') sum_{n=0}^{N'-1} f(x·u^n)."""
    cps = _resolve_checkpoints(n, checkpoints)
    vals = orbit_values(spec, f, int(cps[-1]))
    return _series_from_values(vals, cps, "birkhoff")


def mobius_correlation(spec: SystemSpec, f: Observable, table: MobiusTable,
                       n: int, checkpoints=None) -> CorrelationSeries:
    """A_N' = (1/N') sum_{k<=N'} mu(k)·f(x·u^k).

    For the constant-one observable this reduces to the exact integer
    summatory path, bit for bit.
    """
    cps = _resolve_checkpoints(n, checkpoints)
    top = int(cps[-1])
    if top > table.limit:
        raise OutOfRangeError(f"N={top} exceeds table limit {table.limit}")
    if f.is_constant_one:
        exact = arith.mertens_values(table, cps)
        # real division is correctly rounded; complex division may differ by 1 ulp
        vals = (exact.astype(np.float64) / cps.astype(np.float64)).astype(np.complex128)
        return CorrelationSeries(tuple(int(c) for c in cps), vals, "mobius")
    vals = orbit_values(spec, f, top + 1)[1:]
    return _series_from_values(vals, cps, "mobius", weights=table.mu[1 : top + 1])


def pair_correlation(spec: SystemSpec, f: Observable, p: int, q: int, n: int,
                     checkpoints=None, mean_adjust: bool = False) -> CorrelationSeries:
    """A_N' = (1/N') sum_{k<=N'} f(x·u^{p k})·conj(f(x·u^{q k})).

    mean_adjust subtracts each trajectory's empirical Birkhoff mean at the
    same N (used when the analytic mean is unavailable).
    """
    p, q = int(p), int(q)
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    cps = _resolve_checkpoints(n, checkpoints)
    top = int(cps[-1])
    vals_p = orbit_values(dynsys.power_system(spec, p), f, top + 1)[1:]
    vals_q = orbit_values(dynsys.power_system(spec, q), f, top + 1)[1:]
    if mean_adjust:
        vals_p = vals_p - _kernels.weighted_partial_sums(None, vals_p, [top])[0] / top
        vals_q = vals_q - _kernels.weighted_partial_sums(None, vals_q, [top])[0] / top
    return _series_from_values(vals_p * np.conj(vals_q), cps, f"pair({p},{q})")


@dataclass(frozen=True)
class PairSweepRow:
    p: int
    q: int
    abs_a: float
    bound: float
    passed: bool


def pq_sweep(spec: SystemSpec, f: Observable, prime_pairs, n: int,
             spectrum: Optional[harmonic.FourierSpectrum] = None,
             slack: Optional[float] = None):
    """Measured |A_N| per prime pair against the resonant bound + slack.

    The observable must be mean-zero (checked through its spectrum); slack
    defaults to 3/sqrt(N), generous yet vanishing relative to the limit
    statements.  Returns (rows, c_f) with c_f the envelope constant shared
    by all pairs.
    """
    if spectrum is None:
        spectrum = _spectrum_of(f)
    zero = (0,) * spectrum.dimension
    if abs(spectrum.coeff(zero)) > 1e-10:
        raise ValueError("observable is not mean-zero; subtract the mean first")
    if slack is None:
        slack = 3.0 / math.sqrt(n)
    rows = []
    c_f = 0.0
    for p, q in prime_pairs:
        series = pair_correlation(spec, f, p, q, n)
        bound = harmonic.pq_coefficient_bound(spectrum, p, q)
        c_f = max(c_f, bound.c_f)
        abs_a = abs(series.final)
        rows.append(
            PairSweepRow(
                p=int(p),
                q=int(q),
                abs_a=float(abs_a),
                bound=float(bound.resonant_sum),
                passed=bool(abs_a <= bound.resonant_sum + slack),
            )
        )
    return rows, c_f


def _spectrum_of(f: Observable) -> harmonic.FourierSpectrum:
    if f.observable_id == "torus_poly":
        modes = f.params["modes"]
        coeffs = dict(zip(modes, f.params["coeffs"]))
        dim = len(modes[0]) if modes else 1
        zero = (0,) * dim
        coeffs[zero] = coeffs.get(zero, 0.0) - f.shift
        return harmonic.FourierSpectrum.from_coefficients(coeffs, dimension=dim)
    if f.observable_id == "torus_char":
        m = f.params["m"]
        coeffs = {tuple(m): 1.0 + 0.0j}
        zero = (0,) * len(m)
        coeffs[zero] = coeffs.get(zero, 0.0) - f.shift
        return harmonic.FourierSpectrum.from_coefficients(coeffs, dimension=len(m))
    if f.observable_id == "one":
        return harmonic.FourierSpectrum.from_coefficients({(0,): 1.0 - f.shift})
    raise ValueError(
        f"no spectrum is derivable for observable '{f.observable_id}'; pass spectrum="
    )


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    """Least-squares decay rate of |A_N' - plateau| on log-log axes."""

    slope: Optional[float]
    plateau: complex
    n_fit: int


def convergence_diagnostic(series: CorrelationSeries) -> ConvergenceDiagnostic:
    """Slope of log|A_N' - plateau| vs log N'; plateau = final value.

    Fits only checkpoints N' <= N_max/100 (later points are contaminated
    by the plateau estimate); a constant series has no defined slope.
    """
    if len(series.checkpoints) < 3:
        raise ValueError("need at least 3 checkpoints")
    plateau = series.final
    cps = np.asarray(series.checkpoints, dtype=np.float64)
    gaps = np.abs(series.values - plateau)
    usable = (cps <= cps[-1] / 100.0) & (gaps > 1e-15)
    if np.count_nonzero(usable) < 2:
        return ConvergenceDiagnostic(slope=None, plateau=plateau, n_fit=0)
    lx = np.log(cps[usable])
    ly = np.log(gaps[usable])
    slope = float(np.polyfit(lx, ly, 1)[0])
    return ConvergenceDiagnostic(slope=slope, plateau=plateau, n_fit=int(usable.sum()))
