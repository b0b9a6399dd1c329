"""Fourier analysis on torus fibers and vertical characters on the
Heisenberg nilmanifold: coefficients by quadrature, decay envelopes, the
resonant-mode bound behind the 1/(pq) law, vertical projections, and the
horizontal-torus ergodicity test for nilrotations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "FourierSpectrum",
    "DecayEnvelope",
    "PQBound",
    "GreenVerdict",
    "VerticalComponent",
    "modes_in_ball",
    "torus_fourier",
    "spectrum_observable",
    "decay_fit",
    "pq_coefficient_bound",
    "vertical_project",
    "green_ergodicity",
]

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# spectra


def modes_in_ball(dimension: int, m_max: int):
    """Integer vectors m in Z^k with |m|_1 <= m_max, deterministic order."""
    rng = range(-m_max, m_max + 1)
    for m in itertools.product(rng, repeat=dimension):
        if sum(abs(v) for v in m) <= m_max:
            yield m


@dataclass(frozen=True)
class FourierSpectrum:
    """Indexed coefficients f_hat(m), m in Z^k with |m|_1 <= m_max."""

    dimension: int
    m_max: int
    grid_n: int
    coefficients: dict

    def coeff(self, m) -> complex:
        m = tuple(int(v) for v in (m if np.iterable(m) else (m,)))
        return self.coefficients.get(m, 0.0 + 0.0j)

    @classmethod
    def from_coefficients(cls, coefficients: dict, dimension: int = 1, grid_n: int = 0):
        coeffs = {}
        m_max = 0
        for m, c in coefficients.items():
            m = tuple(int(v) for v in (m if np.iterable(m) else (m,)))
            if len(m) != dimension:
                raise ValueError("mode dimension mismatch")
            coeffs[m] = complex(c)
            m_max = max(m_max, sum(abs(v) for v in m))
        return cls(dimension=dimension, m_max=m_max, grid_n=grid_n, coefficients=coeffs)

    def power_sum(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coefficients.values()))


def torus_fourier(f: Callable, dimension: int, m_max: int = 64,
                  grid_n: Optional[int] = None, use_fft: bool = False) -> FourierSpectrum:
    """Coefficients on the uniform grid; exact for trig polynomials of
    degree < grid_n - m_max (aliasing threshold).

    ``f`` must accept numpy arrays of shape (..., dimension is implied by
    separate coordinate arguments): it is called as f(x0, x1, ...) on
    broadcastable coordinate arrays.  The quadrature (uniform grid mean)
    is the reference path; use_fft enables the equivalent FFT evaluation.
    """
    if grid_n is None:
        grid_n = 4 * m_max
    if grid_n < 4 * m_max:
        raise ValueError(f"grid_n={grid_n} too small; need >= 4*m_max = {4 * m_max}")
    axes = np.meshgrid(
        *(np.arange(grid_n) / grid_n for _ in range(dimension)), indexing="ij"
    )
    values = np.asarray(f(*axes), dtype=np.complex128)
    if values.shape != axes[0].shape:
        raise ValueError("observable did not broadcast over the grid")
    coeffs: dict = {}
    if use_fft:
        spec = np.fft.fftn(values) / values.size
        for m in modes_in_ball(dimension, m_max):
            idx = tuple(v % grid_n for v in m)
            coeffs[m] = complex(spec[idx])
    else:
        # per-axis character tables keep the reference quadrature separable
        base = np.arange(grid_n) / grid_n
        table = {}
        for v in range(-m_max, m_max + 1):
            table[v] = np.exp(-1j * _TWO_PI * v * base)
        for m in modes_in_ball(dimension, m_max):
            phase = table[m[0]]
            for axis in range(1, dimension):
                phase = np.multiply.outer(phase, table[m[axis]])
            coeffs[m] = complex(np.mean(values * phase))
    return FourierSpectrum(
        dimension=dimension, m_max=m_max, grid_n=grid_n, coefficients=coeffs
    )


def spectrum_observable(spectrum: FourierSpectrum) -> Callable:
    """Callable sum_m c_m e(m·x) matching torus_fourier's argument contract."""

    def f(*coords):
        out = np.zeros(np.broadcast(*coords).shape, dtype=np.complex128)
        for m, c in spectrum.coefficients.items():
            phase = sum(mi * xi for mi, xi in zip(m, coords))
            out = out + c * np.exp(1j * _TWO_PI * phase)
        return out

    return f


# ---------------------------------------------------------------------------
# decay envelopes and the 1/(pq) bound


@dataclass(frozen=True)
class DecayEnvelope:
    """|f_hat(m)| <= c_k * m_f / (1+|m|_1)^order for all computed m."""

    order: int
    m_f: float
    c_k: float = 1.0


def decay_fit(spectrum: FourierSpectrum, order: int) -> DecayEnvelope:
    """Smallest m_f making the (1+|m|)^-order envelope hold (c_k = 1 declared)."""
    if order not in (1, 2):
        raise ValueError("envelope order must be 1 or 2")
    if not spectrum.coefficients:
        raise ValueError("spectrum is empty")
    m_f = 0.0
    for m, c in spectrum.coefficients.items():
        weight = (1 + sum(abs(v) for v in m)) ** order
        m_f = max(m_f, abs(c) * weight)
    return DecayEnvelope(order=order, m_f=m_f, c_k=1.0)


def _lattice_inverse_square_sum(dimension: int, m_max: int) -> float:
    # sum over 0 < |j|_1 <= m_max of |j|_1^-2; converges to pi^2/3 for k=1
    total = 0.0
    for s in range(1, m_max + 1):
        count = _shell_count(dimension, s)
        total += count / (s * s)
    return total


def _shell_count(dimension: int, s: int) -> int:
    # number of integer vectors with |m|_1 == s
    if dimension == 1:
        return 2
    total = 0
    for first in range(-s, s + 1):
        rest = s - abs(first)
        if rest == 0:
            total += 1
        else:
            total += _shell_count(dimension - 1, rest)
    return total


@dataclass(frozen=True)
class PQBound:
    """Resonant-mode bound for the pair-correlation limit, plus its envelope.

    resonant_sum = sum over j != 0 of |f_hat(q j)|·|f_hat(p j)|; c_f is the
    envelope constant with resonant_sum <= c_f/(p·q) guaranteed.
    """

    p: int
    q: int
    resonant_sum: float
    c_f: float
    n_resonant: int

    @property
    def envelope(self) -> float:
        return self.c_f / (self.p * self.q)

    def __float__(self):
        return self.resonant_sum


def pq_coefficient_bound(spectrum: FourierSpectrum, p: int, q: int) -> PQBound:
    """Analytic upper bound for the (u^p, u^q) pair-correlation limit.

    Requires a mean-zero spectrum; resonance restricts to mode pairs
    (q·j, p·j), and the envelope constant comes from the order-1 decay fit
    via Cauchy-Schwarz over the resonant classes.
    """
    p, q = int(p), int(q)
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if abs(spectrum.coeff((0,) * spectrum.dimension)) > 1e-10:
        raise ValueError("spectrum must be mean-zero; subtract the mean first")
    total = 0.0
    count = 0
    for m, c in spectrum.coefficients.items():
        if all(v % q == 0 for v in m) and any(v != 0 for v in m):
            j = tuple(v // q for v in m)
            pj = tuple(p * v for v in j)
            if sum(abs(v) for v in pj) <= spectrum.m_max:
                other = spectrum.coeff(pj)
                if other != 0:
                    total += abs(c) * abs(other)
                    count += 1
    envelope_fit = decay_fit(spectrum, order=1)
    c_f = (
        envelope_fit.c_k**2
        * envelope_fit.m_f**2
        * _lattice_inverse_square_sum(spectrum.dimension, max(spectrum.m_max, 1))
    )
    return PQBound(p=p, q=q, resonant_sum=total, c_f=c_f, n_resonant=count)


# ---------------------------------------------------------------------------
# vertical characters on the Heisenberg nilmanifold


@dataclass(frozen=True)
class VerticalComponent:
    """Projection g^chi_k: transforms by e(k·s) under central translation."""

    k: int
    resolution: int
    _fn: Callable

    def __call__(self, x, y, z):
        return self._fn(x, y, z)


def vertical_project(g: Callable, k: int, resolution: int = 64) -> VerticalComponent:
    """Quadrature projection (g^chi_k)(v) = mean_t g(v·(0,0,t))·e(-k t).

    ``g`` takes reduced coordinates (x, y, z) with numpy broadcasting.
    Central translation moves only z, so the projection is a z-convolution.
    """
    if resolution < 64:
        raise ValueError("central-circle quadrature needs at least 64 points")
    k = int(k)
    t = np.arange(resolution) / resolution
    phase = np.exp(-1j * _TWO_PI * k * t) / resolution

    def fn(x, y, z):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        zz = z[..., None] + t
        zz -= np.floor(zz)
        vals = g(x[..., None], y[..., None], zz)
        return np.sum(vals * phase, axis=-1)

    return VerticalComponent(k=k, resolution=resolution, _fn=fn)


# ---------------------------------------------------------------------------
# ergodicity of a nilrotation via its horizontal torus


@dataclass(frozen=True)
class GreenVerdict:
    """Outcome of the horizontal-torus rational-dependence search."""

    ergodic: bool
    searched_up_to: int
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ergodic


_DEP_TOL = 1e-10


def _shell_vectors(dimension: int, s: int):
    # all m with |m|_1 == s, lexicographic
    if dimension == 1:
        yield (-s,)
        yield (s,)
        return
    for first in range(-s, s + 1):
        rest = s - abs(first)
        if rest == 0:
            yield (first,) + (0,) * (dimension - 1)
        else:
            for tail in _shell_vectors(dimension - 1, rest):
                yield (first,) + tail


def _shell_array(dimension: int, s: int) -> np.ndarray:
    # lex-ordered shell as an int64 array; vectorized for k <= 2
    if dimension == 1:
        return np.array([[-s], [s]], dtype=np.int64)
    if dimension == 2:
        f = np.arange(-s, s + 1, dtype=np.int64)
        r = s - np.abs(f)
        m1 = np.repeat(f, 2)
        m2 = np.empty_like(m1)
        m2[0::2] = -r
        m2[1::2] = r
        keep = np.ones(m1.shape[0], dtype=bool)
        keep[1::2] = r != 0  # drop the duplicate (f, 0)
        return np.stack([m1[keep], m2[keep]], axis=1)
    return np.array(list(_shell_vectors(dimension, s)), dtype=np.int64)


def green_ergodicity(alpha, q_max: int) -> GreenVerdict:
    """Search 0 < |m|_1 <= q_max for m·alpha in Z (tolerance 1e-10).

    Brute force by increasing shell; the first hit (lexicographic within a
    shell, sign-normalized) is returned as the witness.  A rotation on the
    nilmanifold is ergodic iff its horizontal-torus projection is, which
    this test decides up to the search height.
    """
    alpha = np.asarray(alpha, dtype=np.float64).ravel()
    k = alpha.shape[0]
    q_max = int(q_max)
    if q_max < 1:
        raise ValueError("search height must be >= 1")
    for s in range(1, q_max + 1):
        vecs = _shell_array(k, s)
        dots = vecs.astype(np.float64) @ alpha
        dist = np.abs(dots - np.round(dots))
        hits = np.nonzero(dist <= _DEP_TOL)[0]
        if hits.size:
            m = tuple(int(v) for v in vecs[hits[0]])
            for v in m:  # sign-normalize: first nonzero component positive
                if v != 0:
                    if v < 0:
                        m = tuple(-w for w in m)
                    break
            return GreenVerdict(ergodic=False, searched_up_to=s, witness=m)
    return GreenVerdict(ergodic=True, searched_up_to=q_max, witness=None)
