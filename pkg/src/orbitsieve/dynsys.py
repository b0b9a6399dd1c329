"""Concrete homogeneous systems and their unipotent translations.

Four model families: tori (Kronecker rotations), the Heisenberg
nilmanifold, the modular surface SL2(Z)\\SL2(R), and product systems
carrying a pair of powers of a base translation.  Each family supplies an
exact group law, reduction to a fundamental domain, one-parameter
stepping (u^n by parameter scaling, never repeated multiplication), and
the built-in observables used by the correlation experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels

__all__ = [
    "GOLDEN",
    "TorusPoint",
    "HeisenbergPoint",
    "SL2Point",
    "SystemSpec",
    "Observable",
    "torus_system",
    "heisenberg_system",
    "sl2_system",
    "sl2_generic_start",
    "product_system",
    "power_system",
    "torus_step",
    "heis_mul",
    "heis_inverse",
    "heis_pow",
    "heis_reduce",
    "sl2_reduce",
    "step",
    "observe",
    "apply_observable",
    "observable_values",
    "sl2_step_haar_mean",
    "torus_char",
    "torus_poly",
    "heis_char",
    "heis_vert",
    "sl2_height",
    "sl2_step_observable",
    "const_one",
]

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

_TWO_PI = 2.0 * math.pi


def _frac(x):
    return x - np.floor(x)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class TorusPoint:
    """Point of T^k; coordinates always reduced to [0, 1)."""

    coords: tuple

    @classmethod
    def make(cls, coords) -> "TorusPoint":
        return cls(tuple(float(c) - math.floor(float(c)) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class HeisenbergPoint:
    """Reduced representative in [0,1)^3 of a point of the Heisenberg nilmanifold."""

    x: float
    y: float
    z: float

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class SL2Point:
    """Coset representative of Gamma*g, with the base point g·i cached when known."""

    matrix: np.ndarray  # 2x2, det 1 up to drift tolerance
    cached_base: Optional[complex] = None

    def base_point(self) -> complex:
        if self.cached_base is not None:
            return self.cached_base
        (a, b), (c, d) = self.matrix
        den = c * c + d * d
        return complex((b * d + a * c) / den, (a * d - b * c) / den)


# ---------------------------------------------------------------------------
# torus


def torus_step(x: TorusPoint, alpha, n: int) -> TorusPoint:
    """Rotate by n*alpha, range-reduced per coordinate."""
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != x.dim:
        raise ValueError("alpha dimension does not match the point")
    return TorusPoint.make(c + n * a for c, a in zip(x.coords, alpha))


# ---------------------------------------------------------------------------
# Heisenberg group


def heis_mul(g, h):
    """Group law (x,y,z)·(x',y',z') = (x+x', y+y', z+z'+x·y')."""
    return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])


def heis_inverse(g):
    return (-g[0], -g[1], -g[2] + g[0] * g[1])


def heis_pow(u, n: int):
    """u^n = (n·a, n·b, n·g + C(n,2)·a·b); exact parameter scaling."""
    a, b, g = u
    return (n * a, n * b, n * g + (n * (n - 1) // 2) * a * b)


def heis_reduce(g):
    """Reduce to [0,1)^3 by a lattice element; returns (point, gamma).

    gamma = (p, q, r) integers with gamma·g reduced; the reduced
    representative is unique, so reduce of a reduced point is the identity.
    """
    x, y, z = (float(v) for v in g)
    p = -math.floor(x)
    q = -math.floor(y)
    z2 = z + p * y
    r = -math.floor(z2)
    pt = HeisenbergPoint(x + p, y + q, z2 + r)
    return pt, (p, q, r)


# ---------------------------------------------------------------------------
# SL2(Z)\SL2(R)

_DET_TOL = 1e-9


def sl2_generic_start() -> np.ndarray:
    """Start matrix [[1,0],[phi,1]]: irrational direction, dense u-orbit."""
    return np.array([[1.0, 0.0], [GOLDEN, 1.0]])


def sl2_reduce(g) -> tuple:
    """Reduce the base point of g to the standard fundamental domain.

    Alternates x -> x - round(x) and, while |z| < 1, z -> -1/z, acting on
    the matrix by left multiplication with the corresponding generators;
    capped at 10^4 iterations.  Returns (SL2Point, gamma) with gamma an
    exact-integer element of SL2(Z).
    """
    m = np.asarray(g, dtype=np.float64)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1.0) > _DET_TOL:
        raise ValueError(f"matrix is not unimodular: det={det!r}")
    a, b = float(m[0, 0]), float(m[0, 1])
    c, d = float(m[1, 0]), float(m[1, 1])
    # gamma tracked in exact integers (python ints do not overflow)
    g00, g01, g10, g11 = 1, 0, 0, 1
    for _ in range(10000):
        den = c * c + d * d
        x = (b * d + a * c) / den
        k = math.floor(x + 0.5)
        if k != 0:
            a -= k * c
            b -= k * d
            g00 -= k * g10
            g01 -= k * g11
        if a * a + b * b < den * (1.0 - 1e-12):
            a, b, c, d = -c, -d, a, b
            g00, g01, g10, g11 = -g10, -g11, g00, g01
        else:
            break
    else:
        raise RuntimeError("fundamental-domain reduction exceeded 10^4 iterations")
    red = np.array([[a, b], [c, d]])
    den = c * c + d * d
    base = complex((b * d + a * c) / den, (a * d - b * c) / den)
    gamma = np.array([[g00, g01], [g10, g11]], dtype=object)
    return SL2Point(matrix=red, cached_base=base), gamma


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True)
class Observable:
    """Built-in observable: raw value per point minus an optional shift.

    ``bound`` is the declared sup of |raw - shift| (None when unbounded,
    e.g. the raw height functional).
    """

    observable_id: str
    params: dict = field(default_factory=dict)
    shift: complex = 0.0
    bound: Optional[float] = 1.0

    @property
    def is_constant_one(self) -> bool:
        return self.observable_id == "one" and self.shift == 0


def const_one() -> Observable:
    return Observable("one", {}, 0.0, 1.0)


def torus_char(m) -> Observable:
    """Character e(m·x) on T^k."""
    m = tuple(int(v) for v in (m if np.iterable(m) else (m,)))
    return Observable("torus_char", {"m": m}, 0.0, 1.0)


def torus_poly(modes, coeffs, shift: complex = 0.0) -> Observable:
    """Trigonometric polynomial sum_j c_j e(m_j·x) on T^k."""
    modes = tuple(tuple(int(v) for v in (m if np.iterable(m) else (m,))) for m in modes)
    coeffs = tuple(complex(c) for c in coeffs)
    if len(modes) != len(coeffs):
        raise ValueError("modes and coeffs must have equal length")
    bound = float(sum(abs(c) for c in coeffs)) + abs(shift)
    return Observable("torus_poly", {"modes": modes, "coeffs": coeffs}, shift, bound)


def heis_char(m1: int, m2: int) -> Observable:
    """Horizontal character e(m1·x + m2·y) in reduced coordinates."""
    return Observable("heis_char", {"m1": int(m1), "m2": int(m2)}, 0.0, 1.0)


def heis_vert(k: int) -> Observable:
    """Vertical character e(k·z) in reduced coordinates (discontinuous on a null set)."""
    return Observable("heis_vert", {"k": int(k)}, 0.0, 1.0)


def sl2_height() -> Observable:
    """Raw height y_red = Im of the reduced base point (Gamma-invariant, unbounded)."""
    return Observable("sl2_height", {}, 0.0, None)


def sl2_step_observable(threshold: float, width: float = 0.25, shift: complex = 0.0) -> Observable:
    """Smoothed cusp-excursion indicator clip((y_red - T)/w + 1/2, 0, 1)."""
    if width <= 0:
        raise ValueError("ramp width must be positive")
    return Observable(
        "sl2_step",
        {"threshold": float(threshold), "width": float(width)},
        shift,
        max(1.0, abs(shift)) if shift else 1.0,
    )


def sl2_step_haar_mean(threshold: float, width: float = 0.25) -> float:
    """Exact Haar mean of the smoothed step on the modular surface.

    The region {y_red > T} has hyperbolic area 1/T inside the fundamental
    domain (area pi/3); the centered linear ramp integrates to
    (3/pi)·(1/w)·log((T+w/2)/(T-w/2)).
    """
    t, w = float(threshold), float(width)
    if t - w / 2.0 <= 0:
        raise ValueError("ramp must stay above the real axis")
    return (3.0 / math.pi) * math.log((t + w / 2.0) / (t - w / 2.0)) / w


def tensor(inner: Observable) -> Observable:
    """f(x)·conj(f(y)) on a product system, f the inner observable."""
    b = None if inner.bound is None else inner.bound**2
    return Observable("tensor", {"inner": inner}, 0.0, b)


# vectorized evaluation on raw trajectory data -------------------------------


def _torus_values(obs: Observable, coords: np.ndarray) -> np.ndarray:
    if obs.observable_id == "torus_char":
        m = np.asarray(obs.params["m"], dtype=np.float64)
        return np.exp(1j * _TWO_PI * (coords @ m))
    if obs.observable_id == "torus_poly":
        out = np.zeros(coords.shape[0], dtype=np.complex128)
        for m, c in zip(obs.params["modes"], obs.params["coeffs"]):
            mv = np.asarray(m, dtype=np.float64)
            out += c * np.exp(1j * _TWO_PI * (coords @ mv))
        return out
    raise ValueError(f"observable '{obs.observable_id}' is not defined on the torus")


def _heis_values(obs: Observable, coords: np.ndarray) -> np.ndarray:
    if obs.observable_id == "heis_char":
        ph = obs.params["m1"] * coords[:, 0] + obs.params["m2"] * coords[:, 1]
        return np.exp(1j * _TWO_PI * ph)
    if obs.observable_id == "heis_vert":
        return np.exp(1j * _TWO_PI * obs.params["k"] * coords[:, 2])
    raise ValueError(f"observable '{obs.observable_id}' is not defined on the nilmanifold")


def _sl2_values(obs: Observable, heights: np.ndarray) -> np.ndarray:
    if obs.observable_id == "sl2_height":
        return heights.astype(np.complex128)
    if obs.observable_id == "sl2_step":
        t = obs.params["threshold"]
        w = obs.params["width"]
        return np.clip((heights - t) / w + 0.5, 0.0, 1.0).astype(np.complex128)
    raise ValueError(f"observable '{obs.observable_id}' is not defined on the modular surface")


def observable_values(obs: Observable, kind: str, data: np.ndarray) -> np.ndarray:
    """Evaluate a built-in observable on raw trajectory data.

    ``data`` is the coordinate array for torus/heisenberg kinds and the
    reduced-height array for sl2.  The observable's shift is applied.
    """
    if obs.observable_id == "one":
        n = data.shape[0]
        vals = np.ones(n, dtype=np.complex128)
    elif kind == "torus":
        vals = _torus_values(obs, data)
    elif kind == "heisenberg":
        vals = _heis_values(obs, data)
    elif kind == "sl2":
        vals = _sl2_values(obs, data)
    else:
        raise ValueError(f"unknown system kind '{kind}'")
    if obs.shift:
        vals = vals - obs.shift
    return vals


# ---------------------------------------------------------------------------
# system specs and stepping


@dataclass(frozen=True)
class SystemSpec:
    """A state space plus translating element u and start point.

    kind: one of torus | heisenberg | sl2 | product.  step_element is
    Ad-unipotent by construction for every kind: translations on the
    nilpotent groups, an upper unitriangular parameter for sl2, and a pair
    of powers of the base element for products.
    """

    kind: str
    step_element: object
    start_point: object


def torus_system(alpha, start=None) -> SystemSpec:
    alpha = tuple(float(a) for a in (alpha if np.iterable(alpha) else (alpha,)))
    if start is None:
        start = TorusPoint.make((0.0,) * len(alpha))
    elif not isinstance(start, TorusPoint):
        start = TorusPoint.make(start)
    if start.dim != len(alpha):
        raise ValueError("start point dimension does not match alpha")
    return SystemSpec("torus", alpha, start)


def heisenberg_system(u, start=None) -> SystemSpec:
    u = tuple(float(v) for v in u)
    if len(u) != 3:
        raise ValueError("heisenberg step element is a triple")
    if start is None:
        start = HeisenbergPoint(0.0, 0.0, 0.0)
    elif not isinstance(start, HeisenbergPoint):
        start, _ = heis_reduce(start)
    return SystemSpec("heisenberg", u, start)


def sl2_system(s: float = 1.0, start=None) -> SystemSpec:
    """Horocycle-type system with u = [[1, s], [0, 1]].

    Default start is the generic [[1,0],[phi,1]]: by the orbit-closure
    trichotomy its u-orbit is neither finite nor a closed horocycle, so it
    equidistributes for Haar measure.
    """
    if start is None:
        start = sl2_generic_start()
    if isinstance(start, SL2Point):
        pt = start
    else:
        pt, _ = sl2_reduce(start)
    return SystemSpec("sl2", float(s), pt)


def product_system(base: SystemSpec, p: int, q: int) -> SystemSpec:
    """Product of two copies of the base system stepped by (u^p, u^q)."""
    if base.kind == "product":
        raise ValueError("nested product systems are not supported")
    return SystemSpec("product", (base, int(p), int(q)), (base.start_point, base.start_point))


def power_system(spec: SystemSpec, k: int) -> SystemSpec:
    """Same system translated by u^k instead of u (exact parameter scaling)."""
    k = int(k)
    if spec.kind == "torus":
        return SystemSpec("torus", tuple(k * a for a in spec.step_element), spec.start_point)
    if spec.kind == "heisenberg":
        return SystemSpec("heisenberg", heis_pow(spec.step_element, k), spec.start_point)
    if spec.kind == "sl2":
        return SystemSpec("sl2", spec.step_element * k, spec.start_point)
    if spec.kind == "product":
        base, p, q = spec.step_element
        return SystemSpec("product", (base, p * k, q * k), spec.start_point)
    raise ValueError(f"unknown system kind '{spec.kind}'")


def step(spec: SystemSpec, current, count: int):
    """Right-translate by u^count, then reduce."""
    count = int(count)
    if spec.kind == "torus":
        if not isinstance(current, TorusPoint):
            raise ValueError("torus system expects a TorusPoint")
        return torus_step(current, spec.step_element, count)
    if spec.kind == "heisenberg":
        if not isinstance(current, HeisenbergPoint):
            raise ValueError("heisenberg system expects a HeisenbergPoint")
        moved = heis_mul(current.as_tuple(), heis_pow(spec.step_element, count))
        pt, _ = heis_reduce(moved)
        return pt
    if spec.kind == "sl2":
        if not isinstance(current, SL2Point):
            raise ValueError("sl2 system expects an SL2Point")
        s = spec.step_element * count
        m = current.matrix.copy()
        # right multiplication by [[1, s], [0, 1]]
        m[0, 1] += m[0, 0] * s
        m[1, 1] += m[1, 0] * s
        pt, _ = sl2_reduce(m)
        return pt
    if spec.kind == "product":
        base, p, q = spec.step_element
        if not (isinstance(current, tuple) and len(current) == 2):
            raise ValueError("product system expects a pair of points")
        return (
            step(base, current[0], p * count),
            step(base, current[1], q * count),
        )
    raise ValueError(f"unknown system kind '{spec.kind}'")


# single-point observation ----------------------------------------------------


def apply_observable(point, obs: Observable) -> complex:
    """Evaluate a built-in observable at one point."""
    if obs.observable_id == "tensor":
        inner = obs.params["inner"]
        if not (isinstance(point, tuple) and len(point) == 2):
            raise ValueError("tensor observable expects a product point")
        return apply_observable(point[0], inner) * np.conj(apply_observable(point[1], inner))
    if obs.observable_id == "one":
        return 1.0 - obs.shift
    if isinstance(point, TorusPoint):
        data = np.asarray(point.coords, dtype=np.float64)[None, :]
        return complex(observable_values(obs, "torus", data)[0])
    if isinstance(point, HeisenbergPoint):
        data = np.asarray(point.as_tuple(), dtype=np.float64)[None, :]
        return complex(observable_values(obs, "heisenberg", data)[0])
    if isinstance(point, SL2Point):
        y = np.array([point.base_point().imag])
        return complex(observable_values(obs, "sl2", y)[0])
    raise ValueError(f"observable '{obs.observable_id}' undefined for {type(point).__name__}")


_BUILTIN_FACTORIES = {
    "one": lambda params: const_one(),
    "torus_char": lambda params: torus_char(params["m"]),
    "torus_poly": lambda params: torus_poly(params["modes"], params["coeffs"]),
    "heis_char": lambda params: heis_char(params["m1"], params["m2"]),
    "heis_vert": lambda params: heis_vert(params["k"]),
    "sl2_height": lambda params: sl2_height(),
    "sl2_step": lambda params: sl2_step_observable(
        params["threshold"], params.get("width", 0.25)
    ),
}


def observe(point, observable_id: str, params=None) -> complex:
    """Evaluate a built-in observable (by id + params) at a point."""
    params = dict(params or {})
    try:
        factory = _BUILTIN_FACTORIES[observable_id]
    except KeyError:
        raise ValueError(f"undefined observable '{observable_id}'") from None
    obs = factory(params)
    if "subtract" in params:
        obs = Observable(obs.observable_id, obs.params, complex(params["subtract"]), obs.bound)
    return apply_observable(point, obs)


# raw trajectory data ---------------------------------------------------------


def trajectory_data(spec: SystemSpec, count: int) -> np.ndarray:
    """Raw per-step data for n = 0..count-1: coords (torus/heisenberg) or heights (sl2)."""
    if spec.kind == "torus":
        alpha = np.asarray(spec.step_element, dtype=np.float64)
        x0 = np.asarray(spec.start_point.coords, dtype=np.float64)
        n = np.arange(count, dtype=np.float64)[:, None]
        return _frac(x0[None, :] + n * alpha[None, :])
    if spec.kind == "heisenberg":
        a, b, g = spec.step_element
        x, y, z = spec.start_point.as_tuple()
        return _kernels.heis_orbit_coords(x, y, z, a, b, g, count)
    if spec.kind == "sl2":
        m = spec.start_point.matrix
        heights, _ = _kernels.sl2_orbit_heights(
            m[0, 0], m[0, 1], m[1, 0], m[1, 1], spec.step_element, count
        )
        return heights
    raise ValueError(f"trajectory_data does not handle kind '{spec.kind}'")
