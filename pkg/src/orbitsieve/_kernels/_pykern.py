"""Numpy/python fallback for the hot kernels.

Same contracts as the compiled module ``_ckern``: segmented sieve fill,
compensated weighted partial sums, and long-orbit stepping on the modular
surface and the Heisenberg nilmanifold.  Everything is deterministic
(fixed iteration order, exactly-rounded gap sums), so two runs produce
identical output.  Run ``benchmarks/bench_kernels.py`` for the speed gap
against the compiled backend.
"""

from __future__ import annotations

import math

import numpy as np

SEGMENT = 1 << 20  # sieve block length; keeps per-segment scratch in cache


def _base_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def sieve_mu_lambda(limit: int):
    """Sieve mu, lambda and prime flags for n = 1..limit.

    Returns (mu int8, lam int8, is_prime uint8), each of length limit+1
    with index 0 as padding.
    """
    if limit < 1:
        raise ValueError("sieve limit must be a positive integer")
    mu = np.zeros(limit + 1, dtype=np.int8)
    lam = np.zeros(limit + 1, dtype=np.int8)
    isp = np.zeros(limit + 1, dtype=np.uint8)
    primes = [int(p) for p in _base_primes(math.isqrt(limit))]

    for lo in range(1, limit + 1, SEGMENT):
        hi = min(lo + SEGMENT, limit + 1)
        m = hi - lo
        lam_seg = np.ones(m, dtype=np.int8)
        sq = np.zeros(m, dtype=bool)
        isp_seg = np.ones(m, dtype=bool)
        rem = np.arange(lo, hi, dtype=np.uint64)
        for p in primes:
            pk = p
            while pk < hi:
                start = ((lo + pk - 1) // pk) * pk
                if start >= hi:
                    break
                sl = slice(start - lo, m, pk)
                lam_seg[sl] = -lam_seg[sl]
                rem[sl] //= p
                if pk != p:
                    sq[sl] = True
                pk *= p
            start = ((lo + p - 1) // p) * p
            if start < hi:
                isp_seg[start - lo :: p] = False
                if lo <= p < hi:
                    isp_seg[p - lo] = True
        big = rem > 1  # leftover prime factor > sqrt(limit), multiplicity 1
        lam_seg[big] = -lam_seg[big]
        lam[lo:hi] = lam_seg
        mu[lo:hi] = np.where(sq, 0, lam_seg)
        isp[lo:hi] = isp_seg
    isp[0] = 0
    if limit >= 1:
        isp[1] = 0
    return mu, lam, isp


def weighted_partial_sums(weights, values, checkpoints) -> np.ndarray:
    """Prefix sums of weights*values at the given cut counts, compensated.

    ``checkpoints`` are ascending element counts into ``values``.  Each gap
    is summed with math.fsum (exactly rounded); gap totals are combined
    with a second fsum, so the result matches the compiled sequential
    Kahan loop to ~1 ulp.
    """
    vals = np.ascontiguousarray(values, dtype=np.complex128)
    if weights is not None:
        vals = vals * np.asarray(weights).astype(np.float64)
    cps = np.asarray(checkpoints, dtype=np.int64)
    if len(cps) and (cps[-1] > len(vals) or np.any(np.diff(cps) < 0) or cps[0] < 0):
        raise ValueError("checkpoints must be ascending and within the value array")
    out = np.empty(len(cps), dtype=np.complex128)
    re_gaps: list[float] = []
    im_gaps: list[float] = []
    prev = 0
    for j, c in enumerate(cps):
        c = int(c)
        seg = vals[prev:c]
        re_gaps.append(math.fsum(seg.real.tolist()))
        im_gaps.append(math.fsum(seg.imag.tolist()))
        out[j] = complex(math.fsum(re_gaps), math.fsum(im_gaps))
        prev = c
    return out


def _reduce4(a: float, b: float, c: float, d: float):
    # Gauss reduction of the base point (a*i+b)/(c*i+d): alternate
    # x -> x - round(x) and, while |z| < 1, z -> -1/z, acting on the
    # matrix by left multiplication with the generators.  Capped.
    for _ in range(10000):
        den = c * c + d * d
        x = (b * d + a * c) / den
        k = math.floor(x + 0.5)
        if k != 0:
            a -= k * c
            b -= k * d
        if a * a + b * b < den * (1.0 - 1e-12):
            a, b, c, d = -c, -d, a, b
        else:
            return a, b, c, d
    raise RuntimeError("fundamental-domain reduction exceeded 10^4 iterations")


def sl2_orbit_heights(m00, m01, m10, m11, s, count):
    """Heights Im(base) along the reduced orbit M, M·u, M·u², ...

    u = [[1, s], [0, 1]].  The representative is re-reduced after every
    step and renormalized to det 1 every 1024 steps.  Returns the height
    array and the final matrix.
    """
    heights = np.empty(count, dtype=np.float64)
    a, b, c, d = float(m00), float(m01), float(m10), float(m11)
    a, b, c, d = _reduce4(a, b, c, d)
    s = float(s)
    for n in range(count):
        heights[n] = (a * d - b * c) / (c * c + d * d)
        b += a * s
        d += c * s
        a, b, c, d = _reduce4(a, b, c, d)
        if (n + 1) & 1023 == 0:
            r = math.sqrt(a * d - b * c)
            a /= r
            b /= r
            c /= r
            d /= r
    return heights, np.array([[a, b], [c, d]], dtype=np.float64)


def heis_orbit_coords(x, y, z, a, b, g, count):
    """Reduced Heisenberg coordinates along right translation by (a, b, g).

    Sequential group-law stepping with per-step mod-1 reduction: direct
    closed-form evaluation of the n(n-1)/2 term loses ~1e-4 in doubles at
    n ~ 1e6, while the recurrence keeps drift at ~n*eps.
    """
    out = np.empty((count, 3), dtype=np.float64)
    cx = x - math.floor(x)
    cy = y - math.floor(y)
    cz = z - math.floor(x) * y
    cz -= math.floor(cz)
    for n in range(count):
        out[n, 0] = cx
        out[n, 1] = cy
        out[n, 2] = cz
        # right-translate, then reduce; pulling x back by p shifts z by -p*y
        nx = cx + a
        ny = cy + b
        nz = cz + g + cx * b
        p = math.floor(nx)
        nz -= p * ny
        cx = nx - p
        cy = ny - math.floor(ny)
        cz = nz - math.floor(nz)
    return out
