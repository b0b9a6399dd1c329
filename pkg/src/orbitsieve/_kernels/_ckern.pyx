# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: segmented sieve, Kahan partial sums, orbit stepping.

Contracts match ``_pykern`` exactly; the fallback is the reference.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, sqrt, fabs

cnp.import_array()

SEGMENT = 1 << 20


def sieve_mu_lambda(long long limit):
    """Sieve mu, lambda and prime flags for n = 1..limit (index 0 padding)."""
    if limit < 1:
        raise ValueError("sieve limit must be a positive integer")
    mu_arr = np.zeros(limit + 1, dtype=np.int8)
    lam_arr = np.zeros(limit + 1, dtype=np.int8)
    isp_arr = np.zeros(limit + 1, dtype=np.uint8)
    cdef signed char[::1] mu = mu_arr
    cdef signed char[::1] lam = lam_arr
    cdef unsigned char[::1] isp = isp_arr

    cdef long long root = <long long>sqrt(<double>limit)
    while (root + 1) * (root + 1) <= limit:
        root += 1
    while root * root > limit:
        root -= 1

    # base primes by a plain sieve
    base_arr = np.ones(root + 1, dtype=np.uint8)
    cdef unsigned char[::1] base = base_arr
    cdef long long i, j_
    if root >= 0:
        base[0] = 0
    if root >= 1:
        base[1] = 0
    i = 2
    while i * i <= root:
        if base[i]:
            j_ = i * i
            while j_ <= root:
                base[j_] = 0
                j_ += i
        i += 1
    primes_arr = np.nonzero(base_arr)[0].astype(np.int64)
    cdef long long[::1] primes = primes_arr
    cdef Py_ssize_t nprimes = primes.shape[0]

    cdef long long seg = SEGMENT
    cdef long long lo, hi, m, p, start, n, idx, e
    cdef unsigned long long r
    cdef Py_ssize_t pi

    rem_arr = np.empty(seg, dtype=np.uint64)
    lam_seg_arr = np.empty(seg, dtype=np.int8)
    sq_arr = np.empty(seg, dtype=np.uint8)
    isp_seg_arr = np.empty(seg, dtype=np.uint8)
    cdef unsigned long long[::1] rem = rem_arr
    cdef signed char[::1] lam_seg = lam_seg_arr
    cdef unsigned char[::1] sq = sq_arr
    cdef unsigned char[::1] isp_seg = isp_seg_arr

    lo = 1
    while lo <= limit:
        hi = lo + seg
        if hi > limit + 1:
            hi = limit + 1
        m = hi - lo
        for n in range(m):
            rem[n] = <unsigned long long>(lo + n)
            lam_seg[n] = 1
            sq[n] = 0
            isp_seg[n] = 1
        for pi in range(nprimes):
            p = primes[pi]
            start = ((lo + p - 1) // p) * p
            n = start
            while n < hi:
                idx = n - lo
                e = 0
                r = rem[idx]
                while r % <unsigned long long>p == 0:
                    r //= <unsigned long long>p
                    e += 1
                rem[idx] = r
                if e & 1:
                    lam_seg[idx] = -lam_seg[idx]
                if e >= 2:
                    sq[idx] = 1
                if n != p:
                    isp_seg[idx] = 0
                n += p
        for n in range(m):
            if rem[n] > 1:  # leftover prime > sqrt(limit)
                lam_seg[n] = -lam_seg[n]
            lam[lo + n] = lam_seg[n]
            mu[lo + n] = 0 if sq[n] else lam_seg[n]
            isp[lo + n] = isp_seg[n]
        lo = hi
    isp[0] = 0
    if limit >= 1:
        isp[1] = 0
    return mu_arr, lam_arr, isp_arr


def weighted_partial_sums(weights, values, checkpoints):
    """Kahan–Babuška–Neumaier prefix sums at the given cut counts."""
    vals_arr = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double complex[::1] vals = vals_arr
    cdef const signed char[::1] w
    cdef bint have_w = weights is not None
    if have_w:
        w_arr = np.ascontiguousarray(weights, dtype=np.int8)
        if w_arr.shape[0] != vals_arr.shape[0]:
            raise ValueError("weights and values must have equal length")
        w = w_arr
    cps_arr = np.asarray(checkpoints, dtype=np.int64)
    cdef long long[::1] cps = cps_arr
    cdef Py_ssize_t ncp = cps.shape[0]
    if ncp and (cps_arr[-1] > vals_arr.shape[0] or np.any(np.diff(cps_arr) < 0) or cps_arr[0] < 0):
        raise ValueError("checkpoints must be ascending and within the value array")
    out_arr = np.empty(ncp, dtype=np.complex128)
    cdef double complex[::1] out = out_arr

    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    cdef double xr, xi, t, wgt
    cdef Py_ssize_t i = 0, j
    cdef long long c
    for j in range(ncp):
        c = cps[j]
        while i < c:
            xr = vals[i].real
            xi = vals[i].imag
            if have_w:
                wgt = <double>w[i]
                xr *= wgt
                xi *= wgt
            t = sr + xr
            if fabs(sr) >= fabs(xr):
                cr += (sr - t) + xr
            else:
                cr += (xr - t) + sr
            sr = t
            t = si + xi
            if fabs(si) >= fabs(xi):
                ci += (si - t) + xi
            else:
                ci += (xi - t) + si
            si = t
            i += 1
        out[j] = (sr + cr) + 1j * (si + ci)
    return out_arr


cdef inline int _reduce4(double* a, double* b, double* c, double* d) except -1:
    cdef double den, x, aa, bb
    cdef double k
    cdef int it
    for it in range(10000):
        den = c[0] * c[0] + d[0] * d[0]
        x = (b[0] * d[0] + a[0] * c[0]) / den
        k = floor(x + 0.5)
        if k != 0.0:
            a[0] -= k * c[0]
            b[0] -= k * d[0]
        if a[0] * a[0] + b[0] * b[0] < den * (1.0 - 1e-12):
            aa = a[0]
            bb = b[0]
            a[0] = -c[0]
            b[0] = -d[0]
            c[0] = aa
            d[0] = bb
        else:
            return 0
    raise RuntimeError("fundamental-domain reduction exceeded 10^4 iterations")


def sl2_orbit_heights(double m00, double m01, double m10, double m11,
                      double s, long long count):
    """Heights Im(base) along the reduced orbit M, M·u, M·u², ... with u=[[1,s],[0,1]]."""
    heights_arr = np.empty(count, dtype=np.float64)
    cdef double[::1] heights = heights_arr
    cdef double a = m00, b = m01, c = m10, d = m11, r
    cdef long long n
    _reduce4(&a, &b, &c, &d)
    for n in range(count):
        heights[n] = (a * d - b * c) / (c * c + d * d)
        b += a * s
        d += c * s
        _reduce4(&a, &b, &c, &d)
        if (n + 1) & 1023 == 0:
            r = sqrt(a * d - b * c)
            a /= r
            b /= r
            c /= r
            d /= r
    return heights_arr, np.array([[a, b], [c, d]], dtype=np.float64)


def heis_orbit_coords(double x, double y, double z,
                      double a, double b, double g, long long count):
    """Reduced Heisenberg coordinates along right translation by (a, b, g)."""
    out_arr = np.empty((count, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double cx = x - floor(x)
    cdef double cy = y - floor(y)
    cdef double cz = z - floor(x) * y
    cdef double nx, ny, nz, p
    cdef long long n
    cz -= floor(cz)
    for n in range(count):
        out[n, 0] = cx
        out[n, 1] = cy
        out[n, 2] = cz
        # right-translate, then reduce; pulling x back by p shifts z by -p*y
        nx = cx + a
        ny = cy + b
        nz = cz + g + cx * b
        p = floor(nx)
        nz -= p * ny
        cx = nx - p
        cy = ny - floor(ny)
        cz = nz - floor(nz)
    return out_arr
