# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled escape-time and escape-rate loops.

Semantics match :mod:`dynmahler._pykernels` exactly; see that module for the
definitions of the returned quantities.  Complex arithmetic is spelled out on
real and imaginary parts: C99 complex multiplication goes through the
NaN-checking ``__muldc3`` helper, which dominates these loops.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow, sqrt

cnp.import_array()


cdef inline void horner(const double* cr, const double* ci, int deg,
                        double zr, double zi, double* outr, double* outi) noexcept nogil:
    cdef double ar = cr[deg], ai = ci[deg], t
    cdef int k
    for k in range(deg - 1, -1, -1):
        t = ar * zr - ai * zi + cr[k]
        ai = ar * zi + ai * zr + ci[k]
        ar = t
    outr[0] = ar
    outi[0] = ai


def _split(coeffs):
    c = np.asarray(coeffs, dtype=np.complex128)
    return np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag)


cdef enum:
    LANES = 8


def escape_counts(coeffs, const double complex[::1] z0, int max_iter, double radius):
    cre, cim = _split(coeffs)
    cdef const double[::1] cr = cre
    cdef const double[::1] ci = cim
    cdef Py_ssize_t n = z0.shape[0], i, base
    cdef int deg = cr.shape[0] - 1, k, lane, live, width
    cdef double r2 = radius * radius
    cdef double zr[LANES]
    cdef double zi[LANES]
    cdef int alive[LANES]
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] res = out
    with nogil:
        # independent orbits advance in lockstep so their dependency chains overlap
        base = 0
        while base < n:
            width = LANES if base + LANES <= n else <int>(n - base)
            for lane in range(width):
                zr[lane] = z0[base + lane].real
                zi[lane] = z0[base + lane].imag
                alive[lane] = 1
                res[base + lane] = max_iter
            live = width
            for k in range(max_iter):
                for lane in range(width):
                    if alive[lane]:
                        if zr[lane] * zr[lane] + zi[lane] * zi[lane] > r2:
                            res[base + lane] = k
                            alive[lane] = 0
                            live -= 1
                        else:
                            horner(&cr[0], &ci[0], deg, zr[lane], zi[lane], &zr[lane], &zi[lane])
                if live == 0:
                    break
            base += LANES
    return out


def multibrot_counts(int d, const double complex[::1] cs, int max_iter):
    cdef Py_ssize_t n = cs.shape[0], i
    cdef int k, j
    cdef double zr, zi, pr, pi, t, cr, ci, r, r2
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] res = out
    with nogil:
        for i in range(n):
            cr = cs[i].real
            ci = cs[i].imag
            r = sqrt(cr * cr + ci * ci)
            if r < 2.0:
                r = 2.0
            r2 = 4.0 * r * r
            zr = 0.0
            zi = 0.0
            res[i] = max_iter
            for k in range(max_iter):
                if zr * zr + zi * zi > r2:
                    res[i] = k
                    break
                pr = zr
                pi = zi
                for j in range(d - 1):
                    t = pr * zr - pi * zi
                    pi = pr * zi + pi * zr
                    pr = t
                zr = pr + cr
                zi = pi + ci
    return out


def green_values(coeffs, const double complex[::1] z0, int max_iter,
                 double radius, double tol, double big):
    cre, cim = _split(coeffs)
    cdef const double[::1] cr = cre
    cdef const double[::1] ci = cim
    cdef Py_ssize_t n = z0.shape[0], i
    cdef int deg = cr.shape[0] - 1, k
    cdef double r2 = radius * radius, big2 = big * big
    cdef double lower = 0.0, scale, az, zr, zi
    for k in range(deg):
        lower += sqrt(cr[k] * cr[k] + ci[k] * ci[k])
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(n):
            zr = z0[i].real
            zi = z0[i].imag
            k = 0
            while k < max_iter and zr * zr + zi * zi <= r2:
                horner(&cr[0], &ci[0], deg, zr, zi, &zr, &zi)
                k += 1
            if zr * zr + zi * zi <= r2:
                res[i] = 0.0
                continue
            scale = pow(<double>deg, -k)
            az = sqrt(zr * zr + zi * zi)
            while scale * 2.0 * lower / az >= tol and az * az < big2:
                horner(&cr[0], &ci[0], deg, zr, zi, &zr, &zi)
                scale /= deg
                az = sqrt(zr * zr + zi * zi)
            res[i] = scale * log(az)
    return out


cdef enum:
    MAX_DEG = 64


def preimage_roots(coeffs, const double complex[::1] w, int max_sweeps):
    """All roots of ``f(z) - w_i`` for each i by Jacobi-style Aberth sweeps.

    Mirrors ``poly.aberth`` started from ``poly.initial_circle``: same
    guesses, same stopping rules, so both backends fill the same root slots.
    Returns ``(roots, ok)`` with roots of shape (n, deg).
    """
    cre, cim = _split(coeffs)
    cdef const double[::1] cr = cre
    cdef const double[::1] ci = cim
    cdef int m = cr.shape[0] - 1, k, j, sweep, all_done, nbad
    if m < 1 or m > MAX_DEG:
        raise ValueError("preimage_roots supports degrees 1..64")
    cdef Py_ssize_t n = w.shape[0], i
    cdef double eps = 2.220446049250313e-16
    cdef double lr = sqrt(cr[m] * cr[m] + ci[m] * ci[m]), base_rad, q, ang
    cdef double c0r, c0i
    cdef double zr[MAX_DEG]
    cdef double zi[MAX_DEG]
    cdef double rr[MAX_DEG]
    cdef double ri[MAX_DEG]
    cdef double wr[MAX_DEG]
    cdef double wi[MAX_DEG]
    cdef int done[MAX_DEG]
    cdef double ar, ai, dr, di, br, az, pr, pi, sr, si, den, tr, ti, t, dz2
    cdef double cosa[MAX_DEG]
    cdef double sina[MAX_DEG]
    import math
    for k in range(m):
        ang = 2 * math.pi * k / m + 0.4
        cosa[k] = math.cos(ang)
        sina[k] = math.sin(ang)
    # radius of the guess circle ignoring the shifted constant term
    base_rad = 0.0
    for k in range(1, m):
        q = sqrt(cr[k] * cr[k] + ci[k] * ci[k]) / lr
        if q > base_rad:
            base_rad = q
    out = np.empty((n, m), dtype=np.complex128)
    okarr = np.ones(n, dtype=np.uint8)
    cdef double complex[:, ::1] res = out
    cdef unsigned char[::1] ok = okarr
    with nogil:
        for i in range(n):
            c0r = cr[0] - w[i].real
            c0i = ci[0] - w[i].imag
            q = sqrt(c0r * c0r + c0i * c0i) / lr
            if q < base_rad:
                q = base_rad
            q += 1.0
            for k in range(m):
                zr[k] = q * cosa[k]
                zi[k] = q * sina[k]
                done[k] = 0
            nbad = 0
            for sweep in range(max_sweeps):
                all_done = 1
                for k in range(m):
                    # p, p' and the rounding bound by Horner
                    pr = cr[m]
                    pi = ci[m]
                    dr = 0.0
                    di = 0.0
                    az = sqrt(zr[k] * zr[k] + zi[k] * zi[k])
                    br = sqrt(pr * pr + pi * pi)
                    for j in range(m - 1, -1, -1):
                        t = dr * zr[k] - di * zi[k] + pr
                        di = dr * zi[k] + di * zr[k] + pi
                        dr = t
                        if j == 0:
                            ar = c0r
                            ai = c0i
                        else:
                            ar = cr[j]
                            ai = ci[j]
                        t = pr * zr[k] - pi * zi[k] + ar
                        pi = pr * zi[k] + pi * zr[k] + ai
                        pr = t
                        br = br * az + sqrt(ar * ar + ai * ai)
                    if sqrt(pr * pr + pi * pi) <= 2 * m * eps * br:
                        done[k] = 1
                    den = dr * dr + di * di
                    if den == 0.0:
                        rr[k] = 1.0 / 0.0
                        ri[k] = 0.0
                    else:
                        rr[k] = (pr * dr + pi * di) / den
                        ri[k] = (pi * dr - pr * di) / den
                    if not done[k]:
                        all_done = 0
                if all_done:
                    break
                for k in range(m):
                    sr = 0.0
                    si = 0.0
                    for j in range(m):
                        if j != k:
                            tr = zr[k] - zr[j]
                            ti = zi[k] - zi[j]
                            dz2 = tr * tr + ti * ti
                            if dz2 > 0.0:
                                sr += tr / dz2
                                si -= ti / dz2
                    # w = ratio / (1 - ratio * s)
                    tr = 1.0 - (rr[k] * sr - ri[k] * si)
                    ti = -(rr[k] * si + ri[k] * sr)
                    den = tr * tr + ti * ti
                    if den == 0.0 or rr[k] != rr[k] or rr[k] - rr[k] != 0.0:
                        # non-finite step: deterministic small kick
                        az = 1e-3 * (1.0 + sqrt(zr[k] * zr[k] + zi[k] * zi[k]))
                        wr[k] = az * cosa[(k + sweep) % m]
                        wi[k] = az * sina[(k + sweep) % m]
                    else:
                        wr[k] = (rr[k] * tr + ri[k] * ti) / den
                        wi[k] = (ri[k] * tr - rr[k] * ti) / den
                    if done[k]:
                        wr[k] = 0.0
                        wi[k] = 0.0
                for k in range(m):
                    zr[k] -= wr[k]
                    zi[k] -= wi[k]
                    if sqrt(wr[k] * wr[k] + wi[k] * wi[k]) <= 2 * eps * sqrt(zr[k] * zr[k] + zi[k] * zi[k]):
                        done[k] = 1
            all_done = 1
            for k in range(m):
                res[i, k].real = zr[k]
                res[i, k].imag = zi[k]
                if not done[k]:
                    all_done = 0
            ok[i] = all_done
    return out, okarr.astype(bool)
