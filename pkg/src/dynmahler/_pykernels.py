"""Vectorized numpy versions of the escape loops.

escape_counts
    index of the first iterate with modulus above ``radius``, or ``max_iter``
    if the first ``max_iter`` iterates all stay inside.
multibrot_counts
    the same for the critical orbit 0, c, c^d + c, ... of z^d + c with the
    per-parameter radius 2 * max(2, |c|).
green_values
    escape-rate limit d^-n log|f^n(z)| for monic f; zero for orbits that stay
    inside ``radius`` for ``max_iter`` steps.  After escape the orbit is
    followed until the tail bound d^-n * 2S / |z_n| drops below ``tol``
    (S = sum of the non-leading coefficient moduli) or |z_n| exceeds ``big``.
preimage_roots
    all roots of f(z) - w for a batch of targets w (backward iteration).
"""

import numpy as np


def _horner(coeffs, z):
    acc = np.full_like(z, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def escape_counts(coeffs, z0, max_iter, radius):
    z = np.array(z0, dtype=complex)
    out = np.full(z.shape, max_iter, dtype=np.int32)
    live = np.arange(z.size)
    r2 = radius * radius
    for k in range(max_iter):
        esc = z.real**2 + z.imag**2 > r2
        if esc.any():
            out[live[esc]] = k
            keep = ~esc
            live, z = live[keep], z[keep]
        if not live.size:
            break
        z = _horner(coeffs, z)
    return out


def multibrot_counts(d, cs, max_iter):
    c = np.array(cs, dtype=complex)
    out = np.full(c.shape, max_iter, dtype=np.int32)
    r2 = 4.0 * np.maximum(2.0, np.abs(c)) ** 2
    z = np.zeros_like(c)
    live = np.arange(c.size)
    for k in range(max_iter):
        esc = z.real**2 + z.imag**2 > r2
        if esc.any():
            out[live[esc]] = k
            keep = ~esc
            live, z, c, r2 = live[keep], z[keep], c[keep], r2[keep]
        if not live.size:
            break
        z = z**d + c
    return out


def green_values(coeffs, z0, max_iter, radius, tol, big):
    coeffs = np.asarray(coeffs, dtype=complex)
    deg = len(coeffs) - 1
    lower = float(np.sum(np.abs(coeffs[:-1])))
    w = np.array(z0, dtype=complex)
    steps = np.zeros(w.shape, dtype=float)
    live = np.abs(w) <= radius
    for _ in range(max_iter):
        idx = np.flatnonzero(live)
        if not idx.size:
            break
        w[idx] = _horner(coeffs, w[idx])
        steps[idx] += 1
        live[idx] = np.abs(w[idx]) <= radius
    out = np.zeros(w.shape, dtype=float)
    ei = np.flatnonzero(np.abs(w) > radius)
    w, scale = w[ei], float(deg) ** -steps[ei]
    aw = np.abs(w)
    active = (scale * 2.0 * lower / aw >= tol) & (aw < big)
    while active.any():
        w[active] = _horner(coeffs, w[active])
        scale[active] /= deg
        aw = np.abs(w)
        active = (scale * 2.0 * lower / aw >= tol) & (aw < big)
    out[ei] = scale * np.log(aw)
    return out


def preimage_roots(coeffs, w, max_sweeps):
    """All roots of ``f(z) - w_i`` for each i; ``(roots (n, deg), ok (n,))``.

    Batched Aberth iteration from the standard circle of initial guesses.
    """
    from .poly import _horner_newton, aberth, initial_circle

    c = np.asarray(coeffs, dtype=complex)
    m = len(c) - 1
    batch = np.tile(c, (len(w), 1))
    batch[:, 0] -= w
    z, done = aberth(_horner_newton(batch), initial_circle(batch, m), max_sweeps)
    return z, done.all(axis=1)
