"""Backend selection for the escape loops.

The compiled extension ``dynmahler._ckernels`` is used when it was built and
``DYNMAHLER_PURE_PYTHON`` is unset; otherwise the numpy implementation in
``dynmahler._pykernels`` is used.  Both backends are importable directly for
testing and benchmarking.
"""

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and not os.environ.get("DYNMAHLER_PURE_PYTHON"):
    BACKEND = "cython"
    _impl = _ckernels
else:
    BACKEND = "python"
    _impl = _pykernels


def backends():
    """Available backends as a name -> module mapping."""
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


def _flat(z):
    z = np.asarray(z, dtype=complex)
    return np.ascontiguousarray(z.ravel()), z.shape


def escape_counts(coeffs, z, max_iter, radius, impl=None):
    impl = impl or _impl
    flat, shape = _flat(z)
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=complex))
    return impl.escape_counts(c, flat, int(max_iter), float(radius)).reshape(shape)


def multibrot_counts(d, c, max_iter, impl=None):
    impl = impl or _impl
    flat, shape = _flat(c)
    return impl.multibrot_counts(int(d), flat, int(max_iter)).reshape(shape)


def green_values(coeffs, z, max_iter, radius, tol=1e-14, big=None, impl=None):
    impl = impl or _impl
    flat, shape = _flat(z)
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=complex))
    deg = len(c) - 1
    if big is None:
        big = 10.0 ** (250.0 / deg)
    out = impl.green_values(c, flat, int(max_iter), float(radius), float(tol), float(big))
    return np.asarray(out).reshape(shape)


def preimage_roots(coeffs, w, max_sweeps=500, impl=None):
    """All ``deg`` roots of ``f(z) - w_i`` per target; see the backend modules."""
    impl = impl or _impl
    flat, shape = _flat(w)
    c = np.ascontiguousarray(np.asarray(coeffs, dtype=complex))
    r, ok = impl.preimage_roots(c, flat, int(max_sweeps))
    return np.asarray(r).reshape(shape + (len(c) - 1,)), np.asarray(ok).reshape(shape)
