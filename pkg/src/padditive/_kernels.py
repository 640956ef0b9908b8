"""Batch kernels over F_q on integer-coded elements.

Elements of F_q (q = p^e) are coded as integers 0..q-1 whose base-p digits
are the coefficients of the polynomial representative.  The kernels here
work on numpy arrays of such codes and come in two flavours: numba-compiled
loops and pure numpy fallbacks.  The backend is picked once at import time
from the ``PADDITIVE_BACKEND`` environment variable ("numba" or "numpy");
when unset, numba is used if it imports.

Only batch work lives here: table construction, vectorized field ops,
exhaustive Artin-Schreier images, dense univariate products, remainders and
gcds, and brute-force zero searches.  Scalar symbolic arithmetic stays in plain Python.
"""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - depends on environment
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def _pick_backend() -> str:
    want = os.environ.get("PADDITIVE_BACKEND", "").strip().lower()
    if want in ("numpy", "python", "off", "0"):
        return "numpy"
    if want == "numba" and not HAVE_NUMBA:
        raise ImportError("PADDITIVE_BACKEND=numba but numba is not installed")
    return "numba" if HAVE_NUMBA else "numpy"


BACKEND = _pick_backend()


# ---------------------------------------------------------------- numba side

@njit(cache=True)
def _nb_add(a, b, p, e):
    if p == 2:
        return a ^ b
    out = 0
    place = 1
    for _ in range(e):
        d = (a % p + b % p) % p
        out += d * place
        a //= p
        b //= p
        place *= p
    return out


@njit(cache=True)
def _nb_neg(a, p, e):
    if p == 2:
        return a
    out = 0
    place = 1
    for _ in range(e):
        d = (p - a % p) % p
        out += d * place
        a //= p
        place *= p
    return out


@njit(cache=True)
def _nb_mul(a, b, exp, log, qm1):
    if a == 0 or b == 0:
        return 0
    return exp[(log[a] + log[b]) % qm1]


@njit(cache=True)
def _nb_add_vec(a, b, p, e):
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = _nb_add(a[i], b[i], p, e)
    return out


@njit(cache=True)
def _nb_mul_vec(a, b, exp, log, qm1):
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = _nb_mul(a[i], b[i], exp, log, qm1)
    return out


@njit(cache=True)
def _nb_pow_vec(a, k, exp, log, qm1):
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        if a[i] == 0:
            out[i] = 0 if k > 0 else 1
        else:
            out[i] = exp[(log[a[i]] * k) % qm1]
    return out


@njit(cache=True)
def _nb_as_image(q, p, e, exp, log):
    # mask[v] = 1 iff v = y^p - y for some y; pre[v] = least such y
    mask = np.zeros(q, dtype=np.int8)
    pre = np.full(q, -1, dtype=np.int64)
    qm1 = q - 1
    for y in range(q):
        if y == 0:
            yp = 0
        else:
            yp = exp[(log[y] * p) % qm1]
        v = _nb_add(yp, _nb_neg(y, p, e), p, e)
        if mask[v] == 0:
            mask[v] = 1
            pre[v] = y
    return mask, pre


@njit(cache=True)
def _nb_conv(a, b, p, e, exp, log, qm1):
    n = a.shape[0] + b.shape[0] - 1
    out = np.zeros(n, dtype=np.int64)
    for i in range(a.shape[0]):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(b.shape[0]):
            bj = b[j]
            if bj == 0:
                continue
            out[i + j] = _nb_add(out[i + j], _nb_mul(ai, bj, exp, log, qm1), p, e)
    return out


@njit(cache=True)
def _nb_grid_zero(coeffs, pows, q, p, e, exp, log):
    # first nonzero point of F_q^n where sum_i coeffs[i] * x_i^pows[i] = 0
    n = coeffs.shape[0]
    qm1 = q - 1
    x = np.zeros(n, dtype=np.int64)
    while True:
        # odometer increment
        k = 0
        while k < n:
            x[k] += 1
            if x[k] < q:
                break
            x[k] = 0
            k += 1
        if k == n:
            return np.full(n, -1, dtype=np.int64)
        acc = 0
        for i in range(n):
            xi = x[i]
            if xi == 0 or coeffs[i] == 0:
                continue
            xp = exp[(log[xi] * pows[i]) % qm1]
            acc = _nb_add(acc, _nb_mul(coeffs[i], xp, exp, log, qm1), p, e)
        if acc == 0:
            return x.copy()


@njit(cache=True)
def _nb_trim(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


@njit(cache=True)
def _nb_divmod(a, b, p, e, exp, log, qm1):
    # dense low-to-high coefficient arrays, b trimmed and nonzero
    r = a.copy()
    db = b.shape[0] - 1
    quo = np.zeros(max(r.shape[0] - db, 1), dtype=np.int64)
    inv_lb = exp[(qm1 - log[b[db]]) % qm1]
    for k in range(r.shape[0] - 1, db - 1, -1):
        if r[k] == 0:
            continue
        c = _nb_mul(r[k], inv_lb, exp, log, qm1)
        quo[k - db] = c
        for j in range(db + 1):
            if b[j] != 0:
                t = _nb_neg(_nb_mul(c, b[j], exp, log, qm1), p, e)
                r[k - db + j] = _nb_add(r[k - db + j], t, p, e)
    return quo, r[:db]


@njit(cache=True)
def _nb_gcd(a, b, p, e, exp, log, qm1):
    a = _nb_trim(a)
    b = _nb_trim(b)
    while b.shape[0] > 0:
        _, r = _nb_divmod(a, b, p, e, exp, log, qm1)
        a = b
        b = _nb_trim(r)
    if a.shape[0] == 0:
        return a.copy()
    inv = exp[(qm1 - log[a[a.shape[0] - 1]]) % qm1]
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = _nb_mul(a[i], inv, exp, log, qm1)
    return out


# ---------------------------------------------------------------- numpy side

def _np_digits(a, p, e):
    a = np.asarray(a, dtype=np.int64)
    return np.stack([(a // p**i) % p for i in range(e)])


def _np_undigits(d, p):
    place = p ** np.arange(d.shape[0], dtype=np.int64)
    return np.tensordot(place, d, axes=1).astype(np.int64)


def _np_add_vec(a, b, p, e):
    if p == 2:
        return np.bitwise_xor(a, b)
    return _np_undigits((_np_digits(a, p, e) + _np_digits(b, p, e)) % p, p)


def _np_neg_vec(a, p, e):
    if p == 2:
        return np.asarray(a, dtype=np.int64)
    return _np_undigits((-_np_digits(a, p, e)) % p, p)


def _np_mul_vec(a, b, exp, log, qm1):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    nz = (a != 0) & (b != 0)
    out = np.zeros_like(a)
    out[nz] = exp[(log[a[nz]] + log[b[nz]]) % qm1]
    return out


def _np_pow_vec(a, k, exp, log, qm1):
    a = np.asarray(a, dtype=np.int64)
    out = np.full_like(a, 0 if k > 0 else 1)
    nz = a != 0
    out[nz] = exp[(log[a[nz]] * k) % qm1]
    return out


def _np_as_image(q, p, e, exp, log):
    y = np.arange(q, dtype=np.int64)
    v = _np_add_vec(_np_pow_vec(y, p, exp, log, q - 1), _np_neg_vec(y, p, e), p, e)
    mask = np.zeros(q, dtype=np.int8)
    mask[v] = 1
    pre = np.full(q, -1, dtype=np.int64)
    # reversed assignment so the least y wins
    pre[v[::-1]] = y[::-1]
    return mask, pre


def _np_conv(a, b, p, e, exp, log, qm1):
    out = np.zeros(a.shape[0] + b.shape[0] - 1, dtype=np.int64)
    for i in np.nonzero(a)[0]:
        prod = _np_mul_vec(np.full(b.shape[0], a[i]), b, exp, log, qm1)
        seg = out[i:i + b.shape[0]]
        out[i:i + b.shape[0]] = _np_add_vec(seg, prod, p, e)
    return out


def _np_grid_zero(coeffs, pows, q, p, e, exp, log):
    n = coeffs.shape[0]
    pts = np.indices((q,) * n).reshape(n, -1)[::-1].T  # first coordinate fastest
    acc = np.zeros(pts.shape[0], dtype=np.int64)
    for i in range(n):
        term = _np_mul_vec(np.full(pts.shape[0], coeffs[i]),
                           _np_pow_vec(pts[:, i], int(pows[i]), exp, log, q - 1),
                           exp, log, q - 1)
        acc = _np_add_vec(acc, term, p, e)
    hits = np.nonzero((acc == 0) & (pts.any(axis=1)))[0]
    if hits.size == 0:
        return np.full(n, -1, dtype=np.int64)
    return pts[hits[0]].astype(np.int64)


def _np_trim(a):
    nz = np.nonzero(a)[0]
    return a[:nz[-1] + 1] if nz.size else a[:0]


def _np_divmod(a, b, p, e, exp, log, qm1):
    r = a.copy()
    db = b.shape[0] - 1
    quo = np.zeros(max(r.shape[0] - db, 1), dtype=np.int64)
    inv_lb = int(exp[(qm1 - log[b[db]]) % qm1])
    for k in range(r.shape[0] - 1, db - 1, -1):
        if r[k] == 0:
            continue
        c = int(exp[(log[r[k]] + log[inv_lb]) % qm1])
        quo[k - db] = c
        prod = _np_mul_vec(np.full(db + 1, c), b, exp, log, qm1)
        r[k - db:k + 1] = _np_add_vec(r[k - db:k + 1], _np_neg_vec(prod, p, e), p, e)
    return quo, r[:db]


def _np_gcd(a, b, p, e, exp, log, qm1):
    a, b = _np_trim(a), _np_trim(b)
    while b.shape[0]:
        _, r = _np_divmod(a, b, p, e, exp, log, qm1)
        a, b = b, _np_trim(r)
    if not a.shape[0]:
        return a.copy()
    inv = int(exp[(qm1 - log[a[-1]]) % qm1])
    return _np_mul_vec(np.full(a.shape[0], inv), a, exp, log, qm1)


# ---------------------------------------------------------------- dispatch

_IMPL = {
    "numba": dict(add_vec=_nb_add_vec, mul_vec=_nb_mul_vec, pow_vec=_nb_pow_vec,
                  as_image=_nb_as_image, conv=_nb_conv, grid_zero=_nb_grid_zero,
                  divmod=_nb_divmod, gcd=_nb_gcd),
    "numpy": dict(add_vec=_np_add_vec, mul_vec=_np_mul_vec, pow_vec=_np_pow_vec,
                  as_image=_np_as_image, conv=_np_conv, grid_zero=_np_grid_zero,
                  divmod=_np_divmod, gcd=_np_gcd),
}


def kernel(name: str, backend: str | None = None):
    """Return the kernel ``name`` for ``backend`` (default: the active one)."""
    return _IMPL[backend or BACKEND][name]
