"""Sparse multivariate polynomials over F_q.

A polynomial in ``nv`` variables is a dict mapping exponent tuples of length
``nv`` to nonzero field codes.  Dicts are treated as immutable once built.
Monomials are compared in graded-lex order: total degree first, then the
exponent tuple lexicographically (t1 > t2 > ...).
"""
from __future__ import annotations

import numpy as np

from . import _kernels

# products with at least this many term pairs go through the dense kernel
DENSE_MUL_THRESHOLD = 256
# univariate division and gcd go dense from this degree on
DENSE_DIV_DEGREE = 24


def glex(e):
    return (sum(e), e)


def lead(a):
    m = max(a, key=glex)
    return m, a[m]


def is_const(a) -> bool:
    return not a or (len(a) == 1 and not any(next(iter(a))))


def const(F, c, nv):
    return {(0,) * nv: c} if c else {}


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    fadd = F.add
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = fadd(v, c)
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def neg(F, a):
    if F.p == 2:
        return a
    return {m: F.neg(c) for m, c in a.items()}


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    if c == 1:
        return a
    if not c:
        return {}
    return {m: F.mul(v, c) for m, v in a.items()}


def mul_term(F, a, mono, c):
    fm = F.mul
    return {tuple(x + y for x, y in zip(m, mono)): fm(v, c) for m, v in a.items()}


def mul(F, a, b):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        (m, c), = b.items()
        return mul_term(F, a, m, c)
    if len(a) * len(b) >= DENSE_MUL_THRESHOLD and len(next(iter(a))) == 1:
        return _mul_dense1(F, a, b)
    out = {}
    fadd, fm = F.add, F.mul
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            v = fm(c1, c2)
            w = out.get(m)
            out[m] = v if w is None else fadd(w, v)
    return {m: c for m, c in out.items() if c}


def _dense(a):
    out = np.zeros(max(m[0] for m in a) + 1 if a else 0, dtype=np.int64)
    for (k,), c in a.items():
        out[k] = c
    return out


def _sparse(v):
    return {(int(k),): int(v[k]) for k in np.nonzero(v)[0]}


def _mul_dense1(F, a, b):
    out = _kernels.kernel("conv")(_dense(a), _dense(b), F.p, F.e, F.exp, F.log, F.q - 1)
    return _sparse(out)


def power(F, a, k: int, nv: int):
    out = const(F, 1, nv)
    base = a
    while k:
        if k & 1:
            out = mul(F, out, base)
        k >>= 1
        if k:
            base = mul(F, base, base)
    return out


def frob(F, a, n: int):
    """a^(p^n), computed termwise since we are in characteristic p."""
    if n == 0:
        return a
    pn = F.p ** n
    return {tuple(x * pn for x in m): F.frobenius(c, n) for m, c in a.items()}


def monic(F, a):
    if not a:
        return a
    _, c = lead(a)
    return scale(F, a, F.inv(c)) if c != 1 else a


def divexact(F, a, b):
    """a / b, raising ArithmeticError if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(b) == 1:
        (mb, cb), = b.items()
        ci = F.inv(cb)
        out = {}
        for m, c in a.items():
            d = tuple(x - y for x, y in zip(m, mb))
            if min(d, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            out[d] = F.mul(c, ci)
        return out
    if len(next(iter(b))) == 1 and _deg1(a) >= DENSE_DIV_DEGREE:
        q, r = divmod1(F, a, b)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q
    mb, cb = lead(b)
    ci = F.inv(cb)
    r = dict(a)
    q = {}
    while r:
        mr, cr = lead(r)
        d = tuple(x - y for x, y in zip(mr, mb))
        if min(d) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = F.mul(cr, ci)
        q[d] = c
        r = sub(F, r, mul_term(F, b, d, c))
    return q


# ---------------------------------------------------------------- univariate

def _deg1(a):
    return max(m[0] for m in a) if a else -1


def divmod1(F, a, b):
    """Univariate division with remainder (one-variable dicts)."""
    db = _deg1(b)
    if _deg1(a) >= DENSE_DIV_DEGREE:
        if _deg1(a) < db:
            return {}, dict(a)
        q, r = _kernels.kernel("divmod")(_dense(a), _dense(b), F.p, F.e,
                                         F.exp, F.log, F.q - 1)
        return _sparse(q), _sparse(r)
    cb = F.inv(b[(db,)])
    r = dict(a)
    q = {}
    dr = _deg1(r)
    while r and dr >= db:
        c = F.mul(r[(dr,)], cb)
        q[(dr - db,)] = c
        r = sub(F, r, mul_term(F, b, (dr - db,), c))
        dr = _deg1(r)
    return q, r


def gcd(F, a, b, nv: int):
    """Monic gcd (zero only when both inputs are zero)."""
    if not a:
        return monic(F, b)
    if not b:
        return monic(F, a)
    if nv == 0:
        return {(): 1}
    if is_const(a) or is_const(b):
        return const(F, 1, nv)
    if nv == 1:
        if max(_deg1(a), _deg1(b)) >= DENSE_DIV_DEGREE:
            return _sparse(_kernels.kernel("gcd")(_dense(a), _dense(b), F.p, F.e,
                                                  F.exp, F.log, F.q - 1))
        while b:
            a, b = b, divmod1(F, a, b)[1]
        return monic(F, a)
    # single-term fast path: gcd is a monomial
    if len(a) == 1 or len(b) == 1:
        mono = None
        for m in list(a) + list(b):
            mono = m if mono is None else tuple(min(x, y) for x, y in zip(mono, m))
        return {mono: 1}
    return monic(F, _gcd_rec(F, a, b, nv))


def _split(a):
    out = {}
    for m, c in a.items():
        out.setdefault(m[-1], {})[m[:-1]] = c
    return out


def _join(A):
    out = {}
    for d, co in A.items():
        for m, c in co.items():
            out[m + (d,)] = c
    return out


def _content(F, A, nv):
    g = {}
    for co in A.values():
        g = gcd(F, g, co, nv)
        if is_const(g):
            break
    return g


def _primpart(F, A, cont):
    if is_const(cont):
        c = next(iter(cont.values()))
        ci = F.inv(c)
        return {d: scale(F, co, ci) for d, co in A.items()}
    return {d: divexact(F, co, cont) for d, co in A.items()}


def _gcd_rec(F, a, b, nv):
    A, B = _split(a), _split(b)
    sub_nv = nv - 1
    ca, cb = _content(F, A, sub_nv), _content(F, B, sub_nv)
    c = gcd(F, ca, cb, sub_nv)
    A, B = _primpart(F, A, ca), _primpart(F, B, cb)
    if max(A) < max(B):
        A, B = B, A
    while B and max(B) > 0:
        R = _prem(F, A, B, sub_nv)
        if not R:
            A, B = B, None
            break
        A, B = B, _primpart(F, R, _content(F, R, sub_nv))
    if B is not None:
        # B is a nonzero constant in the main variable: the primitive gcd is 1
        G = {(0,) * nv: 1}
    else:
        G = _join(A)
    return mul(F, G, {m + (0,): v for m, v in c.items()})


def _prem(F, A, B, nv):
    dB = max(B)
    lb = B[dB]
    R = dict(A)
    while R and max(R) >= dB:
        dR = max(R)
        lr = R[dR]
        new = {}
        for d, co in R.items():
            new[d] = mul(F, co, lb)
        for d, co in B.items():
            k = d + dR - dB
            v = sub(F, new.get(k, {}), mul(F, co, lr))
            if v:
                new[k] = v
            else:
                new.pop(k, None)
        R = {d: co for d, co in new.items() if co}
    return R


# ---------------------------------------------------------------- text

def render(F, a, names) -> str:
    if not a:
        return "0"
    parts = []
    for m in sorted(a, key=glex, reverse=True):
        c = a[m]
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, m) if k)
        cs = F.render(c)
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif F.e == 1 or "+" not in cs:
            parts.append(f"{cs}*{mono}")
        else:
            parts.append(f"({cs})*{mono}")
    return "+".join(parts)
