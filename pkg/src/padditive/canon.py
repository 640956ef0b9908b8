"""Canonical forms modulo F(R, ..., R) and the Ext^1 computations built on them.

Ordinary polynomials in Y_1..Y_m over k are dicts {exponents: RatFunc}
("KPoly").  When F is reduced with universal principal part P, each a in k
has a unique representation a = P(c_1..c_n); a monomial (Y^s)^(p^d_i) is a
*violation* when the representation of its coefficient has c_i != 0.
Subtracting F(0, .., c_i Y^s, .., 0) clears slot i and only perturbs
monomials of strictly smaller total degree, so sweeping degrees from the
top down terminates with the unique canonical representative.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InvariantError, PreconditionError
from .funcfield import RatFunc
from .ppoly import AdditiveSubst, PPoly, compose, ore_left_divmod
from .reduce import principal_zero
from .universal import (check_inconsistency, find_unrepresented, inconsistency_functional,
                        is_universal, represent)


# ---------------------------------------------------------------- KPoly helpers

def kp_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        nv = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
        if nv:
            out[m] = nv
        else:
            out.pop(m, None)
    return out


def kp_frob(a: dict, j: int, p: int) -> dict:
    """a^(p^j), termwise."""
    if j == 0:
        return dict(a)
    s = p ** j
    return {tuple(e * s for e in m): c.frob(j) for m, c in a.items()}


def kp_scale(a: dict, c: RatFunc) -> dict:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def kp_eval_F(F: PPoly, G) -> dict:
    """F(G_1, ..., G_n) for KPoly arguments."""
    if len(G) != F.nvars:
        raise PreconditionError(f"need {F.nvars} polynomials, got {len(G)}")
    p = F.ctx.p
    out = {}
    for (i, j), c in F.terms.items():
        if G[i]:
            out = kp_add(out, kp_scale(kp_frob(G[i], j, p), c))
    return out


def kp_degree(a: dict) -> int:
    return max((sum(m) for m in a), default=-1)


# ---------------------------------------------------------------- canonical form

@dataclass
class CanonicalForm:
    g: dict
    h: dict
    preimage: list        # KPoly per variable of F, g - h = F(preimage)
    F: PPoly
    nY: int
    steps: int = 0

    def verify(self) -> bool:
        return kp_add(self.g, self.h, -1) == kp_eval_F(self.F, self.preimage)


class Representer:
    """Unique P-representations with a cache, for reduced universal P."""

    def __init__(self, P: PPoly):
        self.P = P
        self._cache = {}

    def __call__(self, a: RatFunc):
        r = self._cache.get(a)
        if r is None:
            r = represent(self.P, a)
            self._cache[a] = r
        return r


def _check_qualifies(F: PPoly):
    if not F:
        raise PreconditionError("F must be nonzero")
    P = F.principal_part()
    if principal_zero(P) is not None:
        raise PreconditionError("F must be reduced")
    if not is_universal(P).universal:
        raise PreconditionError("F must have universal principal part")
    return P


def _slots(F: PPoly):
    P = F.principal_part()
    return {i: j for (i, j) in P.terms}


def violations(h: dict, F: PPoly, rep=None):
    """[(exponents, slot i, s, c_i)] for every violating monomial of h."""
    rep = rep or Representer(F.principal_part())
    p = F.ctx.p
    slots = _slots(F)
    out = []
    for u, b in h.items():
        c = None
        for i, d in sorted(slots.items()):
            q = p ** d
            if all(e % q == 0 for e in u):
                if c is None:
                    c = rep(b)
                if c[i]:
                    out.append((u, i, tuple(e // q for e in u), c[i]))
    return out


def canonical_form(g: dict, F: PPoly, nY: int | None = None, seed: int | None = None,
                   rep: Representer | None = None) -> CanonicalForm:
    """The unique h = g mod F(R^n) with no violations, plus a preimage.

    ``seed`` shuffles the order among monomials of equal total degree; the
    result does not depend on it.
    """
    _check_qualifies(F)
    if nY is None:
        nY = len(next(iter(g))) if g else 0
    zero = tuple([0] * nY)
    if zero in g:
        raise PreconditionError("g must have vanishing constant term")
    rep = rep or Representer(F.principal_part())
    rng = random.Random(seed) if seed is not None else None
    p = F.ctx.p
    slots = _slots(F)
    h = dict(g)
    pre = [{} for _ in range(F.nvars)]
    steps = 0
    D = kp_degree(h)
    while D > 0:
        layer = sorted((m for m in h if sum(m) == D), reverse=True)
        if rng is not None:
            rng.shuffle(layer)
        for u in layer:
            b = h.get(u)
            if b is None:
                continue
            c = None
            fix = [{} for _ in range(F.nvars)]
            for i, d in slots.items():
                q = p ** d
                if all(e % q == 0 for e in u):
                    if c is None:
                        c = rep(b)
                    if c[i]:
                        fix[i] = {tuple(e // q for e in u): c[i]}
            if any(fix):
                h = kp_add(h, kp_eval_F(F, fix), -1)
                pre = [kp_add(a, f) for a, f in zip(pre, fix)]
                steps += 1
        D = max((sum(m) for m in h if sum(m) < D), default=0)
    out = CanonicalForm(dict(g), h, pre, F, nY, steps)
    if not out.verify():
        raise InvariantError("g - h != F(preimage)")
    return out


def is_in_image(g: dict, F: PPoly, nY: int | None = None):
    """(True, preimage) if g lies in F(R^n), else (False, None)."""
    cf = canonical_form(g, F, nY)
    if cf.h:
        return False, None
    if kp_eval_F(F, cf.preimage) != g:
        raise InvariantError("preimage does not reproduce g")
    return True, cf.preimage


# ---------------------------------------------------------------- Ext^1(G_a, U)

@dataclass
class Ext1Reduction:
    f: PPoly              # input, one variable T
    h: PPoly              # representative of degree < p^N
    certificate: list     # one-variable p-polynomials Y_i with f - h = F(Y)
    N: int

    def verify(self, F: PPoly) -> bool:
        Y = AdditiveSubst(self.certificate, 1, F.ctx)
        return self.f - self.h == compose(F, Y)


def ext1_reduce(f: PPoly, F: PPoly) -> Ext1Reduction:
    """Strip monomials a T^(p^m), m >= N, using represent(P, a)."""
    if f.nvars != 1:
        raise PreconditionError("f must be a one-variable p-polynomial")
    P = F.principal_part()
    if principal_zero(P) is not None:
        raise PreconditionError("F must be reduced")
    if not is_universal(P).universal:
        raise PreconditionError("principal part not universal: use ext1_independence")
    ctx = F.ctx
    slots = _slots(F)
    N = max(F.degree(i) for i in range(F.nvars))
    Y = [PPoly.zero(ctx, 1) for _ in range(F.nvars)]
    h = f
    rep = Representer(P)
    while h.degree(0) >= N:
        m = h.degree(0)
        c = rep(h.coeff(0, m))
        step = [PPoly.var(ctx, 1, 0, m - slots[i], c[i]) if c[i] else PPoly.zero(ctx, 1)
                for i in range(F.nvars)]
        h = h - compose(F, AdditiveSubst(step, 1, ctx))
        Y = [a + b for a, b in zip(Y, step)]
        if h.degree(0) >= m:
            raise InvariantError("top term did not cancel")
    out = Ext1Reduction(f, h, Y, N)
    if not out.verify(F):
        raise InvariantError("Ext^1 certificate does not re-expand")
    return out


def leadcoeff_identity(F: PPoly, Y):
    """(lead coefficient of F(Y(T)), P(c), degree) for Y_i in k[T].

    ``Y`` holds dicts {degree: coefficient}.  With D = max p^(d_i) deg Y_i
    and c_i the coefficient of T^(D / p^(d_i)) in Y_i, the lead coefficient
    of F(Y) is P(c) at degree D when F is reduced.
    """
    ctx, p = F.ctx, F.ctx.p
    slots = _slots(F)
    D = max((p ** slots[i] * max(y) for i, y in enumerate(Y) if y and i in slots), default=0)
    FY = {}
    for (i, j), a in F.terms.items():
        for e, c in Y[i].items():
            k = e * p ** j
            FY[k] = FY.get(k, ctx.zero) + a * c.frob(j)
    FY = {k: v for k, v in FY.items() if v}
    cs = []
    for i in range(F.nvars):
        q = p ** slots.get(i, 0)
        cs.append(Y[i].get(D // q, ctx.zero) if D % q == 0 else ctx.zero)
    Pc = F.principal_part().eval(cs)
    top = max(FY, default=-1)
    return (FY.get(top, ctx.zero), Pc, top, D)


@dataclass
class IndependenceCertificate:
    """1 is not in (mu P)(k^n), so no combination of the listed T^(p^m) is in F_*.

    ``functional`` is y with y . column = 0 for every column of the level-N
    matrix of mu P and y . e(1) != 0.  ``rescale`` lists, per power p^m, the
    exponents m - d_i by which a hypothetical solution would be divided.
    """

    F: PPoly
    mu: RatFunc
    powers: list
    rescale: list
    functional: dict = field(default_factory=dict)


def ext1_independence(F: PPoly, powers) -> IndependenceCertificate:
    P = F.principal_part()
    if principal_zero(P) is not None:
        raise PreconditionError("F must be reduced")
    if is_universal(P).universal:
        raise PreconditionError("principal part is universal: classes are not independent")
    ctx, p = F.ctx, F.ctx.p
    N = max(F.degree(i) for i in range(F.nvars))
    slots = _slots(F)
    ms = []
    for q in powers:
        m = _log_p(q, p)
        if m is None or m < N:
            raise PreconditionError(f"power {q} must be p^m with m >= {N}")
        ms.append(m)
    a = find_unrepresented(P)
    mu = a.inv()
    res = inconsistency_functional(P.scale(mu), ctx.one)
    if res is None:
        raise InvariantError("normalized principal part represents 1")
    y, _ = res
    rescale = [[m - slots[i] for i in range(F.nvars)] for m in ms]
    return IndependenceCertificate(F, mu, list(powers), rescale, y)


def check_independence(cert: IndependenceCertificate) -> bool:
    """Independent check of an IndependenceCertificate."""
    F, p = cert.F, cert.F.ctx.p
    slots = _slots(F)
    N = max(F.degree(i) for i in range(F.nvars))
    if not cert.mu:
        return False
    for q, resc in zip(cert.powers, cert.rescale):
        m = _log_p(q, p)
        if m is None or m < N:
            return False
        if resc != [m - slots[i] for i in range(F.nvars)] or min(resc) < 0:
            return False
    if len(cert.rescale) != len(cert.powers):
        return False
    return check_inconsistency(F.principal_part().scale(cert.mu), F.ctx.one, cert.functional)


def _log_p(q, p):
    m = 0
    while q > 1 and q % p == 0:
        q //= p
        m += 1
    return m if q == 1 else None


# ---------------------------------------------------------------- homomorphisms

def hom_verify(G: PPoly, F: PPoly, candidate, var: int = 0) -> bool:
    """Does X -> candidate(X) map {G = 0} into {F = 0}?

    F(candidate) is divided on the left by G in X_var; the map is a
    homomorphism exactly when the remainder vanishes.
    """
    if len(candidate) != F.nvars:
        raise PreconditionError(f"need {F.nvars} components, got {len(candidate)}")
    if any(c.nvars != G.nvars for c in candidate):
        raise PreconditionError("candidate components must live in the source ring")
    image = compose(F, AdditiveSubst(list(candidate), G.nvars, G.ctx))
    _, R = ore_left_divmod(image, G, var)
    return not R
