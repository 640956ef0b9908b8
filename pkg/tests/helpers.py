"""Random generators shared by the property and acceptance tests."""
from __future__ import annotations

import random

from padditive.funcfield import RatFunc
from padditive.ppoly import PPoly


def rand_poly(ctx, rng: random.Random, deg: int = 3, nonzero: bool = False) -> RatFunc:
    """Random polynomial in t_1..t_r of total degree <= deg."""
    F = ctx.F
    while True:
        num = {}
        for _ in range(rng.randint(1, 3)):
            e = [0] * ctx.r
            budget = rng.randint(0, deg)
            for _ in range(budget):
                if ctx.r:
                    e[rng.randrange(ctx.r)] += 1
            c = rng.randrange(1, F.q)
            num[tuple(e)] = F.add(num.get(tuple(e), 0), c)
        x = ctx.poly({m: c for m, c in num.items() if c})
        if x or not nonzero:
            return x


def rand_coeff(ctx, rng, deg: int = 3, frac: float = 0.15) -> RatFunc:
    """Nonzero element of k, occasionally a genuine fraction."""
    x = rand_poly(ctx, rng, deg, nonzero=True)
    if rng.random() < frac:
        x = x / rand_poly(ctx, rng, 2, nonzero=True)
    return x


def rand_mono(ctx, rng, nvars: int, maxj: int, phi_cap: bool = True) -> PPoly:
    """Random monogeneous P with every variable present.

    With ``phi_cap`` the degree pattern satisfies sum p^(-r d_i) <= 1 so
    that reduced outcomes are common.
    """
    p, r = ctx.p, ctx.r
    while True:
        js = [rng.randint(0, maxj) for _ in range(nvars)]
        if not phi_cap or r == 0:
            break
        if sum(1 / p ** (r * j) for j in js) <= 1:
            break
    return PPoly(ctx, nvars, {(i, j): rand_coeff(ctx, rng) for i, j in enumerate(js)})


def rand_ppoly(ctx, rng, nvars: int, maxj: int, density: float = 0.5) -> PPoly:
    terms = {}
    for i in range(nvars):
        for j in range(maxj + 1):
            if rng.random() < density:
                terms[(i, j)] = rand_coeff(ctx, rng, 2)
    return PPoly(ctx, nvars, terms)


def rand_reduced_separable(ctx, rng, nvars: int, maxj: int):
    """F = P + lower terms with reduced P and a linear term; None on a miss."""
    from padditive.reduce import principal_zero
    maxj = max(maxj, 1)
    P = rand_mono(ctx, rng, nvars, maxj)
    P = PPoly(ctx, nvars, {(i, max(j, 1)): c for (i, j), c in P.terms.items()})
    if principal_zero(P) is not None:
        return None
    terms = dict(P.terms)
    top = {i: j for (i, j) in P.terms}
    terms[(0, 0)] = rand_coeff(ctx, rng, 1)
    for i in range(nvars):
        for j in range(top[i]):
            if rng.random() < 0.3:
                terms[(i, j)] = rand_coeff(ctx, rng, 1)
    return PPoly(ctx, nvars, terms)


def rand_laurent_free_kpoly(ctx, rng, nY: int, size: int, maxdeg: int) -> dict:
    """Random polynomial in Y_1..Y_nY with zero constant term."""
    out = {}
    zero = (0,) * nY
    for _ in range(rng.randint(1, size)):
        e = tuple(rng.randint(0, maxdeg) for _ in range(nY))
        if e == zero:
            continue
        out[e] = rand_poly(ctx, rng, 2, nonzero=True)
    return out
