import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_coeff, rand_ppoly
from padditive.errors import ParseError
from padditive.parse import parse_field, parse_poly, parse_ppoly, parse_ratfunc, render_poly
from padditive.ppoly import AdditiveSubst, PPoly, compose, ore_left_divmod

F2 = parse_field("F2(t)")


def P(text, ctx=F2, n=None):
    return parse_ppoly(text, ctx, nvars=n)[0]


def R(text, ctx=F2):
    return parse_ratfunc(text, ctx)


def test_principal_part_examples():
    assert P("X1 + X1^2 + (t)*X2^2").principal_part() == P("X1^2 + (t)*X2^2")
    assert P("X1").principal_part() == P("X1")
    assert PPoly.zero(F2, 2).principal_part() == PPoly.zero(F2, 2)


def test_is_separable_examples():
    assert P("X1 + X1^2 + (t)*X2^2").is_separable()
    assert not P("X1^2 + (t)*X2^2").is_separable()
    assert not PPoly.zero(F2, 1).is_separable()


def test_eval_examples():
    zero, t, one = F2.zero, F2.gen(0), F2.one
    assert P("X1 + X1^2 + (t)*X2^2").eval([zero, zero]) == zero
    assert P("X1^2 + (t)*X2^2").eval([t, one]) == R("t^2 + t")
    assert P("X1").eval([R("t/(t+1)")]) == R("t/(t+1)")


def test_compose_examples():
    F = P("X1^2 + X2^2 + X1")
    ident = AdditiveSubst.identity(F2, 2)
    assert compose(F, ident) == F
    sigma = AdditiveSubst([P("X1", n=2), P("X2 + X1")], 2, F2)
    assert compose(F, sigma) == P("X1 + X2^2")
    sigma2 = AdditiveSubst([P("X1 + X2^2"), P("X2", n=2)], 2, F2)
    assert compose(P("X1 + X2^2"), sigma2) == P("X1", n=2)


def test_ore_examples():
    g, g1 = P("X1^4 + X2"), P("X1^2 + (t)*X2")
    Q, Rm = ore_left_divmod(g, g1, 0)
    assert Q == P("X1^2")
    assert Rm == P("X2 + (t^2)*X2^2", n=2)
    Q, Rm = ore_left_divmod(g1, g1, 0)
    assert Q == P("X1") and not Rm
    h = P("X2^2 + (t)*X2", n=2)
    Q, Rm = ore_left_divmod(h, g1, 0)
    assert not Q and Rm == h


def test_frobenius_twist_examples():
    F = P("X1 + X1^2 + (t)*X2^2")
    assert F.frobenius_twist(1) == P("X1 + X1^2 + (t^2)*X2^2")
    assert F.frobenius_twist(0) == F
    assert not PPoly.zero(F2, 2).frobenius_twist(3)


def test_nvars_is_part_of_identity():
    assert P("X1", n=1) != P("X1", n=2)


CTXS = [parse_field(f) for f in ("F2(t)", "F3(t)", "F4(t)", "F2(t,u)")]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(CTXS) - 1), st.integers(0, 10**6))
def test_additivity_and_frobenius_twist(ci, seed):
    ctx = CTXS[ci]
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    F = rand_ppoly(ctx, rng, n, 2)
    x = [rand_coeff(ctx, rng, 2) for _ in range(n)]
    y = [rand_coeff(ctx, rng, 2) for _ in range(n)]
    c = rand_coeff(ctx, rng, 1)
    assert F.eval([a + b for a, b in zip(x, y)]) == F.eval(x) + F.eval(y)
    # F_p-linear, and F(c x) != c F(x) in general, but (F^{(1)})(x^p) = F(x)^p
    assert F.eval([ctx.integer(2) * a for a in x]) == ctx.integer(2) * F.eval(x)
    assert F.frobenius_twist(1).eval([a.frob(1) for a in x]) == F.eval(x).frob(1)
    # composing with a substitution equals evaluating at the substituted point
    G = [rand_ppoly(ctx, rng, 2, 1) for _ in range(n)]
    s = AdditiveSubst(G, 2, ctx)
    pt = [c, rand_coeff(ctx, rng, 1)]
    assert compose(F, s).eval(pt) == F.eval([g.eval(pt) for g in G])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(CTXS) - 1), st.integers(0, 10**6))
def test_ore_division_identity(ci, seed):
    ctx = CTXS[ci]
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    g = rand_ppoly(ctx, rng, n, 3)
    g1 = rand_ppoly(ctx, rng, n, 2)
    var = rng.randrange(n)
    if not g1.involves(var):
        g1 = g1 + PPoly.var(ctx, n, var, 1)
    Q, Rm = ore_left_divmod(g, g1, var)
    assert Rm.degree(var) < g1.degree(var)
    assert compose(Q, AdditiveSubst([g1], n, ctx)) + Rm == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(CTXS) - 1), st.integers(0, 10**6))
def test_render_parse_roundtrip(ci, seed):
    ctx = CTXS[ci]
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    F = rand_ppoly(ctx, rng, n, 3)
    for first in (0, 1):
        assert parse_ppoly(F.render(first), ctx, nvars=n, first=first)[0] == F
    c = rand_coeff(ctx, rng, 3, frac=0.5)
    assert parse_ratfunc(str(c), ctx) == c


def test_poly_roundtrip():
    g, nY = parse_poly("Y1^4 + (t)*Y1^2*Y2^2 + Y1*Y2", F2)
    assert nY == 2
    assert parse_poly(render_poly(g), F2, 2)[0] == g


@pytest.mark.parametrize("bad", ["X1^3", "X0^2 +", "(t*X1", "X1^^2", "Y1 + X1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        P(bad)


def test_integer_coefficients_reduce_mod_p():
    assert P("3*X1^2") == P("X1^2")


@pytest.mark.parametrize("bad", ["F6(t)", "F2(t,t)", "G2(t)", "F2(X1)"])
def test_field_errors(bad):
    with pytest.raises(ParseError):
        parse_field(bad)


def test_leading_minus_and_integer_coefficients():
    F3 = parse_field("F3(t)")
    assert P("-X1 + 2*X2^3", F3) == P("2*X1 - X2^3", F3)
