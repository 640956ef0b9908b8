import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_mono, rand_ppoly
from padditive.errors import PreconditionError
from padditive.gfq import GF
from padditive.funcfield import FieldCtx
from padditive.parse import parse_field, parse_ppoly
from padditive.ppoly import AdditiveSubst, PPoly, compose
from padditive.reduce import (check_normal_shape, homogenize, hypersurface_filtration,
                              is_reduced, normalize_system, phi_value, principal_zero,
                              reduce_ppoly, replay_normalization, replay_reduction)

F2 = parse_field("F2(t)")
F3 = parse_field("F3(t)")


def P(text, ctx=F2, n=None):
    return parse_ppoly(text, ctx, nvars=n)[0]


# ---------------------------------------------------------------- homogenize

def test_homogenize_examples():
    Pt, back, N = homogenize(P("X1 + X2^2"))
    assert N == 1
    assert Pt == P("X1^2 + (t)*X2^2 + X3^2")
    H, back, N = homogenize(P("X1^2 + (t)*X2^2"))
    assert H == P("X1^2 + (t)*X2^2")
    t = F2.gen(0)
    assert back([t, F2.one]) == [t, F2.one]


def test_homogenized_zero_transports():
    # X1^2 + X3^2 vanishes at (1, 0, 1): back to (1, 1) for X + Y^2
    Pt, back, _ = homogenize(P("X1 + X2^2"))
    x = [F2.one, F2.zero, F2.one]
    assert not Pt.eval(x)
    y = back(x)
    assert any(y) and not P("X1 + X2^2").eval(y)


# ---------------------------------------------------------------- principal zeros

def test_principal_zero_examples():
    assert principal_zero(P("X1^2 + (t)*X2^2")) is None
    z = principal_zero(P("X1^2 + X2^2"))
    assert z == [F2.one, F2.one]
    assert principal_zero(P("(t)*X1^3 + X2^3 - (t^2)*X3^3", F3)) is None


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)", "F2(t,u)"]), st.integers(0, 10**6))
def test_principal_zero_is_a_zero(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    Pm = rand_mono(ctx, rng, rng.randint(1, 4), 2, phi_cap=False)
    z = principal_zero(Pm)
    phi = phi_value(Pm)
    if z is None:
        assert phi <= 1
    else:
        assert any(z) and not Pm.eval(z)
    if phi > 1:
        assert z is not None


def _grid_zero(Pm, F):
    """First nonzero F_q-point with Pm = 0, by exhaustion (coefficients in F_q)."""
    n = Pm.nvars
    ctx = Pm.ctx
    for pt in product(range(F.q), repeat=n):
        if any(pt):
            v = [ctx.const(c) for c in pt]
            if not Pm.eval(v):
                return pt
    return None


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_brute_force_oracle(q):
    """A zero over F_q forces principal_zero to find one."""
    ctx = parse_field(f"F{q}(t)")
    F = ctx.F
    rng = random.Random(q)
    found = 0
    for _ in range(60):
        n = rng.randint(1, 2)
        terms = {(i, rng.randint(0, 1)): ctx.const(rng.randrange(1, F.q)) for i in range(n)}
        Pm = PPoly(ctx, n, terms)
        if _grid_zero(Pm, F) is not None:
            found += 1
            assert principal_zero(Pm) is not None
    assert found


def test_principal_zero_on_perfect_field():
    ctx = FieldCtx(GF(2), ())
    assert principal_zero(P("X1^2", ctx)) is None
    assert principal_zero(P("X1^2 + X2^4", ctx)) is not None


def test_phi_examples():
    assert phi_value(P("X1^2 + (t)*X2^2")) == 1
    assert phi_value(P("X1^2")) == Fraction(1, 2)
    with pytest.raises(PreconditionError):
        phi_value(PPoly.zero(F2, 1))


# ---------------------------------------------------------------- reduce_ppoly

def test_reduce_examples():
    F = P("X1^2 + X2^2 + X1")
    res = reduce_ppoly(F)
    assert res.F == P("X1", n=2)
    assert compose(F, res.sigma) == res.F
    assert res.sigma.verify_inverse()
    assert replay_reduction(F, res.transcript) == res.F
    G = P("X1^2 + (t)*X2^2")
    res = reduce_ppoly(G)
    assert res.F == G and res.sigma.is_identity()
    res = reduce_ppoly(P("X1^2 + X2^2"))
    assert res.F.is_monogeneous() and len(res.F.variables()) == 1
    (i,) = res.F.variables()
    assert res.F.degree(i) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)"]), st.integers(0, 10**6))
def test_reduce_invariants(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    F = rand_ppoly(ctx, rng, rng.randint(1, 3), 2, 0.6)
    if not F:
        return
    res = reduce_ppoly(F)
    assert compose(F, res.sigma) == res.F
    assert res.sigma.verify_inverse()
    assert replay_reduction(F, res.transcript) == res.F
    act = res.F.variables()
    assert principal_zero(res.F.principal_part().specialize_zero(act)) is None
    assert res.F.degree_sum() <= F.degree_sum()


# ---------------------------------------------------------------- normalization

def test_normalize_examples():
    res = normalize_system([P("X1", n=2), P("X2", n=2)], 2)
    assert res.equations == [P("X1", n=2), P("X2", n=2)]
    H1, H2 = P("X1^2 + (t)*X2"), P("X1^4 + X2")
    res = normalize_system([H1, H2], 2)
    assert res.m == 2
    assert res.equations[0] == H1
    want = reduce_ppoly(P("X2 + (t^2)*X2^2")).F
    assert res.equations[1] == want
    res = normalize_system([H1, H1], 2)
    assert res.m == 1 and res.equations[0] == reduce_ppoly(H1).F


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)"]), st.integers(0, 10**6))
def test_normalize_invariants(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    eqs = [rand_ppoly(ctx, rng, n, 1, 0.5) for _ in range(rng.randint(1, 3))]
    res = normalize_system(eqs, n, ctx)
    check_normal_shape(res.equations, n)
    assert replay_normalization(eqs, n, res.log) == res.equations
    assert res.sigma.verify_inverse()
    # conditions (i): F_i involves X_i and no earlier variable
    for i, e in enumerate(res.equations[:-1]):
        assert e.involves(i) and not any(e.involves(j) for j in range(i))


def test_filtration_examples():
    eqs = [P("X1 + (t)*X2^2 + X3^2"), P("X2^2 + (t)*X3^2", n=3)]
    stages = hypersurface_filtration(eqs, 3)
    assert [s.index for s in stages] == [2, 1]
    assert stages[0].equation == P("X1^2 + (t)*X2^2")
    assert stages[1].equation == P("X1")
    single = hypersurface_filtration([P("X1 + X1^2 + (t)*X2^2")], 2)
    assert len(single) == 1 and single[0].equation == P("X1 + X1^2 + (t)*X2^2")
    split = hypersurface_filtration([], 3, F2)
    assert len(split) == 3 and all(not s.equation for s in split)
    with pytest.raises(PreconditionError):
        hypersurface_filtration([], 3)


def test_is_reduced():
    assert is_reduced(P("X1 + X1^2 + (t)*X2^2"))
    assert not is_reduced(P("X1 + X1^2 + X2^2"))


def test_sigma_inverse_is_two_sided():
    s = reduce_ppoly(P("X1^2 + X2^2 + X1")).sigma
    ident = AdditiveSubst.identity(F2, 2)
    assert s.then(s.inverse) == ident and s.inverse.then(s) == ident
