import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_coeff, rand_mono, rand_reduced_separable
from padditive.errors import PreconditionError
from padditive.funcfield import p_basis_expand
from padditive.parse import parse_field, parse_ppoly, parse_ratfunc
from padditive.ppoly import AdditiveSubst, PPoly
from padditive.reduce import phi_value, principal_zero
from padditive.universal import (base_change_constants, check_inconsistency, classify,
                                 complete_to_universal, example_E, example_W,
                                 find_unrepresented, find_VPL_change_of_vars,
                                 inconsistency_functional, is_universal, linear_subst,
                                 represent, stable_under_extension, standard_P, standard_V,
                                 ubiquity_embed, verify_VPL_change_of_vars,
                                 weakly_permawound_by_filtration, weil_restrict_alpha_p,
                                 weil_restrict_gm_quotient)

F2 = parse_field("F2(t)")
F3 = parse_field("F3(t)")


def P(text, ctx=F2, n=None, first=1):
    return parse_ppoly(text, ctx, nvars=n, first=first)[0]


def R(text, ctx=F2):
    return parse_ratfunc(text, ctx)


# ---------------------------------------------------------------- verdicts

def test_phi_examples():
    assert phi_value(P("X1^2 + (t)*X2^2")) == 1
    assert phi_value(P("X1^3 + (t)*X2^3", F3)) == Fraction(2, 3)
    assert phi_value(P("X1")) == 1


def test_is_universal_examples():
    for ctx in (F2, F3, parse_field("F2(t,u)")):
        assert is_universal(standard_P(ctx)).universal
    v = is_universal(P("X1^3 + (t)*X2^3", F3))
    assert not v.universal and v.witness == R("t^2", F3)
    assert is_universal(P("X1")).universal


def test_represent_examples():
    Pm = P("X1^2 + (t)*X2^2")
    assert represent(Pm, R("t + 1")) == [F2.one, F2.one]
    assert represent(Pm, F2.zero) == [F2.zero, F2.zero]
    assert represent(Pm, R("t^2 + t")) == [F2.gen(0), F2.one]


def test_find_unrepresented_examples():
    t = F2.gen(0)
    assert find_unrepresented(P("X1^2")) == t
    assert find_unrepresented(P("X1^3 + (t)*X2^3", F3)) == R("t^2", F3)
    assert find_unrepresented(P("X1^4")) == t


def _in_image_by_expansion(Pm, a):
    """Independent check for one-variable P = c X^(p^d): a in c k^(p^d)."""
    ((_, d), c), = Pm.terms.items()
    ex = p_basis_expand(a / c, d)
    return all(not ex[f] for f in ex.support() if any(f))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)"]), st.integers(0, 10**6))
def test_unrepresented_one_variable_oracle(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    Pm = PPoly(ctx, 1, {(0, rng.randint(1, 2)): rand_coeff(ctx, rng, 2)})
    a = find_unrepresented(Pm)
    assert not _in_image_by_expansion(Pm, a)
    assert inconsistency_functional(Pm, a) is not None
    y, _ = inconsistency_functional(Pm, a)
    assert check_inconsistency(Pm, a, y)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)", "F2(t,u)"]), st.integers(0, 10**6))
def test_represent_and_functional_properties(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    Pm = rand_mono(ctx, rng, rng.randint(1, 4), 2)
    if principal_zero(Pm) is not None:
        return
    v = is_universal(Pm)
    assert phi_value(Pm) <= 1
    assert (phi_value(Pm) == 1) == v.universal
    a = rand_coeff(ctx, rng, 3)
    if v.universal:
        assert Pm.eval(represent(Pm, a)) == a
    else:
        w = find_unrepresented(Pm)
        with pytest.raises(PreconditionError):
            represent(Pm, w)
        y, _ = inconsistency_functional(Pm, w)
        assert check_inconsistency(Pm, w, y)


def test_zero_polynomial_verdict():
    v = is_universal(PPoly.zero(F2, 2))
    assert not v.universal and v.witness == F2.one


# ---------------------------------------------------------------- classify

@pytest.mark.parametrize("p,perm", [(2, True), (3, False), (5, False)])
def test_classify_W(p, perm):
    ctx = parse_field(f"F{p}(t)")
    c = classify(example_W(ctx).equation)
    assert c.permawound is perm
    assert c.separable and c.reduced


def test_classify_E():
    c = classify(example_E(F3).equation)
    assert c.reduced and c.principal_zero is None
    assert c.semiwound is True


def test_classify_refuses_to_guess():
    c = classify(P("X1^2 + (t)*X2^2"))
    assert c.permawound is None
    assert c.quasi_weakly_permawound is True
    c = classify(P("X1 + X1^2 + X2^2"))
    assert not c.reduced and c.permawound is None and c.reduced_form is not None
    with pytest.raises(PreconditionError):
        classify(PPoly.zero(F2, 1))


def test_weakly_permawound_by_filtration():
    assert weakly_permawound_by_filtration([P("X1^2 + (t)*X2^2"), P("X1")]) is True
    assert weakly_permawound_by_filtration([P("X1^2")]) is None
    with pytest.raises(PreconditionError):
        weakly_permawound_by_filtration([P("X1^2 + X2^2")])


# ---------------------------------------------------------------- completion

def test_completion_examples():
    comp = complete_to_universal(P("X1^4"))
    assert comp.steps == 3
    assert comp.total == P("X1^4 + (t)*X2^4 + (t^2)*X3^4 + (t^3)*X4^4")
    assert complete_to_universal(P("X1^2 + (t)*X2^2")).steps == 0
    comp = complete_to_universal(P("X1^3 + (t)*X2^3", F3))
    assert comp.total == P("X1^3 + (t)*X2^3 - (t^2)*X3^3", F3)


def test_ubiquity_examples():
    u = ubiquity_embed(P("X1 + X1^3 + (t)*X2^3", F3))
    assert u.W == P("X1 + X1^3 + (t)*X2^3 - (t^2)*X3^3", F3)
    assert u.projection == [2]
    assert classify(u.W).permawound is True
    u = ubiquity_embed(P("X1 + X1^2 + (t)*X2^2"))
    assert u.projection == [] and u.W == P("X1 + X1^2 + (t)*X2^2")
    u = ubiquity_embed(P("X1 + X1^4"))
    assert u.W == P("X1 + X1^4 + (t)*X2^4 + (t^2)*X3^4 + (t^3)*X4^4")
    assert u.projection == [1, 2, 3]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)", "F2(t,u)"]), st.integers(0, 10**6))
def test_completion_properties(field, seed):
    ctx = parse_field(field)
    rng = random.Random(seed)
    Pm = rand_mono(ctx, rng, rng.randint(1, 3), 2)
    if principal_zero(Pm) is not None:
        return
    comp = complete_to_universal(Pm)
    c = classify(comp.total)
    assert c.reduced and c.principal_universal
    N = max(Pm.degree(i) for i in Pm.variables())
    assert comp.steps == (1 - phi_value(Pm)) * ctx.p ** (ctx.r * N)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)"]), st.integers(0, 10**6))
def test_ubiquity_recovers_F(field, seed):
    ctx = parse_field(field)
    F = rand_reduced_separable(ctx, random.Random(seed), 2, 2)
    if F is None:
        return
    u = ubiquity_embed(F)
    assert u.W.specialize_zero(range(F.nvars)) == F


# ---------------------------------------------------------------- standard groups

def test_standard_V_examples():
    g = standard_V(F2)
    assert g.display() == "X0^2 + (t)*X1^2 - X0"
    g3 = standard_V(F3)
    assert g3.equation == P("X0^3 + (t)*X1^3 + (t^2)*X2^3 - X0", F3, first=0)
    F2tu = parse_field("F2(t,u)")
    g4 = standard_V(F2tu)
    coeffs = {c for (_, j), c in g4.equation.terms.items() if j == 1}
    t, u = F2tu.gen(0), F2tu.gen(1)
    assert coeffs == {F2tu.one, t, u, t * u}


@pytest.mark.parametrize("field", ["F2(t)", "F3(t)", "F2(t,u)"])
def test_standard_V_is_permawound(field):
    ctx = parse_field(field)
    E = standard_V(ctx).equation
    assert E.is_separable()
    assert classify(E).permawound is True


def test_weil_alpha_p_examples():
    (b,) = weil_restrict_alpha_p(F2, 1)
    assert b.equation == P("X0^2 + (t)*X1^2", first=0)
    assert not b.equation.is_separable()
    assert is_universal(b.equation).universal
    assert len(weil_restrict_alpha_p(F2, 2)) == 2
    (b9,) = weil_restrict_alpha_p(parse_field("F3(t,u)"), 1)
    assert b9.equation.nvars == 9 and len(b9.equation.terms) == 9


def test_gm_quotient():
    g = weil_restrict_gm_quotient(F3)
    assert g.display() == "X0^3 + (t)*X1^3 + (t^2)*X2^3 - X2"


# ---------------------------------------------------------------- changes of variables

def test_verify_VPL_trivial():
    Pm = standard_P(F3)
    L = PPoly.var(F3, 3, 0, 0, -F3.one)
    ident = AdditiveSubst.identity(F3, 3)
    assert verify_VPL_change_of_vars((Pm, L), (Pm, L), F3.one, ident)
    z = F3.zero
    singular = linear_subst(F3, [[F3.one, z, z], [F3.one, z, z], [z, z, F3.one]])
    assert not verify_VPL_change_of_vars((Pm, L), (Pm, L), F3.one, singular)


def test_find_VPL_scalar():
    Pm = standard_P(F3)
    L1 = PPoly.var(F3, 3, 0, 0, -F3.one)
    L2 = PPoly.var(F3, 3, 0, 0, F3.integer(-2))
    res = find_VPL_change_of_vars(Pm, L1, L2)
    assert res.found and res.ext_degree == 2
    big = res.ctx
    src = (base_change_constants(Pm, 2), base_change_constants(L1, 2))
    tgt = (base_change_constants(Pm, 2), base_change_constants(L2, 2))
    assert verify_VPL_change_of_vars(src, tgt, res.c, res.sigma)
    assert big.F.q == 9


# ---------------------------------------------------------------- stability

@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["F2(t)", "F3(t)"]), st.integers(0, 10**6))
def test_stability_under_constant_extension(field, seed):
    ctx = parse_field(field)
    Pm = rand_mono(ctx, random.Random(seed), 2, 2, phi_cap=False)
    assert stable_under_extension(Pm, 2)
