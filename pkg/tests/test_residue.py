import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padditive.errors import PreconditionError
from padditive.gfq import GF
from padditive.parse import parse_field, parse_ratfunc
from padditive.residue import (SparseLaurent, check_witness, eval_F_laurent, h1_witness,
                               random_laurent, residue)


def L1(F, terms):
    return SparseLaurent(F, 1, {(e,): c for e, c in terms.items()})


def test_residue_examples():
    F2, F5 = GF(2), GF(5)
    assert residue(L1(F2, {-1: 1})) == 1
    assert residue(L1(F2, {0: 1, 2: 1})) == 0
    assert residue(SparseLaurent(F5, 2, {(-1, -1): 3})) == 3


def test_eval_examples():
    F2 = GF(2)
    wit = h1_witness(F2, 1, [1])
    F = wit.F
    assert not eval_F_laurent(F, [SparseLaurent(F2, 1)] * F.nvars)
    out = eval_F_laurent(F, [SparseLaurent(F2, 1), L1(F2, {-1: 1})])
    assert out == L1(F2, {-2: 1})
    for a in range(2):
        out = eval_F_laurent(F, [SparseLaurent(F2, 1), L1(F2, {-1: a})])
        assert residue(out) == F2.sub(F2.pow(a, 2), a)


def test_witness_examples():
    w = h1_witness(GF(2), 1, [1])
    assert w.beta == 1 and w.w.render() == "t^-1"
    F3 = GF(3)
    w3 = h1_witness(F3, 1, [0])
    assert w3.w.terms == {(-1,): w3.beta} and F3.trace(w3.beta) != 0
    w22 = h1_witness(GF(2), 2, [0, 1])
    assert w22.w.render() == "t1^-1*t2^-1"


def test_witness_from_ratfunc_roundtrip():
    ctx = parse_field("F3(t)")
    x = SparseLaurent.from_ratfunc(parse_ratfunc("2/t + t^2", ctx))
    assert x.terms == {(-1,): 2, (2,): 1}
    with pytest.raises(PreconditionError):
        SparseLaurent.from_ratfunc(parse_ratfunc("1/(t+1)", ctx))


def test_check_witness():
    w = h1_witness(GF(2), 1)
    rep = check_witness(w, 10_000)
    assert rep.ok and rep.passed == 10_000 and rep.witness_residue == 1
    assert check_witness(w, 0).ok
    bad = replace(w, beta=0, w=SparseLaurent(GF(2), 1, {}))
    assert not check_witness(bad, 10).ok


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (4, 1)]), st.integers(0, 10**6))
def test_residue_properties(pr, seed):
    q, r = pr
    F = GF(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
    rng = random.Random(seed)
    x, y = random_laurent(F, r, rng), random_laurent(F, r, rng)
    assert residue(x + y) == F.add(residue(x), residue(y))
    wit = h1_witness(F, r)
    image = {F.sub(F.pow(v, F.p), v) for v in range(F.q)}
    alpha = [random_laurent(F, r, rng) for _ in range(wit.F.nvars)]
    res = residue(eval_F_laurent(wit.F, alpha))
    a = alpha[wit.special].coeff((-1,) * r)
    assert res in image and res == F.sub(F.pow(a, F.p), a)
    assert residue(wit.w) not in image


def test_laurent_arithmetic():
    F = GF(3)
    x = L1(F, {-1: 1, 2: 2})
    y = L1(F, {1: 1})
    assert x * y == L1(F, {0: 1, 3: 2})
    assert (x - x) == SparseLaurent(F, 1)
    assert x.frob() == L1(F, {-3: 1, 6: 2})
    assert x.render() == "2*t^2 + t^-1"
