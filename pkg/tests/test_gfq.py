import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padditive import _kernels
from padditive.gfq import GF, is_prime, least_irreducible, parse_field_size

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (7, 1)]


@st.composite
def field_and_elems(draw, k=3):
    p, e = draw(st.sampled_from(FIELDS))
    F = GF(p, e)
    return (F,) + tuple(draw(st.integers(0, F.q - 1)) for _ in range(k))


@given(field_and_elems())
def test_field_axioms(data):
    F, a, b, c = data
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@given(field_and_elems(1))
def test_frobenius_is_additive_and_inverted_by_root(data):
    F, a = data
    b = (a * 7 + 1) % F.q
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    assert F.pth_root(F.frobenius(a)) == a
    assert F.frobenius(a, F.e) == a


@pytest.mark.parametrize("p,e", FIELDS)
def test_multiplicative_group_cyclic(p, e):
    F = GF(p, e)
    gen = int(F.exp[1])
    seen = {F.pow(gen, k) for k in range(F.q - 1)}
    assert seen == set(range(1, F.q))


def test_spec_examples():
    F4 = GF(2, 2)
    g = F4.g
    assert F4.frobenius(g, 1) == F4.mul(g, g)
    F9 = GF(3, 2)
    for x in range(9):
        assert F9.frobenius(x, 2) == x
    assert GF(3).pth_root(2) == 2


def test_least_irreducible_and_sizes():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert parse_field_size(9) == (3, 2)
    assert is_prime(13) and not is_prime(15)
    with pytest.raises(ValueError):
        parse_field_size(6)


@pytest.mark.parametrize("p,e", FIELDS)
def test_artin_schreier_image_index_p(p, e):
    F = GF(p, e)
    image = {F.sub(F.pow(x, p), x) for x in range(F.q)}
    mask, pre = F.as_table()
    assert {int(v) for v in np.nonzero(mask)[0]} == image
    assert len(image) == F.q // p
    for v in image:
        y = F.artin_schreier_preimage(v)
        assert F.sub(F.pow(y, p), y) == v
    missing = [v for v in range(F.q) if v not in image]
    assert all(F.artin_schreier_preimage(v) is None for v in missing)


def test_trace_kills_exactly_the_as_image():
    for p, e in FIELDS:
        F = GF(p, e)
        image = {F.sub(F.pow(x, p), x) for x in range(F.q)}
        assert {x for x in range(F.q) if F.trace(x) == 0} == image


def test_embedding_is_a_ring_map():
    small, big = GF(2, 1), GF(2, 2)
    emb = small.embedding_into(big)
    for a in range(2):
        for b in range(2):
            assert emb[small.mul(a, b)] == big.mul(emb[a], emb[b])
            assert emb[small.add(a, b)] == big.add(emb[a], emb[b])
    small, big = GF(2, 2), GF(2, 4)
    emb = small.embedding_into(big)
    for a in range(4):
        for b in range(4):
            assert emb[small.mul(a, b)] == big.mul(emb[a], emb[b])


# ---------------------------------------------------------------- kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _both(name):
    return _kernels.kernel(name, "numba"), _kernels.kernel(name, "numpy")


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**31))
def test_kernels_backends_agree(pe, seed):
    F = GF(*pe)
    rng = np.random.default_rng(seed)
    a = rng.integers(0, F.q, 50).astype(np.int64)
    b = rng.integers(0, F.q, 50).astype(np.int64)
    args = (F.exp, F.log, F.q - 1)
    for name, call in [("add_vec", lambda k: k(a, b, F.p, F.e)),
                       ("mul_vec", lambda k: k(a, b, *args)),
                       ("pow_vec", lambda k: k(a, 5, *args)),
                       ("conv", lambda k: k(a[:9], b[:7], F.p, F.e, *args))]:
        nb, npy = _both(name)
        assert np.array_equal(call(nb), call(npy)), name
    m1, p1 = _both("as_image")[0](F.q, F.p, F.e, F.exp, F.log)
    m2, p2 = _both("as_image")[1](F.q, F.p, F.e, F.exp, F.log)
    assert np.array_equal(m1, m2) and np.array_equal(p1, p2)
    bb = b[:6].copy()
    bb[-1] = bb[-1] or 1
    q1, r1 = _both("divmod")[0](a[:20], bb, F.p, F.e, *args)
    q2, r2 = _both("divmod")[1](a[:20], bb, F.p, F.e, *args)
    assert np.array_equal(q1, q2) and np.array_equal(r1, r2)
    g1 = _both("gcd")[0](a[:12], b[:9], F.p, F.e, *args)
    g2 = _both("gcd")[1](a[:12], b[:9], F.p, F.e, *args)
    assert np.array_equal(g1, g2)


@needs_numba
@pytest.mark.parametrize("p,e", [(2, 2), (3, 1), (5, 1)])
def test_grid_zero_backends_agree(p, e):
    F = GF(p, e)
    coeffs = np.array([1, F.g], dtype=np.int64)
    pows = np.array([p, 1], dtype=np.int64)
    args = (coeffs, pows, F.q, F.p, F.e, F.exp, F.log)
    z1, z2 = _both("grid_zero")[0](*args), _both("grid_zero")[1](*args)
    assert np.array_equal(z1, z2)
    x = [int(v) for v in z1]
    assert F.add(F.pow(x[0], p), F.mul(F.g, x[1])) == 0 and any(x)


def test_dense_conv_matches_schoolbook():
    F = GF(3, 2)
    rng = np.random.default_rng(1)
    a = rng.integers(0, 9, 8)
    b = rng.integers(0, 9, 5)
    want = [0] * 12
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            want[i + j] = F.add(want[i + j], F.mul(int(x), int(y)))
    got = _kernels.kernel("conv")(a.astype(np.int64), b.astype(np.int64),
                                  F.p, F.e, F.exp, F.log, F.q - 1)
    assert [int(v) for v in got] == want
