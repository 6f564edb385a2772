from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_ccc.catalog import CATALOG, F1, NONSMOOTH, P1, P2, RAY, SMOOTH_COMPLETE
from toric_ccc.cohomology import cohomology_table
from toric_ccc.ktheory import (Character, KClass, NotProjectiveError, ample_basis, atiyah_bott_character,
                               atiyah_bott_chi, class_of, fixed_point_weights, fingerprint, in_window,
                               random_class, relation_class, rewrite_to_window)
from toric_ccc.linebundle import TDivisor, is_ample


@pytest.fixture(scope="module", params=SMOOTH_COMPLETE)
def weights(request):
    return fixed_point_weights(ample_basis(CATALOG[request.param]))


def test_character_ring():
    a = Character.monomial((1, 0), 2)
    b = Character.monomial((0, -1)) - Character.one(2)
    assert (a * b).terms == {(1, -1): 2, (1, 0): -2}
    assert (a - a).is_zero()
    assert a * 3 == Character.monomial((1, 0), 6)
    assert Character.monomial((2, -3)).inverse_monomial() == Character.monomial((-2, 3))
    with pytest.raises(ValueError):
        (a + Character.one(2)).inverse_monomial()


def test_ample_basis_p1():
    basis = ample_basis(P1)
    assert {d.coeffs for d in basis} == {(1, 0), (0, 1)}
    assert basis.shifts == (0, 0)


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_ample_basis_is_a_basis(name):
    basis = ample_basis(CATALOG[name])
    assert all(is_ample(d) for d in basis)
    det = round(np.linalg.det(np.array(basis.matrix, dtype=float)))
    assert abs(det) == 1


def test_ample_basis_f1_needs_shift():
    basis = ample_basis(F1)
    assert not is_ample(TDivisor(F1, (0, 1, 0, 0)))
    assert any(k >= 1 for k in basis.shifts[1:])


def test_ample_basis_rejects():
    for f in (RAY, NONSMOOTH):
        with pytest.raises(NotProjectiveError):
            ample_basis(f)


def test_p1_weights():
    basis = ample_basis(P1)
    w = fixed_point_weights(basis)
    i = [d.coeffs for d in basis].index((0, 1))
    assert w.u[i] == ((0,), (-1,))


def test_weights_additive(weights):
    basis = weights.basis
    a, b = basis[0], basis[-1]
    ab = fixed_point_weights(type(basis)(basis.fan, (a + b,), (0,)))
    assert ab.u[0] == tuple(tuple(x + y for x, y in zip(p, q))
                            for p, q in zip(weights.u[0], weights.u[-1]))


def test_trivial_fingerprint(weights):
    one = KClass.one(weights.n, weights.r)
    assert fingerprint(one, weights) == (Character.one(weights.n),) * weights.v
    zero_class = class_of(TDivisor(weights.fan, (0,) * weights.fan.n_rays), weights.basis)
    assert fingerprint(zero_class, weights) == (Character.one(weights.n),) * weights.v


def test_fingerprint_of_basis_element(weights):
    for i, L in enumerate(weights.basis):
        fp = fingerprint(class_of(L, weights.basis), weights)
        assert fp == tuple(Character.monomial(u) for u in weights.u[i])


def test_fingerprint_homomorphism(weights):
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = random_class(weights, rng, n_terms=3, low=-1, high=2)
        b = random_class(weights, rng, n_terms=3, low=-1, high=2)
        fa, fb = fingerprint(a, weights), fingerprint(b, weights)
        assert fingerprint(a * b, weights) == tuple(x * y for x, y in zip(fa, fb))
        assert fingerprint(a + b, weights) == tuple(x + y for x, y in zip(fa, fb))


def test_relations_vanish(weights):
    zero = (Character(weights.n),) * weights.v
    for i in range(weights.r):
        rel = relation_class(i, weights)
        assert fingerprint(rel, weights) == zero


def test_p1_relation_shape():
    w = fixed_point_weights(ample_basis(P1))
    rel = relation_class(0, w)
    assert sorted(e[0] for e in rel.exponents()) == [0, 1, 2]


def test_p2_relation_shape():
    w = fixed_point_weights(ample_basis(P2))
    for i in range(3):
        rel = relation_class(i, w)
        assert sorted(e[i] for e in rel.exponents()) == [0, 1, 2, 3]
        # 2^3 monomials: binom(3, k) of them in degree k, sign (-1)^(3-k)
        for e, ch in rel.terms.items():
            k = e[i]
            assert len(ch.terms) == (1, 3, 3, 1)[k]
            assert all(c == (-1) ** (3 - k) for c in ch.terms.values())


def test_p1_rewrite_of_one():
    w = fixed_point_weights(ample_basis(P1))
    one = KClass.one(1, 2)
    out = rewrite_to_window(one, w)
    assert in_window(out, 2)
    assert fingerprint(out, w) == fingerprint(one, w)


def test_window_class_unchanged(weights):
    rng = np.random.default_rng(5)
    k = random_class(weights, rng, low=1, high=weights.v)
    assert rewrite_to_window(k, weights) == k


def test_random_rewrites(weights):
    rng = np.random.default_rng(20240917)
    for _ in range(20):
        k = random_class(weights, rng)
        out = rewrite_to_window(k, weights)
        assert in_window(out, weights.v)
        assert fingerprint(out, weights) == fingerprint(k, weights)


@pytest.mark.parametrize("name", ["P1", "P2"])
def test_no_fingerprint_collisions(name):
    w = fixed_point_weights(ample_basis(CATALOG[name]))
    seen = {}
    for e in product(range(3), repeat=w.r):
        fp = fingerprint(KClass.monomial(e, Character.one(w.n)), w)
        assert fp not in seen
        seen[fp] = e


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_p1_atiyah_bott(a, b):
    basis = ample_basis(P1)
    w = fixed_point_weights(basis)
    d = TDivisor(P1, (a, b))
    fp = fingerprint(class_of(d, basis), w)
    table = cohomology_table(d)
    assert abs(atiyah_bott_chi(fp, P1) - table.euler) < 1e-9
    if a + b >= -1:
        assert table.euler == a + b + 1
    t = [np.exp(1j * 0.7312)]
    assert abs(atiyah_bott_character(fp, P1, t) - table.evaluate_character(t)) < 1e-6


def test_p2_atiyah_bott_character():
    basis = ample_basis(P2)
    w = fixed_point_weights(basis)
    rng = np.random.default_rng(2)
    for c in [(0, 0, 2), (1, -1, 0), (0, 0, -4), (-1, -1, -1)]:
        d = TDivisor(P2, c)
        fp = fingerprint(class_of(d, basis), w)
        table = cohomology_table(d)
        t = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2))
        assert abs(atiyah_bott_character(fp, P2, t) - table.evaluate_character(t)) < 1e-6
        assert abs(atiyah_bott_chi(fp, P2) - table.euler) < 1e-6
