from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_ccc import lattice as la

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
vec3 = st.lists(fracs, min_size=3, max_size=3).map(tuple)


def test_pairing_examples():
    assert la.pairing((1, 0), (0, 1)) == 0
    assert la.pairing((1, 1), (2, 3)) == 5
    assert la.pairing((0, 0), (Fraction(7, 3), -4)) == 0


def test_pairing_dimension_mismatch():
    with pytest.raises(la.DimensionError):
        la.pairing((1, 2), (1, 2, 3))


@given(fracs, fracs, vec3, vec3, vec3)
def test_pairing_bilinear(a, b, m, m2, y):
    lhs = la.pairing(la.add(la.scale(a, m), la.scale(b, m2)), y)
    assert lhs == a * la.pairing(m, y) + b * la.pairing(m2, y)
    assert la.pairing(m, la.add(la.scale(a, y), m2)) == a * la.pairing(m, y) + la.pairing(m, m2)


def test_unimodular_examples():
    assert la.unimodular_test([(1, 0), (0, 1)])
    assert not la.unimodular_test([(1, 0), (-1, -2)])
    assert la.unimodular_test([(0, 1), (-1, 1)])


def test_reduced_cohomology_examples():
    empty = la.SimplicialComplex.from_faces([])
    assert la.reduced_cohomology(empty) == [1]
    two_points = la.SimplicialComplex.generated_by([(0,), (1,)])
    assert la.reduced_cohomology(two_points) == [0, 1]
    triangle = la.SimplicialComplex.generated_by([(0, 1), (1, 2), (0, 2)])
    assert la.reduced_cohomology(triangle) == [0, 0, 1]


@given(st.integers(min_value=0, max_value=5))
def test_full_simplex_is_acyclic(k):
    simplex = la.SimplicialComplex.generated_by([tuple(range(k + 1))])
    assert not any(la.reduced_cohomology(simplex))


complexes = st.lists(
    st.lists(st.integers(0, 5), min_size=1, max_size=4, unique=True), min_size=1, max_size=6)


@given(complexes)
def test_euler_characteristic(facets):
    cx = la.SimplicialComplex.generated_by(facets)
    red = la.reduced_cohomology(cx)
    # red[k] = H~^{k-1}, f[k] counts faces of dimension k-1
    alt_red = sum((-1) ** (k - 1) * h for k, h in enumerate(red))
    alt_faces = sum((-1) ** (k - 1) * c for k, c in enumerate(cx.f_vector()))
    assert alt_red == alt_faces


def test_missing_subface_rejected():
    with pytest.raises(ValueError):
        la.SimplicialComplex.from_faces([(0, 1)])


small = st.integers(-6, 6)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_integer_kernel(rows):
    ker = la.integer_kernel(rows, 3)
    assert len(ker) == 3 - la.rank(rows)
    for v in ker:
        assert all(la.pairing(r, v) == 0 for r in rows)
    # saturation: every maximal minor has gcd 1
    if ker:
        from math import gcd
        g = 0
        for cols in combinations(range(3), len(ker)):
            g = gcd(g, abs(int(la.det([[v[j] for j in cols] for v in ker]))))
        assert g == 1


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(small, min_size=2, max_size=2))
def test_solve_integer(A, x):
    b = la.mat_vec(A, x)
    sol = la.solve_integer(A, b)
    assert sol is not None
    assert la.mat_vec(A, sol) == b


def test_solve_integer_no_solution():
    assert la.solve_integer([[2, 0], [0, 2]], (1, 0)) is None


def test_primitive():
    assert la.primitive((Fraction(1, 2), Fraction(3, 4))) == (2, 3)
    assert la.primitive((-4, 6)) == (-2, 3)
    with pytest.raises(ValueError):
        la.primitive((0, 0))
