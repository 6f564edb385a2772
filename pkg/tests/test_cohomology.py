import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_ccc.catalog import CATALOG, P1, P2, RAY, SMOOTH_COMPLETE
from toric_ccc.cohomology import (cech_weight_oracle, cohomology_table, ext_dims, formula_matches_oracle,
                                  weight_cohomology)
from toric_ccc.fan import FanError
from toric_ccc.linebundle import TDivisor, lattice_points, polytope_of
from toric_ccc.verify import ample_in_box, divisors_in_box


def D(f, *c):
    return TDivisor(f, c)


def test_weight_examples():
    assert weight_cohomology(D(P1, -2, 0), (-1,)).dims == (0, 1)
    assert weight_cohomology(D(P2, 0, 0, 0), (0, 0)).dims == (1, 0, 0)
    d = D(P2, 1, 2, 0)
    for m in lattice_points(polytope_of(d)):
        assert weight_cohomology(d, m).dims == (1, 0, 0)


def test_cech_examples():
    assert cech_weight_oracle(D(P1, 1, 1), (0,)).dims == (1, 0)
    assert cech_weight_oracle(D(P1, -2, 0), (-1,)).dims == (0, 1)
    assert cech_weight_oracle(D(P2, 0, 0, -3), (-1, -1)).dims == (0, 0, 1)


def test_table_examples():
    t = cohomology_table(D(P2, 0, 0, 1))
    assert t.totals == (3, 0, 0) and t.euler == 3
    t = cohomology_table(D(P1, -2, 0))
    assert t.totals == (0, 1) and t.euler == -1


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_structure_sheaf(name):
    f = CATALOG[name]
    assert cohomology_table(TDivisor(f, (0,) * f.n_rays)).totals == (1,) + (0,) * f.dim


def test_incomplete_fan_rejected():
    with pytest.raises(FanError):
        cohomology_table(D(RAY, 1))


def test_ext_examples():
    assert ext_dims(D(P1, 0, 0), D(P1, 1, 1)) == (3, 0)
    assert ext_dims(D(P2, 1, 0, 2), D(P2, 1, 0, 2)) == (1, 0, 0)
    assert ext_dims(D(P1, 1, 0), D(P1, -1, 0)) == (0, 1)


@pytest.mark.parametrize("name", ["P1", "P2"])
def test_formula_equals_oracle(name):
    for d in divisors_in_box(CATALOG[name], 2):
        assert formula_matches_oracle(d)[0]


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_ample_vanishing(name):
    for d in ample_in_box(CATALOG[name], 2 if CATALOG[name].dim == 1 else 1):
        t = cohomology_table(d)
        assert t.totals[0] == len(lattice_points(polytope_of(d)))
        assert not any(t.totals[1:])


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_serre_duality(name):
    f = CATALOG[name]
    k = TDivisor(f, (-1,) * f.n_rays)
    for d in divisors_in_box(f, 1):
        h = cohomology_table(d).totals
        assert cohomology_table(k - d).totals == h[::-1]


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_p1_riemann_roch(a, b):
    t = cohomology_table(D(P1, a, b))
    assert t.euler == a + b + 1
    if a + b >= -1:
        assert t.totals == (a + b + 1, 0)


def test_character_matches_weights():
    t = cohomology_table(D(P2, 0, 0, 2))
    ch = t.character()
    assert sum(ch.values()) == t.euler == 6
    assert abs(t.evaluate_character((1, 1)) - 6) < 1e-12
