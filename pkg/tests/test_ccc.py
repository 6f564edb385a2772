from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_ccc.catalog import CATALOG, P1, P2, SMOOTH_COMPLETE
from toric_ccc.ccc import (COSTANDARD, STANDARD, UnsupportedDivisorError, convolve, dictionary, hom_dim,
                           lambda_bar_contains, lambda_pm, lambda_sigma_contains, skeleton_containment)
from toric_ccc.fan import FanError
from toric_ccc.linebundle import NotAmpleError, TDivisor, is_nef, lattice_points, polytope_of
from toric_ccc.verify import ample_in_box


def D(f, *c):
    return TDivisor(f, c)


def test_membership_examples():
    ok, w = lambda_sigma_contains(P1, (Fr(1, 2),), (0,))
    assert ok and w.cone.dim == 0
    assert not lambda_sigma_contains(P1, (Fr(1, 2),), (1,))[0]
    ok, w = lambda_sigma_contains(P1, (3,), (-7,))
    assert ok and w.cone.generators == ((1,),) and w.chi == (3,)


def test_lambda_bar_examples():
    assert lambda_bar_contains(P1, (Fr(1, 2),), (0,))
    assert lambda_bar_contains(P1, (0,), (5,))
    assert not lambda_bar_contains(P1, (Fr(1, 4),), (-2,))


def test_p2_membership():
    # -y in the interior of a maximal cone forces x integral
    assert lambda_sigma_contains(P2, (2, -1), (-1, -3))[0]
    assert not lambda_sigma_contains(P2, (Fr(1, 2), 0), (-1, -3))[0]
    # -y on the ray (1,0): only <x, (1,0)> must be integral
    assert lambda_sigma_contains(P2, (4, Fr(1, 3)), (-2, 0))[0]
    assert not lambda_sigma_contains(P2, (Fr(1, 3), 4), (-2, 0))[0]


rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)
pts2 = st.tuples(rat, rat)


@pytest.mark.parametrize("name", SMOOTH_COMPLETE + ("nonsmooth",))
@given(data=st.data())
def test_skeleton_properties(name, data):
    f = CATALOG[name]
    vec = st.tuples(*[rat] * f.dim)
    x, y = data.draw(vec), data.draw(vec)
    assert lambda_sigma_contains(f, x, (0,) * f.dim)[0]
    t = data.draw(st.fractions(min_value=Fr(1, 6), max_value=10, max_denominator=6))
    inside = lambda_sigma_contains(f, x, y)[0]
    assert lambda_sigma_contains(f, x, tuple(t * v for v in y))[0] == inside
    chi = data.draw(st.tuples(*[st.integers(-5, 5)] * f.dim))
    assert lambda_sigma_contains(f, tuple(a + b for a, b in zip(x, chi)), y)[0] == inside
    assert lambda_bar_contains(f, x, y) == inside


def test_lambda_pm_p1():
    d = D(P1, 1, 0)
    plus = {s.source_cone.generators: s for s in lambda_pm(d, 1)}
    assert plus[()].base.interval() == (0, 1) and plus[()].cone_part == ()
    assert plus[((1,),)].base.interval() == (0, 0) and plus[((1,),)].cone_part == ((-1,),)
    assert plus[((-1,),)].base.interval() == (1, 1) and plus[((-1,),)].cone_part == ((1,),)
    minus = {s.source_cone.generators: s for s in lambda_pm(d, -1)}
    assert minus[()].base.interval() == (-1, 0)
    assert minus[((1,),)].base.interval() == (0, 0)
    assert minus[((-1,),)].base.interval() == (-1, -1)


def test_lambda_pm_rejects():
    with pytest.raises(NotAmpleError):
        lambda_pm(D(P1, 0, 0), 1)
    with pytest.raises(ValueError):
        lambda_pm(D(P1, 1, 0), 2)


def test_skeleton_containment_examples():
    assert skeleton_containment(D(P1, 1, 0))
    assert skeleton_containment(D(P2, 0, 0, 1))
    assert not skeleton_containment(D(P1, 1, 0).scaled(Fr(1, 2)))
    assert not skeleton_containment(D(P1, 1, 1).scaled(Fr(1, 2)))


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_skeleton_containment_catalog(name):
    f = CATALOG[name]
    for d in ample_in_box(f, 3 if f.dim == 1 else 2):
        assert skeleton_containment(d)


def test_strata_points_lie_in_skeleton():
    d = D(P2, 1, 0, 1)
    for sign in (1, -1):
        for s in lambda_pm(d, sign):
            x = s.base.vertices[0]
            y = tuple(sum(g[i] for g in s.cone_part) for i in range(2)) if s.cone_part else (0, 0)
            assert s.contains(x, y)
            assert lambda_sigma_contains(P2, x, y)[0]


def test_dictionary_fig1():
    assert dictionary(D(P1, 1, 0)).sheaf.describe() == "costandard on (0,1)"
    assert dictionary(D(P1, 0, 1)).sheaf.describe() == "costandard on (-1,0)"
    e = dictionary(D(P1, -2, 0))
    assert e.sheaf.kind == STANDARD and e.sheaf.support.interval() == (-2, 0)


def test_dictionary_rejects_non_ample():
    with pytest.raises(UnsupportedDivisorError):
        dictionary(D(P1, 0, 0))
    with pytest.raises(UnsupportedDivisorError):
        dictionary(D(CATALOG["P1xP1"], 1, 0, -1, 0))


def test_hom_examples():
    a = dictionary(D(P1, 1, 0))
    assert hom_dim(a, a) == (1, 0)
    assert hom_dim(a, dictionary(D(P1, 2, 1))) == (3, 0)
    with pytest.raises(FanError):
        hom_dim(a, dictionary(D(P2, 0, 0, 1)))


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_hom_degree_zero_counts_points(name):
    amples = ample_in_box(CATALOG[name], 1)
    for a in amples:
        for b in amples:
            diff = b - a
            if is_nef(diff) and not polytope_of(diff).is_empty:
                h = hom_dim(dictionary(a), dictionary(b))
                assert h[0] == len(lattice_points(polytope_of(diff)))


def test_convolve_examples():
    p0, pinf = dictionary(D(P1, 1, 0)), dictionary(D(P1, 0, 1))
    e = convolve(p0, pinf)
    assert e.sheaf.support.interval() == (-1, 1) and e == dictionary(D(P1, 1, 1))
    assert convolve(p0, p0).sheaf.describe() == "costandard on (0,2)"
    h = dictionary(D(P2, 0, 0, 1))
    assert convolve(h, h) == dictionary(D(P2, 0, 0, 2))


def test_convolve_rejects_standard():
    with pytest.raises(UnsupportedDivisorError):
        convolve(dictionary(D(P1, -1, 0)), dictionary(D(P1, 1, 0)))


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_convolve_is_tensor(name):
    amples = ample_in_box(CATALOG[name], 1)
    for a in amples[:6]:
        for b in amples[:6]:
            e = convolve(dictionary(a), dictionary(b))
            assert e == dictionary(a + b)
            assert e.sheaf.kind == COSTANDARD
