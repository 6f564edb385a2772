import pytest

from toric_ccc import lattice as la
from toric_ccc.catalog import CATALOG, F1, NONSMOOTH, P1, P2, RAY, P1xP1
from toric_ccc.fan import (Cone, Fan, FanError, FanMorphism, NonSimplicialError, NotPointedError,
                           check_fan_map, dual_cone, is_complete, is_smooth, orbit_data, perp_space)
from toric_ccc.verify import EXPECTED_FLAGS, completeness_oracle, smoothness_oracle


def test_dual_cone_examples():
    assert dual_cone(Cone(((1,),))) == [(1,)]
    assert dual_cone(Cone(((1, 0), (0, 1)))) == [(0, 1), (1, 0)]
    assert sorted(dual_cone(Cone(((1, 0), (1, 2))))) == [(0, 1), (2, -1)]


def test_dual_cone_brute_force():
    gens = dual_cone(Cone(((1, 0), (1, 2))))
    for u in gens:
        assert all(la.pairing(u, v) >= 0 for v in ((1, 0), (1, 2)))
    # nothing in a box pairs nonnegatively without being a nonnegative combination
    box = [(a, b) for a in range(-4, 5) for b in range(-4, 5)]
    dual = [u for u in box if la.pairing(u, (1, 0)) >= 0 and la.pairing(u, (1, 2)) >= 0]
    assert all(Cone(tuple(gens)).contains(u) for u in dual)


def test_perp_examples():
    assert perp_space(Cone.zero(2)) == [(1, 0), (0, 1)]
    assert perp_space(Cone(((1, 0),))) == [(0, 1)]
    assert [la.primitive(v) for v in perp_space(Cone(((1, 2),)))] in ([(2, -1)], [(-2, 1)])


@pytest.mark.parametrize("name", ["P2", "P1xP1", "F1", "nonsmooth"])
def test_dual_involution(name):
    f = CATALOG[name]
    for idx in f.max_cones:
        c = f.cone(idx)
        dd = dual_cone(Cone(tuple(dual_cone(c))))
        assert sorted(dd) == sorted(c.generators)


def test_dim_plus_perp_rank(catalog_fan):
    for c in catalog_fan.cones():
        assert c.dim + len(perp_space(c)) == catalog_fan.dim


def test_classification_examples():
    assert is_complete(P1) and is_complete(P2)
    assert not is_complete(RAY)
    assert is_smooth(P2) and is_smooth(F1)
    assert not is_smooth(NONSMOOTH)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_classification_matches_oracle(name):
    f = CATALOG[name]
    assert (is_complete(f), is_smooth(f)) == EXPECTED_FLAGS[name]
    assert is_complete(f) == completeness_oracle(f, samples=10_000)
    assert is_smooth(f) == smoothness_oracle(f)


def test_orbit_data():
    assert orbit_data(P2, Cone.zero(2)).orbit_dim == 2
    assert orbit_data(P2, Cone(((1, 0),))).orbit_dim == 1
    assert orbit_data(P2, P2.cone((0, 1))).orbit_dim == 0


def test_cone_not_in_fan():
    with pytest.raises(FanError):
        orbit_data(P2, Cone(((1, 1),)))


def test_fan_maps():
    ok, dual = check_fan_map(FanMorphism(P1, P1, ((1,),)))
    assert ok and dual == ((1,),)
    assert check_fan_map(FanMorphism(P1, P1xP1, ((1,), (1,))))[0]
    assert check_fan_map(FanMorphism(P1, P2, ((1,), (0,))))[0]
    assert not check_fan_map(FanMorphism(P1, P2, ((0,), (0,))))[0]


def test_fan_map_transpose():
    m = FanMorphism(P1, P1xP1, ((1,), (1,)))
    assert check_fan_map(m)[1] == ((1, 1),)


def test_invalid_fans():
    with pytest.raises(FanError):
        Fan(((1,), (1,)), ((0,), (1,)))
    with pytest.raises(FanError):
        Fan(((2,), (-1,)), ((0,), (1,)))
    with pytest.raises(FanError):
        Fan(((1,), (-1,)), ((0, 1),))
    with pytest.raises(FanError):
        Fan(((1,), (-1,)), ((0,), (5,)))
    # overlapping maximal cones violate the face condition
    with pytest.raises(FanError):
        Fan(((1, 0), (0, 1), (1, 1)), ((0, 1), (0, 2)))


def test_non_simplicial_rejected():
    with pytest.raises(NonSimplicialError):
        Fan(((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)), ((0, 1, 2, 3),))


def test_not_pointed():
    with pytest.raises(NotPointedError):
        Cone(((1,), (-1,)))


def test_rays_keep_order():
    f = Fan(((0, 1), (1, 0), (-1, -1)), ((0, 1), (1, 2), (2, 0)))
    assert f.rays == ((0, 1), (1, 0), (-1, -1))
