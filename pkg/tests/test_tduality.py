import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_ccc.catalog import P1, P2, RAY
from toric_ccc.linebundle import LatticePolytope, NotAmpleError, TDivisor
from toric_ccc.tduality import (CompactifiedPoint, NonInteriorError, asymptotic_distance, beta_apply,
                                biconjugate, facet_margins, iota, iota_limit, legendre, metric_default,
                                moment_map, nohom_scan, p1_closed_form_model, p1_gamma, sample_lagrangian,
                                section_sum_model, tameness_bounds, tdual_sample)


def D(f, *c):
    return TDivisor(f, c)


@pytest.fixture(scope="module")
def p1_model():
    return metric_default(D(P1, 1, 0))


@pytest.fixture(scope="module")
def p2_model():
    return metric_default(D(P2, 0, 0, 1))


def test_p1_gamma():
    assert p1_gamma(1, 0, 0.0) == 0.5
    for a, b in [(1, 0), (2, 1), (0, 3), (3, -1)]:
        assert abs(p1_gamma(a, b, 20.0) - a) < 1e-9
        assert abs(p1_gamma(a, b, -20.0) + b) < 1e-9
    assert np.all(p1_gamma(0, 0, np.linspace(-30, 30, 61)) == 0)


def test_moment_map_at_origin(p1_model, p2_model):
    assert abs(moment_map(p1_model, [0.0])[0] - 0.5) < 1e-15
    assert np.allclose(moment_map(p2_model, [0.0, 0.0]), [1 / 3, 1 / 3], atol=1e-15)


def test_value_at_origin(p2_model):
    # f(0) = 1/2 log #(Delta cap M)
    assert abs(p2_model.value([0.0, 0.0]) - 0.5 * math.log(3)) < 1e-15


def test_p1_models_agree_at_limits(p1_model):
    closed = p1_closed_form_model(1, 0)
    for y in (-25.0, 0.0, 25.0):
        assert abs(closed.gradient([y])[0] - p1_model.gradient([y])[0]) < 1e-9


def test_vertex_limit(p2_model):
    # along the interior of each vertex's normal cone the gradient tends to that vertex
    for direction, vertex in [((-1, -1), (0, 0)), ((2, 1), (1, 0)), ((1, 2), (0, 1))]:
        x = p2_model.gradient(20.0 * np.array(direction, dtype=float) / np.linalg.norm(direction))
        assert np.linalg.norm(x - vertex) < 1e-6


def test_metric_needs_ample():
    with pytest.raises(NotAmpleError):
        metric_default(D(P1, 0, 0))


def test_legendre_symmetric_point(p1_model):
    y, val = legendre(p1_model, [0.5])
    assert abs(y[0]) < 1e-12
    assert abs(val + 0.5 * math.log(2)) < 1e-12


def test_legendre_rejects_boundary(p1_model):
    with pytest.raises(NonInteriorError):
        legendre(p1_model, [1.0])


def test_legendre_diverges_at_vertex(p1_model):
    norms = [np.linalg.norm(legendre(p1_model, [1 - 10.0 ** -k])[0]) for k in range(1, 9)]
    assert all(a < b for a, b in zip(norms, norms[1:]))


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_legendre_round_trip_p2(a, b):
    model = metric_default(D(P2, 0, 0, 1))
    x = np.array([a, b]) * min(1.0, 0.98 / (a + b))
    y, _ = legendre(model, x)
    assert np.linalg.norm(model.gradient(y) - x) < 1e-9


def test_biconjugate_on_grid(p1_model, p2_model):
    for y in np.linspace(-5, 5, 11):
        assert abs(biconjugate(p1_model, [y]) - p1_model.value([y])) < 1e-8
    for y in [(0.0, 0.0), (3.0, -4.0), (-2.5, 1.0)]:
        assert abs(biconjugate(p2_model, y) - p2_model.value(y)) < 1e-8


def test_sample_p1(p1_model):
    s = sample_lagrangian(p1_model, 10.0, 1001)
    x = s.x[:, 0]
    assert np.all(x > 0) and np.all(x < 1)
    assert np.all(np.diff(x) > 0)
    assert np.all((s.partner.x > -1) & (s.partner.x < 0))
    assert np.array_equal(s.partner.y, s.y)
    mid = len(s) // 2
    assert s.y[mid, 0] == 0 and s.x[mid, 0] == 0.5 and s.partner.x[mid, 0] == -0.5


def test_sample_rejects_radius(p1_model):
    with pytest.raises(ValueError):
        sample_lagrangian(p1_model, 0.0, 11)


def test_beta_involution(p2_model):
    s = sample_lagrangian(p2_model, 3.0, 9)
    twice = beta_apply(beta_apply(s))
    assert np.array_equal(twice.x, s.x) and np.array_equal(twice.y, s.y)


def test_beta_matches_dual_closed_form():
    # for the closed-form metric, beta of (a, b) is the model of (-a, -b)
    ys = np.linspace(-8, 8, 101)[:, None]
    s = sample_lagrangian(p1_closed_form_model(2, 1), 8.0, 101)
    dual = p1_closed_form_model(-2, -1).gradient(ys)
    assert np.max(np.abs(beta_apply(s).x - dual)) < 1e-12


def test_anti_ample_sample():
    s = tdual_sample(D(P1, -1, 0), 6.0, 61)
    assert np.all((s.x > -1) & (s.x < 0))
    with pytest.raises(NotAmpleError):
        tdual_sample(D(P1, 1, -1), 6.0, 61)


def test_moment_image_inside_triangle(p2_model):
    s = sample_lagrangian(p2_model, 8.0, 41)
    assert np.all(facet_margins(p2_model.polytope, s.x) > 0)


def test_iota():
    p = iota([0.3], [0.0])
    assert p.xi[0] == 0 and not p.at_infinity
    norms = [np.linalg.norm(iota([0.0, 0.0], [t, 0.0]).xi) for t in (1, 10, 100, 1e4)]
    assert all(a < b < 1 for a, b in zip(norms, norms[1:]))
    lim = iota_limit([0.0, 0.0], [5.0, 0.0])
    assert lim.at_infinity and np.allclose(lim.xi, [1, 0])
    with pytest.raises(ValueError):
        CompactifiedPoint(np.zeros(1), np.array([1.5]))


@given(st.lists(st.floats(-1e9, 1e9), min_size=2, max_size=2))
def test_iota_inside_ball(xi):
    p = iota([0.0, 0.0], xi)
    norm = np.linalg.norm(p.xi)
    assert norm <= 1
    # fibers too long to resolve in double precision land on the boundary
    assert p.at_infinity == (abs(norm - 1) <= 1e-12)
    if np.linalg.norm(xi) < 1e5:
        assert not p.at_infinity


def test_asymptotic_distance(p1_model, p2_model):
    ray = P1.cone((1,))
    closed = math.exp(-20) / (1 + math.exp(-20))
    assert abs(asymptotic_distance(D(P1, 1, 0), p1_model, ray, 10.0) - closed) < 1e-15
    assert asymptotic_distance(D(P1, 1, 0), p1_model, ray, 0.0) > 0.1
    d = D(P2, 0, 0, 1)
    for idx in P2.cone_index_sets[1:]:
        seq = [asymptotic_distance(d, p2_model, P2.cone(idx), t) for t in (1, 3, 6, 10)]
        assert all(a >= b for a, b in zip(seq, seq[1:]))
        assert seq[-1] < 1e-5


def test_tameness(p1_model):
    t10 = tameness_bounds(p1_model, 10.0, 401)
    t20 = tameness_bounds(p1_model, 20.0, 801)
    assert abs(t10.sup_hess - 0.5) < 1e-12
    assert abs(t10.sup_hess - t20.sup_hess) < 1e-9
    assert abs(t10.sup_third - t20.sup_third) < 1e-6
    single = section_sum_model([(2,)], LatticePolytope(1, vertices=[(2,)]))
    assert tameness_bounds(single, 5.0, 51).sup_hess == 0


def test_nohom(p1_model):
    d = D(P1, 1, 0)
    assert nohom_scan(d, p1_model, (0,), 0.4, 10_000) == 0
    assert nohom_scan(d, p1_model, (0,), 0.0, 10_000) == 0
    assert nohom_scan(d, p1_model, (0,), 2.0, 10_000) > 0


def test_nohom_requires_boundary_point(p1_model):
    with pytest.raises(ValueError):
        nohom_scan(D(P1, 1, 0), p1_model, (-0.5,), 0.4, 100)


def test_gradient_finite_difference(p2_model):
    rng = np.random.default_rng(3)
    ys = rng.uniform(-5, 5, size=(50, 2))
    h = 1e-5
    for y in ys:
        fd = [(p2_model.value(y + e) - p2_model.value(y - e)) / (2 * h) for e in np.eye(2) * h]
        g = p2_model.gradient(y)
        assert np.linalg.norm(fd - g) <= 1e-6 * (1 + np.linalg.norm(g))
        np.linalg.cholesky(p2_model.hessian(y))
