"""Numerical T-dual Lagrangians: potentials, moment maps and their asymptotics.

This is the only floating-point module.  The dual coordinate is x = df/dy
with no 2*pi rescaling (``DUAL_COORDINATE_SCALE``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import lattice as la
from .fan import Cone
from .linebundle import LatticePolytope, NotAmpleError, TDivisor, is_ample, lattice_points, polytope_of, strata

DUAL_COORDINATE_SCALE = 1.0

ARMIJO = 1e-4
MAX_NEWTON_ITER = 200


class NonInteriorError(ValueError):
    pass


class LegendreConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _batch(y, n: int) -> tuple[np.ndarray, bool]:
    y = np.asarray(y, dtype=float)
    single = y.ndim == 1
    return y.reshape(-1, n), single


@dataclass(frozen=True)
class MetricModel:
    """A convex potential f on N_R with gradient and Hessian evaluators.

    Evaluators take an array of shape (n,) or (k, n).
    """

    kind: str
    n: int
    f: Callable
    grad: Callable
    hess: Callable
    polytope: LatticePolytope | None = None
    divisor: TDivisor | None = None
    points: np.ndarray | None = None

    def value(self, y):
        return self.f(y)

    def gradient(self, y):
        return self.grad(y)

    def hessian(self, y):
        return self.hess(y)


def section_sum_model(points: Sequence[Sequence[int]], polytope: LatticePolytope | None = None,
                      divisor: TDivisor | None = None) -> MetricModel:
    """f(y) = 1/2 log sum_m exp(2 <m, y>) over the given lattice points."""
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        raise ValueError("section-sum metric needs at least one lattice point")
    n = P.shape[1]

    def weights(y):
        Y, single = _batch(y, n)
        z = 2.0 * Y @ P.T
        zmax = z.max(axis=1, keepdims=True)
        e = np.exp(z - zmax)
        s = e.sum(axis=1, keepdims=True)
        return e / s, zmax[:, 0] + np.log(s[:, 0]), single

    def f(y):
        _, lse, single = weights(y)
        out = 0.5 * lse
        return out[0] if single else out

    def grad(y):
        w, _, single = weights(y)
        g = w @ P
        return g[0] if single else g

    def hess(y):
        w, _, single = weights(y)
        mean = w @ P
        second = np.einsum("km,mi,mj->kij", w, P, P)
        H = 2.0 * (second - np.einsum("ki,kj->kij", mean, mean))
        return H[0] if single else H

    return MetricModel("section_sum", n, f, grad, hess, polytope, divisor, P)


def metric_default(d: TDivisor) -> MetricModel:
    """Section-sum potential over the lattice points of Delta_c (d ample)."""
    if not is_ample(d):
        raise NotAmpleError("the default admissible metric is built for ample divisors")
    delta = polytope_of(d)
    pts = lattice_points(delta)
    if not pts:
        raise ValueError("Delta_c has no lattice points")
    return section_sum_model(pts, delta, d)


def p1_gamma(a: int, b: int, y):
    """(a+b) e^{2y} / (1 + e^{2y}) - b."""
    out = (a + b) * _sigmoid(2.0 * np.asarray(y, dtype=float)) - b
    return float(out) if np.ndim(out) == 0 else out


def p1_closed_form_model(a: int, b: int, fan=None) -> MetricModel:
    """Potential on the projective line whose derivative is ``p1_gamma``."""
    k = a + b

    def f(y):
        Y, single = _batch(y, 1)
        z = 2.0 * Y[:, 0]
        out = 0.5 * k * np.logaddexp(0.0, z) - b * Y[:, 0]
        return out[0] if single else out

    def grad(y):
        Y, single = _batch(y, 1)
        g = (k * _sigmoid(2.0 * Y[:, 0]) - b)[:, None]
        return g[0] if single else g

    def hess(y):
        Y, single = _batch(y, 1)
        s = _sigmoid(2.0 * Y[:, 0])
        H = (2.0 * k * s * (1.0 - s))[:, None, None]
        return H[0] if single else H

    divisor = TDivisor(fan, (a, b)) if fan is not None else None
    poly = LatticePolytope(1, vertices=[(-b,), (a,)]) if k > 0 else None
    return MetricModel("p1_closed_form", 1, f, grad, hess, poly, divisor)


def user_expression_model(n: int, f: Callable, grad: Callable, hess: Callable,
                          polytope: LatticePolytope | None = None) -> MetricModel:
    return MetricModel("user_expression", n, f, grad, hess, polytope)


def _facets(poly: LatticePolytope) -> tuple[np.ndarray, np.ndarray]:
    A = np.array([[float(x) for x in a] for a, _ in poly.inequalities])
    b = np.array([float(b) for _, b in poly.inequalities])
    return A, b


def facet_margins(poly: LatticePolytope, xs) -> np.ndarray:
    """Euclidean distance from each x to the nearest facet hyperplane (signed)."""
    A, b = _facets(poly)
    X = np.atleast_2d(np.asarray(xs, dtype=float))
    norms = np.linalg.norm(A, axis=1)
    return ((X @ A.T - b) / norms).min(axis=1)


def moment_map(model: MetricModel, y):
    return model.gradient(y)


def legendre(model: MetricModel, x, tol: float = 1e-10, start=None) -> tuple[np.ndarray, float]:
    """argmax and max of <x, y> - f(y), by damped Newton from ``start`` (default y = 0)."""
    x = np.asarray(x, dtype=float).reshape(model.n)
    if model.polytope is not None and facet_margins(model.polytope, x)[0] < 1e-9:
        raise NonInteriorError(f"{x} is not strictly inside the moment polytope")
    y = np.zeros(model.n) if start is None else np.array(start, dtype=float).reshape(model.n)

    def phi(v):
        return float(x @ v - model.value(v))

    for _ in range(MAX_NEWTON_ITER):
        g = x - model.gradient(y)
        res = float(np.linalg.norm(g))
        if res < tol:
            return y, phi(y)
        step = np.linalg.solve(model.hessian(y), g)
        t, base, slope = 1.0, phi(y), float(g @ step)
        # near the optimum phi changes below rounding; a smaller residual is then enough
        while t > 1e-12:
            cand = y + t * step
            if phi(cand) >= base + ARMIJO * t * slope or \
                    np.linalg.norm(x - model.gradient(cand)) < res:
                break
            t *= 0.5
        y = y + t * step
    res = float(np.linalg.norm(x - model.gradient(y)))
    if res < tol:
        return y, phi(y)
    raise LegendreConvergenceError("Newton iteration did not converge", res)


def biconjugate(model: MetricModel, y, tol: float = 1e-9) -> float:
    """f**(y) = sup_x <x, y> - f*(x), maximised over the open moment polytope.

    Each evaluation of f* is itself a Legendre solve; the outer Newton step
    uses Hess f* = (Hess f)^{-1} at the inner argmax.
    """
    y = np.asarray(y, dtype=float).reshape(model.n)
    x = np.asarray(model.gradient(np.zeros(model.n)), dtype=float)

    def psi(v, seed):
        ystar, fstar = legendre(model, v, start=seed)
        return float(v @ y - fstar), ystar

    val, ystar = psi(x, None)
    for _ in range(MAX_NEWTON_ITER):
        g = y - ystar
        res = float(np.linalg.norm(g))
        if res < tol:
            return val
        step = model.hessian(ystar) @ g
        t = 1.0
        while t > 1e-12:
            cand = x + t * step
            if model.polytope is None or facet_margins(model.polytope, cand)[0] >= 1e-9:
                cval, cy = psi(cand, ystar)
                if cval >= val + ARMIJO * t * float(g @ step) or np.linalg.norm(y - cy) < res:
                    break
            t *= 0.5
        else:
            return val
        x, val, ystar = cand, cval, cy
    return val


@dataclass(frozen=True)
class LagrangianSample:
    """Graph points (x, y) with x = df/dy(y) on a uniform grid, or their image under beta."""

    y: np.ndarray
    x: np.ndarray
    radius: float
    grid: int
    sign: int = 1
    divisor: TDivisor | None = None
    partner: "LagrangianSample | None" = None

    def __len__(self):
        return len(self.y)


def grid_points(n: int, radius: float, grid: int) -> np.ndarray:
    axis = np.linspace(-radius, radius, grid)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, n)


def beta_apply(s: LagrangianSample) -> LagrangianSample:
    """(x, y) -> (-x, y)."""
    return replace(s, x=-s.x, sign=-s.sign, partner=None)


def sample_lagrangian(model: MetricModel, radius: float, grid: int) -> LagrangianSample:
    if radius <= 0:
        raise ValueError("radius must be positive")
    ys = grid_points(model.n, radius, grid)
    xs = np.asarray(model.gradient(ys)).reshape(-1, model.n)
    s = LagrangianSample(ys, xs, float(radius), int(grid), 1, model.divisor)
    return replace(s, partner=beta_apply(s))


def tdual_sample(d: TDivisor, radius: float, grid: int) -> LagrangianSample:
    """Sample of L_{c,h} for ample c, or of L_{c,h} = beta(L_{-c,h^{-1}}) for anti-ample c."""
    if is_ample(d):
        return sample_lagrangian(metric_default(d), radius, grid)
    if is_ample(-d):
        s = beta_apply(sample_lagrangian(metric_default(-d), radius, grid))
        return replace(s, divisor=d)
    raise NotAmpleError("T-dual samples are built for ample or anti-ample divisors")


@dataclass(frozen=True)
class CompactifiedPoint:
    x: np.ndarray
    xi: np.ndarray
    at_infinity: bool = False

    def __post_init__(self):
        norm = float(np.linalg.norm(self.xi))
        if norm > 1 + 1e-12:
            raise ValueError("fiber coordinate outside the closed unit ball")
        if self.at_infinity != (abs(norm - 1) <= 1e-12):
            raise ValueError("boundary flag inconsistent with the fiber norm")


def iota(x, xi) -> CompactifiedPoint:
    """(x, xi) -> (x, xi / sqrt(1 + |xi|^2)).

    Once |xi| is past about 7e5 the image is within 1e-12 of the unit
    sphere and is flagged as a boundary point.
    """
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    scale = np.linalg.norm(xi)
    # xi / sqrt(1 + |xi|^2) without overflowing |xi|^2
    img = xi / np.hypot(1.0, scale)
    return CompactifiedPoint(x, img, abs(float(np.linalg.norm(img)) - 1) <= 1e-12)


def iota_limit(x, direction) -> CompactifiedPoint:
    """Boundary point reached by iota(x, t * direction) as t -> infinity."""
    d = np.asarray(direction, dtype=float)
    return CompactifiedPoint(np.asarray(x, dtype=float), d / np.linalg.norm(d), True)


def _distance_to_cone(u: np.ndarray, gens: np.ndarray) -> float:
    """Euclidean distance from u to the simplicial cone spanned by the rows of gens."""
    best = float(np.linalg.norm(u))
    for k in range(1, len(gens) + 1):
        for S in combinations(range(len(gens)), k):
            G = gens[list(S)].T
            coef, *_ = np.linalg.lstsq(G, u, rcond=None)
            if np.all(coef >= -1e-15):
                best = min(best, float(np.linalg.norm(u - G @ coef)))
    return best


def distance_to_negated_face(d: TDivisor, tau: Cone, p) -> float:
    """Distance from p to F_{tau,-c} = -F_{tau,c}, via affine projections on its faces."""
    fan = d.fan
    p = np.asarray(p, dtype=float)
    rays = np.array(fan.rays, dtype=float)
    c = np.array([float(x) for x in d.coeffs])
    best = np.inf
    for s in strata(d):
        if not set(tau.ray_indices) <= set(s.equal_rays):
            continue
        eq = list(s.equal_rays)
        if eq:
            # on -F: <m, v_i> = c_i for i in sigma
            A = rays[eq]
            q = p - A.T @ np.linalg.solve(A @ A.T, A @ p - c[eq])
        else:
            q = p
        if np.all(rays @ q <= c + 1e-12):
            best = min(best, float(np.linalg.norm(p - q)))
    return best


def asymptotic_distance(d: TDivisor, model: MetricModel, tau: Cone, t: float) -> float:
    """How far (-grad f(y), y) at y = -t w is from F_{tau,-c} x (-tau).

    ``w`` is the normalised barycenter of tau's generators.
    """
    if not is_ample(d):
        raise NotAmpleError("asymptotic_distance needs an ample divisor")
    tau = d.fan.locate(tau)
    if tau.dim == 0:
        raise ValueError("tau must be a nonzero cone")
    w = np.asarray(tau.barycenter(), dtype=float)
    w /= np.linalg.norm(w)
    y = -t * w
    point = -np.asarray(model.gradient(y), dtype=float)
    face_term = distance_to_negated_face(d, tau, point)
    if t == 0:
        return face_term
    angular = _distance_to_cone(-y / np.linalg.norm(y), np.asarray(tau.generators, dtype=float))
    return max(face_term, angular)


@dataclass(frozen=True)
class TamenessBounds:
    sup_hess: float
    sup_third: float


def tameness_bounds(model: MetricModel, radius: float, grid: int, h: float = 1e-4) -> TamenessBounds:
    """Suprema of second and (finite-difference) third derivatives over the grid."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    ys = grid_points(model.n, radius, grid)
    H = np.asarray(model.hessian(ys)).reshape(-1, model.n, model.n)
    sup_third = 0.0
    for l in range(model.n):
        e = np.zeros(model.n)
        e[l] = h
        Hp = np.asarray(model.hessian(ys + e)).reshape(H.shape)
        Hm = np.asarray(model.hessian(ys - e)).reshape(H.shape)
        sup_third = max(sup_third, float(np.abs((Hp - Hm) / (2 * h)).max()))
    return TamenessBounds(float(np.abs(H).max()), sup_third)


def _on_negated_boundary(d: TDivisor, q) -> bool:
    # q in -Delta_c with some facet equality
    vals = [la.pairing(la.neg(q), v) + c for v, c in zip(d.fan.rays, d.coeffs)]
    return all(v >= 0 for v in vals) and any(v == 0 for v in vals)


def _shifted_gradient(model: MetricModel, ys: np.ndarray, q: np.ndarray) -> np.ndarray:
    # q + grad f(y); for section sums this is sum_m w_m (m + q), which avoids
    # cancellation when q is a vertex of -Delta_c
    if model.kind == "section_sum" and model.points is not None:
        z = 2.0 * ys @ model.points.T
        w = np.exp(z - z.max(axis=1, keepdims=True))
        w /= w.sum(axis=1, keepdims=True)
        return w @ (model.points + q)
    return q + np.asarray(model.gradient(ys)).reshape(ys.shape)


def nohom_scan(d: TDivisor, model: MetricModel, q: Sequence, delta: float, grid: int,
               span: float = 20.0, tol: float = 1e-6) -> int:
    """Count grid points y != 0 solving q + grad f(y) = s * y/|y| with 0 <= s < delta.

    For each y, s is the least-squares value <q + grad f(y), y/|y|>; a point
    counts when that s lies in [0, delta) and the perpendicular residual is
    below ``tol``.
    """
    q_exact = tuple(Fraction(v) for v in q)
    if not _on_negated_boundary(d, q_exact):
        raise ValueError(f"{list(map(str, q_exact))} is not on the boundary of Delta_{{-c}}")
    ys = grid_points(model.n, span, grid)
    norms = np.linalg.norm(ys, axis=1)
    ys, norms = ys[norms > 0], norms[norms > 0]
    unit = ys / norms[:, None]
    r = _shifted_gradient(model, ys, np.array([float(v) for v in q_exact]))
    s = np.einsum("ki,ki->k", r, unit)
    resid = np.linalg.norm(r - s[:, None] * unit, axis=1)
    return int(np.count_nonzero((resid < tol) & (s >= 0) & (s < delta)))
