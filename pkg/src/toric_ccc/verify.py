"""Acceptance checks shared by ``toric-ccc verify all`` and the test suite.

Each check returns (passed, detail).  ``run_checks`` adds timing and fails
a check that overruns its budget; timings never enter ``detail`` so the
report text stays deterministic.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

import numpy as np

from . import lattice as la
from .catalog import CATALOG, P1, P2, SMOOTH_COMPLETE
from .ccc import (convolve, dictionary, lambda_bar_contains, lambda_sigma_contains,
                  skeleton_containment)
from .cohomology import cohomology_table, formula_matches_oracle
from .fan import Fan, is_complete, is_smooth
from .ktheory import (ample_basis, atiyah_bott_character, atiyah_bott_chi, class_of, fingerprint,
                      fixed_point_weights, in_window, random_class, relation_class, rewrite_to_window)
from .linebundle import LatticePolytope, TDivisor, is_ample, minkowski_sum, polytope_of
from .tduality import (asymptotic_distance, biconjugate, facet_margins, legendre, metric_default,
                       nohom_scan, p1_gamma)

log = logging.getLogger(__name__)

SEED = 20240917

EXPECTED_FLAGS = {
    "P1": (True, True),
    "P2": (True, True),
    "P1xP1": (True, True),
    "F1": (True, True),
    "ray": (False, True),
    "nonsmooth": (True, False),
}


def divisors_in_box(f: Fan, bound: int):
    for c in itertools.product(range(-bound, bound + 1), repeat=f.n_rays):
        yield TDivisor(f, c)


def ample_in_box(f: Fan, bound: int) -> list[TDivisor]:
    return [d for d in divisors_in_box(f, bound) if is_ample(d)]


# --- brute-force classification oracles ---------------------------------

def completeness_oracle(f: Fan, samples: int = 2000, seed: int = SEED) -> bool:
    """Does every sampled integer direction (plus all +-e_i) land in a maximal cone?"""
    rng = np.random.default_rng(seed)
    n = f.dim
    dirs = [tuple(int(s * (i == j)) for j in range(n)) for i in range(n) for s in (1, -1)]
    dirs += [tuple(int(x) for x in rng.integers(-50, 51, size=n)) for _ in range(samples)]
    cones = f.max_cone_objects()
    for u in dirs:
        if any(u) and not any(c.contains(u) for c in cones):
            return False
    return True


def smoothness_oracle(f: Fan) -> bool:
    """Every maximal cone's generators have coprime maximal minors (|det| = 1 when full)."""
    for idx in f.max_cones:
        gens = [f.rays[i] for i in idx]
        k = len(gens)
        g = 0
        for cols in itertools.combinations(range(f.dim), k):
            g = gcd(g, abs(la.det([[v[c] for c in cols] for v in gens])))
        if g != 1:
            return False
    return True


# --- the criteria -------------------------------------------------------

def check_fig1_dictionary():
    expected = {(1, 0): ("costandard", (0, 1)), (0, 1): ("costandard", (-1, 0)),
                (-2, 0): ("standard", (-2, 0))}
    bad = []
    for c, (kind, (lo, hi)) in expected.items():
        sheaf = dictionary(TDivisor(P1, c)).sheaf
        if sheaf.kind != kind or sheaf.support.interval() != (Fraction(lo), Fraction(hi)):
            bad.append(f"{c}: {sheaf.describe()}")
    return not bad, "; ".join(bad) or "3/3 entries exact"


def check_p1_closed_form():
    errs = []
    if p1_gamma(1, 0, 0.0) != 0.5:
        errs.append(f"gamma(1,0,0) = {p1_gamma(1, 0, 0.0)!r}")
    worst = 0.0
    for a, b in itertools.product(range(-3, 4), repeat=2):
        worst = max(worst, abs(p1_gamma(a, b, 20.0) - a), abs(p1_gamma(a, b, -20.0) + b))
    if worst > 1e-9:
        errs.append(f"limit error {worst:.3e}")
    return not errs, "; ".join(errs) or f"gamma(1,0,0)=0.5, max limit error {worst:.3e}"


def check_cohomology_oracle(bound: int = 3):
    weights = divisors = 0
    for name in SMOOTH_COMPLETE:
        for d in divisors_in_box(CATALOG[name], bound):
            ok, k = formula_matches_oracle(d)
            if not ok:
                return False, f"{name} c={list(d.coeffs)} disagrees"
            weights += k
            divisors += 1
    return True, f"{divisors} divisors, {weights} weights agree"


def check_serre_duality(bound: int = 2):
    count = 0
    for name in SMOOTH_COMPLETE:
        f = CATALOG[name]
        K = TDivisor(f, (-1,) * f.n_rays)
        for d in divisors_in_box(f, bound):
            h = cohomology_table(d).totals
            hd = cohomology_table(K - d).totals
            if h != hd[::-1]:
                return False, f"{name} c={list(d.coeffs)}: {h} vs {hd}"
            count += 1
    return True, f"{count} divisors"


def check_convolution(bound: int = 2):
    pairs = 0
    for name in SMOOTH_COMPLETE:
        amp = ample_in_box(CATALOG[name], bound)
        polys = {d: polytope_of(d) for d in amp}
        entries = {d: dictionary(d) for d in amp}
        for d1, d2 in itertools.combinations_with_replacement(amp, 2):
            s = d1 + d2
            target = polytope_of(s)
            if minkowski_sum(polys[d1], polys[d2]) != target:
                return False, f"{name}: Minkowski sum fails for {list(d1.coeffs)}, {list(d2.coeffs)}"
            if convolve(entries[d1], entries[d2]).sheaf != dictionary(s).sheaf:
                return False, f"{name}: convolve mismatch for {list(d1.coeffs)}, {list(d2.coeffs)}"
            pairs += 1
    return True, f"{pairs} ample pairs"


def tduality_bundles() -> list[tuple[str, TDivisor]]:
    """Ample bundles of the smooth catalog with |c_i| <= 1 (|c_i| <= 2 on P1)."""
    out = []
    for name in SMOOTH_COMPLETE:
        f = CATALOG[name]
        out += [(name, d) for d in ample_in_box(f, 2 if f.dim == 1 else 1)]
    return out


def _sphere(n: int, radius: float, count: int = 720) -> np.ndarray:
    if n == 1:
        return np.array([[radius], [-radius]])
    th = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
    return radius * np.stack([np.cos(th), np.sin(th)], axis=1)


def _ball(n: int, radius: float, count: int, rng) -> np.ndarray:
    u = rng.normal(size=(count, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return u * (radius * rng.uniform(0.0, 1.0, size=(count, 1)) ** (1.0 / n))


def check_tduality_numerics(points: int = 100, biconj_points: int = 10):
    rng = np.random.default_rng(SEED)
    grad_err = inv_err = bic_err = 0.0
    min_eig = np.inf
    margins: dict[str, float] = {}
    h = 1e-5
    bundles = tduality_bundles()
    for name, d in bundles:
        model = metric_default(d)
        n = model.n
        ys = _ball(n, 5.0, points, rng)
        g = np.asarray(model.gradient(ys))
        fd = np.empty_like(g)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd[:, i] = (model.value(ys + e) - model.value(ys - e)) / (2 * h)
        rel = np.linalg.norm(fd - g, axis=1) / (1.0 + np.linalg.norm(g, axis=1))
        grad_err = max(grad_err, float(rel.max()))
        H = np.asarray(model.hessian(ys))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(H).min()))
        for x in g:
            ystar, _ = legendre(model, x)
            inv_err = max(inv_err, float(np.linalg.norm(model.gradient(ystar) - x)))
        for y in ys[:biconj_points]:
            bic_err = max(bic_err, abs(biconjugate(model, y) - float(model.value(y))))
        xs = np.asarray(model.gradient(_sphere(n, 10.0))).reshape(-1, n)
        margins[name] = max(margins.get(name, 0.0), float(facet_margins(model.polytope, xs).max()))
    ok = (grad_err <= 1e-6 and min_eig > 0 and inv_err <= 1e-6 and bic_err <= 1e-6
          and margins["P1"] < 1e-3 and margins["P2"] < 5e-2)
    detail = (f"{len(bundles)} bundles: grad rel {grad_err:.3e}, min Hessian eig {min_eig:.3e}, "
              f"grad f(y*(x)) - x {inv_err:.3e}, f** - f {bic_err:.3e}, "
              f"facet margin at radius 10 P1 {margins['P1']:.3e} P2 {margins['P2']:.3e}")
    return ok, detail


def check_asymptotics(t: float = 10.0):
    d = TDivisor(P1, (1, 0))
    model = metric_default(d)
    ref = np.exp(-2 * t) / (1 + np.exp(-2 * t))
    val = asymptotic_distance(d, model, P1.cone((1,)), t)
    closed_ok = abs(val - ref) <= 1e-6 * ref
    worst = {1: 0.0, 2: 0.0}
    for f, bound in ((P1, 2), (P2, 1)):
        taus = [f.cone(idx) for idx in f.cone_index_sets if idx]
        for d in ample_in_box(f, bound):
            model = metric_default(d)
            for tau in taus:
                worst[f.dim] = max(worst[f.dim], asymptotic_distance(d, model, tau, t))
    ok = closed_ok and worst[1] < 1e-6 and worst[2] < 1e-3
    return ok, (f"P1 c=(1,0) cone(+1): {val:.6e} vs closed form {ref:.6e}; "
                f"max P1 {worst[1]:.3e}, max P2 {worst[2]:.3e}")


def check_nohom(grid: int = 10_000):
    d = TDivisor(P1, (1, 0))
    model = metric_default(d)
    vertices = [v for v in (-polytope_of(d)).vertices]
    small = [nohom_scan(d, model, q, 0.4, grid) for q in vertices]
    large = [nohom_scan(d, model, q, 2.0, grid) for q in vertices]
    ok = all(k == 0 for k in small) and any(k > 0 for k in large)
    qs = [str(v[0]) for v in vertices]
    return ok, f"vertices {qs}: delta=0.4 counts {small}, delta=2 counts {large}"


def check_ktheory(classes: int = 20):
    rng = np.random.default_rng(SEED)
    for f in (P1, P2):
        w = fixed_point_weights(ample_basis(f))
        for i in range(w.r):
            if any(not ch.is_zero() for ch in fingerprint(relation_class(i, w), w)):
                return False, f"relation {i} has nonzero fingerprint on dimension {f.dim}"
        for _ in range(classes):
            k = random_class(w, rng)
            out = rewrite_to_window(k, w)
            if not in_window(out, w.v) or fingerprint(out, w) != fingerprint(k, w):
                return False, f"rewrite failed for {k}"
    basis = ample_basis(P1)
    w = fixed_point_weights(basis)
    worst = 0.0
    t = [np.exp(1j * rng.uniform(0.1, 2 * np.pi - 0.1))]
    count = 0
    for a, b in itertools.product(range(-3, 4), repeat=2):
        if a + b < -1:
            continue
        d = TDivisor(P1, (a, b))
        fp = fingerprint(class_of(d, basis), w)
        table = cohomology_table(d)
        worst = max(worst, abs(atiyah_bott_chi(fp, P1) - table.euler),
                    abs(atiyah_bott_character(fp, P1, t) - table.evaluate_character(t)))
        count += 1
    return worst <= 1e-6, f"relations zero, {2 * classes} rewrites exact, chi error {worst:.3e} over {count} bundles"


def _random_member(f: Fan, rng) -> tuple[tuple, tuple]:
    """A random rational point of (tau^perp + chi) x (-tau)."""
    cones = f.cone_index_sets
    idx = cones[int(rng.integers(len(cones)))]
    tau = f.cone(idx)
    n = f.dim
    y = [Fraction(0)] * n
    for g in tau.generators:
        y = la.sub(y, la.scale(Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 7))), g))
    chi = [int(v) for v in rng.integers(-3, 4, size=n)]
    perp = la.nullspace(list(tau.generators), n) if tau.generators else [
        tuple(int(i == j) for j in range(n)) for i in range(n)]
    x = [Fraction(v) for v in chi]
    for p in perp:
        x = la.add(x, la.scale(Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 9))), p))
    return tuple(x), tuple(y)


def _random_point(n: int, rng) -> tuple[tuple, tuple]:
    def q():
        return Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 7)))
    return tuple(q() for _ in range(n)), tuple(q() for _ in range(n))


def check_skeleton(points: int = 10_000, bound: int = 3):
    rng = np.random.default_rng(SEED)
    for name, f in CATALOG.items():
        n = f.dim
        for k in range(points):
            x, y = _random_member(f, rng) if k % 2 == 0 else _random_point(n, rng)
            inside = lambda_sigma_contains(f, x, y)[0]
            if k % 2 == 0 and not inside:
                return False, f"{name}: constructed member {x}, {y} rejected"
            if not lambda_sigma_contains(f, x, (0,) * n)[0]:
                return False, f"{name}: zero section misses {x}"
            lam = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 50)))
            if lambda_sigma_contains(f, x, la.scale(lam, y))[0] != inside:
                return False, f"{name}: not conical at {x}, {y}"
            shift = [int(v) for v in rng.integers(-5, 6, size=n)]
            if lambda_sigma_contains(f, la.add(x, shift), y)[0] != inside:
                return False, f"{name}: not M-periodic at {x}, {y}"
            if lambda_bar_contains(f, x, y) != inside:
                return False, f"{name}: quotient image disagrees at {x}, {y}"
    amp = 0
    for name in SMOOTH_COMPLETE:
        for d in ample_in_box(CATALOG[name], bound):
            if not skeleton_containment(d):
                return False, f"{name} c={list(d.coeffs)}: Lambda_c not contained"
            amp += 1
    return True, f"{points} points per fan on {len(CATALOG)} fans; containment for {amp} ample divisors"


def check_classification():
    rows = []
    ok = True
    for name, f in CATALOG.items():
        flags = (is_complete(f), is_smooth(f))
        oracle = (completeness_oracle(f), smoothness_oracle(f))
        ok &= flags == oracle == EXPECTED_FLAGS[name]
        rows.append(f"{name} complete={flags[0]} smooth={flags[1]}")
    return ok, ", ".join(rows)


@dataclass(frozen=True)
class Criterion:
    number: int
    key: str
    title: str
    budget: float
    run: Callable[[], tuple[bool, str]]


CRITERIA = (
    Criterion(1, "fig1-dictionary", "P1 dictionary for c=(1,0), (0,1), (-2,0)", 1.0, check_fig1_dictionary),
    Criterion(2, "p1-closed-form", "P1 closed-form gamma and its limits", 1.0, check_p1_closed_form),
    Criterion(3, "cohomology-oracle", "weight formula vs Cech complex, |c_i| <= 3", 60.0, check_cohomology_oracle),
    Criterion(4, "serre-duality", "Serre duality, |c_i| <= 2", 60.0, check_serre_duality),
    Criterion(5, "convolution", "Minkowski sums and convolution, ample |c_i| <= 2", 30.0, check_convolution),
    Criterion(6, "tduality-numerics", "gradients, Hessians, Legendre, facet margins", 30.0, check_tduality_numerics),
    Criterion(7, "asymptotics", "asymptotic distance at t = 10", 10.0, check_asymptotics),
    Criterion(8, "nohom", "no short chords from the vertices of -Delta_c", 10.0, check_nohom),
    Criterion(9, "ktheory", "relations, window rewriting, Atiyah-Bott chi", 30.0, check_ktheory),
    Criterion(10, "skeleton", "Lambda_Sigma properties and skeleton containment", 30.0, check_skeleton),
    Criterion(11, "classification", "completeness/smoothness vs brute force", 5.0, check_classification),
)


@dataclass(frozen=True)
class CheckResult:
    criterion: Criterion
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} [{self.criterion.number:2d}] {self.criterion.title}: {self.detail}"


def run_criterion(c: Criterion) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = c.run()
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - t0
    log.info("criterion %d (%s) took %.2f s (budget %.0f s)", c.number, c.key, elapsed, c.budget)
    if elapsed > c.budget:
        ok, detail = False, f"{detail}; over the {c.budget:g} s budget"
    return CheckResult(c, ok, detail, elapsed)


def run_checks(numbers=None) -> list[CheckResult]:
    return [run_criterion(c) for c in CRITERIA if numbers is None or c.number in numbers]
