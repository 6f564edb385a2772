"""Equivariant divisors D_c, their support data and the polytopes Delta_c."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import ceil, floor
from typing import Iterable, Sequence

from . import lattice as la
from .fan import Cone, Fan, FanError, FanMorphism, check_fan_map, is_complete, extreme_rays


class UnboundedPolyhedronError(ValueError):
    pass


class SingularConeError(ValueError):
    pass


class NotAmpleError(ValueError):
    pass


def _clean(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def _clean_vec(v: Iterable) -> tuple:
    return tuple(_clean(x) for x in v)


@dataclass(frozen=True)
class TDivisor:
    """D_c = sum c_i D_i; ``coeffs`` is positional against ``fan.rays``.

    Coefficients are integers for genuine divisors; rational coefficients
    are tolerated so that scaled test doubles can be built.
    """

    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean_vec(self.coeffs))
        if len(self.coeffs) != self.fan.n_rays:
            raise la.DimensionError(
                f"divisor has {len(self.coeffs)} coefficients but the fan has {self.fan.n_rays} rays")

    def _same_fan(self, other: "TDivisor"):
        if other.fan != self.fan:
            raise FanError("divisors live on different fans")

    def __add__(self, other: "TDivisor") -> "TDivisor":
        self._same_fan(other)
        return TDivisor(self.fan, la.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "TDivisor") -> "TDivisor":
        self._same_fan(other)
        return TDivisor(self.fan, la.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> "TDivisor":
        return TDivisor(self.fan, la.neg(self.coeffs))

    def scaled(self, k) -> "TDivisor":
        return TDivisor(self.fan, la.scale(Fraction(k), self.coeffs))

    @property
    def is_integral(self) -> bool:
        return la.is_integral(self.coeffs)


@dataclass(frozen=True)
class CartierData:
    """m_sigma for each maximal cone, aligned with ``divisor.fan.max_cones``."""

    divisor: TDivisor
    m: tuple[tuple, ...]

    @property
    def is_integral(self) -> bool:
        return all(la.is_integral(v) for v in self.m)

    def at(self, k: int) -> tuple:
        return self.m[k]

    def support_function(self, y: Sequence):
        """psi_c(y) = <m_sigma, y> on the maximal cone containing y."""
        k = self.divisor.fan.max_cone_containing(y)
        if k is None:
            raise FanError(f"{list(y)} is outside the support of the fan")
        return la.pairing(self.m[k], y)


def _local_data(d: TDivisor, require_unimodular: bool) -> tuple[tuple, ...]:
    fan = d.fan
    out = []
    for k, c in enumerate(fan.max_cones):
        gens = [fan.rays[i] for i in c]
        if len(gens) != fan.dim:
            raise FanError(f"maximal cone {k} is not full-dimensional")
        if require_unimodular and not la.unimodular_test(gens):
            raise SingularConeError(f"maximal cone {k} {list(c)} is not unimodular")
        out.append(_clean_vec(la.solve(gens, [-d.coeffs[i] for i in c])))
    return tuple(out)


def cartier_data(d: TDivisor) -> CartierData:
    return CartierData(d, _local_data(d, require_unimodular=True))


@lru_cache(maxsize=8192)
def _wall_margins(d: TDivisor) -> tuple:
    fan = d.fan
    m = _local_data(d, require_unimodular=False)
    margins = []
    for ks in fan.walls().values():
        if len(ks) != 2:
            continue
        a, b = ks
        for s, t in ((a, b), (b, a)):
            (extra,) = set(fan.max_cones[t]) - set(fan.max_cones[s])
            margins.append(la.pairing(m[s], fan.rays[extra]) + d.coeffs[extra])
    return tuple(margins)


def is_ample(d: TDivisor) -> bool:
    """Strict convexity of the support function across every wall."""
    if not is_complete(d.fan):
        return False
    return all(x > 0 for x in _wall_margins(d))


def is_nef(d: TDivisor) -> bool:
    if not is_complete(d.fan):
        return False
    return all(x >= 0 for x in _wall_margins(d))


class LatticePolytope:
    """A bounded polyhedron in M_R with exact rational vertices.

    H-representation: ``<a, m> >= b`` for (a, b) in ``inequalities`` and
    ``<a, m> = b`` for (a, b) in ``equalities``.  Either representation may
    be supplied; the other is derived on demand.
    """

    def __init__(self, n: int, vertices: Iterable[Sequence] | None = None,
                 inequalities: Iterable[tuple] | None = None,
                 equalities: Iterable[tuple] | None = None):
        self.n = n
        if vertices is None:
            if inequalities is None:
                raise ValueError("need vertices or inequalities")
            ineqs = tuple((tuple(a), _clean(b)) for a, b in inequalities)
            eqs = tuple((tuple(a), _clean(b)) for a, b in (equalities or ()))
            _check_bounded(ineqs, eqs, n)
            self._ineqs, self._eqs = ineqs, eqs
            self.vertices = _vertices_from_halfspaces(ineqs, eqs, n)
        else:
            pts = {_clean_vec(v) for v in vertices}
            self.vertices = tuple(sorted(_hull_vertices(sorted(pts), n)))
            if inequalities is not None:
                self._ineqs = tuple((tuple(a), _clean(b)) for a, b in inequalities)
                self._eqs = tuple((tuple(a), _clean(b)) for a, b in (equalities or ()))

    @classmethod
    def _from_extreme(cls, n: int, vertices, inequalities, equalities) -> "LatticePolytope":
        # vertices already known to be exactly the extreme points
        p = cls.__new__(cls)
        p.n = n
        p.vertices = tuple(sorted(_clean_vec(v) for v in vertices))
        p._ineqs, p._eqs = tuple(inequalities), tuple(equalities)
        return p

    @classmethod
    def empty(cls, n: int) -> "LatticePolytope":
        p = cls(n, vertices=())
        p._ineqs, p._eqs = (), (((0,) * n, 1),)
        return p

    def _ensure_halfspaces(self):
        if not hasattr(self, "_ineqs"):
            if not self.vertices:
                self._ineqs, self._eqs = (), (((0,) * self.n, 1),)
            else:
                self._ineqs, self._eqs = hull_halfspaces(self.vertices, self.n)

    @property
    def inequalities(self) -> tuple:
        self._ensure_halfspaces()
        return self._ineqs

    @property
    def equalities(self) -> tuple:
        self._ensure_halfspaces()
        return self._eqs

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def dim(self) -> int:
        if not self.vertices:
            return -1
        p0 = self.vertices[0]
        return la.rank([la.sub(v, p0) for v in self.vertices[1:]])

    def contains(self, m: Sequence) -> bool:
        m = la.as_fraction_vector(m)
        return bool(self.vertices) and \
            all(la.pairing(a, m) >= b for a, b in self.inequalities) and \
            all(la.pairing(a, m) == b for a, b in self.equalities)

    def __neg__(self) -> "LatticePolytope":
        p = LatticePolytope(self.n, vertices=[la.neg(v) for v in self.vertices])
        if hasattr(self, "_ineqs"):
            p._ineqs = tuple((la.neg(a), b) for a, b in self._ineqs)
            p._eqs = tuple((la.neg(a), b) for a, b in self._eqs)
        return p

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.n == other.n and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.n, self.vertices))

    def __repr__(self):
        if not self.vertices:
            return f"LatticePolytope(n={self.n}, empty)"
        return f"LatticePolytope(n={self.n}, vertices={[tuple(map(str, v)) for v in self.vertices]})"

    def interval(self) -> tuple | None:
        """(lo, hi) for a one-dimensional ambient space."""
        if self.n != 1:
            raise la.DimensionError("interval() needs a 1-dimensional polytope")
        if not self.vertices:
            return None
        return self.vertices[0][0], self.vertices[-1][0]


def _check_bounded(ineqs, eqs, n):
    A = [a for a, _ in ineqs]
    E = [a for a, _ in eqs]
    if la.rank(A + E) < n or extreme_rays(A, E, n):
        raise UnboundedPolyhedronError("the inequalities do not define a bounded polyhedron")


def _vertices_from_halfspaces(ineqs, eqs, n) -> tuple:
    E = [a for a, _ in eqs]
    e = la.rank(E) if E else 0
    found = set()
    for active in combinations(range(len(ineqs)), n - e):
        rows = E + [ineqs[i][0] for i in active]
        if len(rows) == n and la.det(rows) == 0:
            continue
        if len(rows) != n and la.rank(rows) != n:
            continue
        # pick n independent rows out of eqs + active
        sel, rhs = [], []
        for a, b in list(eqs) + [ineqs[i] for i in active]:
            if la.rank(sel + [a]) > len(sel):
                sel.append(a)
                rhs.append(b)
        x = la.solve(sel, rhs)
        if all(la.pairing(a, x) >= b for a, b in ineqs) and all(la.pairing(a, x) == b for a, b in eqs):
            found.add(_clean_vec(x))
    return tuple(sorted(found))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_vertices(pts: list, n: int) -> list:
    if len(pts) <= 1:
        return pts
    p0 = pts[0]
    if n == 2:
        k = 1 if all(_cross(p0, pts[1], p) == 0 for p in pts[2:]) else 2
    else:
        k = la.rank([la.sub(p, p0) for p in pts[1:]])
    if k == 0:
        return [p0]
    if k == 1:
        d = next(la.sub(p, p0) for p in pts if p != p0)
        key = [la.pairing(la.sub(p, p0), d) for p in pts]
        return [pts[key.index(min(key))], pts[key.index(max(key))]]
    if n == 2:
        # monotone chain, collinear points dropped
        lower, upper = [], []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        return lower[:-1] + upper[:-1]
    ineqs, eqs = hull_halfspaces(pts, n)
    E = [a for a, _ in eqs]
    out = []
    for p in pts:
        active = [a for a, b in ineqs if la.pairing(a, p) == b]
        if la.rank(E + active) == n:
            out.append(p)
    return out


def hull_halfspaces(points: Sequence[Sequence], n: int) -> tuple[tuple, tuple]:
    """Facet inequalities and affine-hull equalities of conv(points).

    Normals are primitive integer vectors; for full-dimensional hulls the
    representation is canonical.
    """
    pts = [la.as_fraction_vector(p) for p in points]
    p0 = pts[0]
    diffs = [la.sub(p, p0) for p in pts[1:]]
    k = la.rank(diffs) if diffs else 0
    eq_normals = la.integer_kernel([la.primitive(d) for d in diffs if any(d)], n) if k else \
        [tuple(int(i == j) for j in range(n)) for i in range(n)]
    eqs = tuple((a, _clean(la.pairing(a, p0))) for a in eq_normals)
    if k == 0:
        return (), eqs
    ineqs = set()
    for subset in combinations(range(len(pts)), k):
        base = pts[subset[0]]
        rows = list(eq_normals) + [la.sub(pts[i], base) for i in subset[1:]]
        if la.rank(rows) != n - 1:
            continue
        (a,) = la.nullspace(rows, n)
        a = la.primitive(a)
        vals = [la.pairing(a, p) for p in pts]
        b = la.pairing(a, base)
        if all(v >= b for v in vals):
            ineqs.add((a, _clean(b)))
        elif all(v <= b for v in vals):
            ineqs.add((la.neg(a), _clean(-b)))
    return tuple(sorted(ineqs)), eqs


@lru_cache(maxsize=8192)
def polytope_of(d: TDivisor) -> LatticePolytope:
    """Delta_c = {m : <m, v_i> >= -c_i}; possibly empty or lower-dimensional.

    The result is cached and must be treated as immutable.
    """
    fan = d.fan
    if not is_complete(fan):
        raise UnboundedPolyhedronError("polytope_of needs a complete fan; the polyhedron is unbounded")
    ineqs = tuple((r, -c) for r, c in zip(fan.rays, d.coeffs))
    return LatticePolytope(fan.dim, inequalities=ineqs)


def lattice_points(p: LatticePolytope) -> list[tuple[int, ...]]:
    """Integer points of a bounded polytope, in lexicographic order."""
    if p.is_empty:
        return []
    lo = [floor(min(v[i] for v in p.vertices)) for i in range(p.n)]
    hi = [ceil(max(v[i] for v in p.vertices)) for i in range(p.n)]
    ineqs, eqs = p.inequalities, p.equalities
    out = []
    for m in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(la.pairing(a, m) >= b for a, b in ineqs) and all(la.pairing(a, m) == b for a, b in eqs):
            out.append(m)
    return out


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.is_empty or q.is_empty:
        raise ValueError("Minkowski sum of an empty polytope")
    if p.n != q.n:
        raise la.DimensionError("Minkowski sum across dimensions")
    return LatticePolytope(p.n, vertices=[la.add(u, v) for u in p.vertices for v in q.vertices])


@dataclass(frozen=True)
class PolytopeStratum:
    """Open face U_{tau,c} and its closure F_{tau,c} for one cone tau."""

    cone: Cone
    equal_rays: tuple[int, ...]
    strict_rays: tuple[int, ...]
    face: LatticePolytope = field(compare=False)
    divisor: TDivisor = field(compare=False)

    @property
    def dim(self) -> int:
        return self.face.dim

    def _value(self, i, m):
        return la.pairing(m, self.divisor.fan.rays[i]) + self.divisor.coeffs[i]

    def in_closed(self, m: Sequence) -> bool:
        m = la.as_fraction_vector(m)
        return all(self._value(i, m) == 0 for i in self.equal_rays) and \
            all(self._value(i, m) >= 0 for i in self.strict_rays)

    def in_open(self, m: Sequence) -> bool:
        m = la.as_fraction_vector(m)
        return all(self._value(i, m) == 0 for i in self.equal_rays) and \
            all(self._value(i, m) > 0 for i in self.strict_rays)


def strata(d: TDivisor) -> list[PolytopeStratum]:
    """One stratum per cone of the fan, ordered like ``fan.cone_index_sets``."""
    if not is_ample(d):
        raise NotAmpleError("strata are only defined for ample divisors")
    fan = d.fan
    delta = polytope_of(d)
    out = []
    for idx in fan.cone_index_sets:
        eq = tuple((fan.rays[i], -d.coeffs[i]) for i in idx)
        verts = [v for v in delta.vertices if all(la.pairing(a, v) == b for a, b in eq)]
        face = LatticePolytope._from_extreme(fan.dim, verts, delta.inequalities, eq)
        strict = tuple(i for i in range(fan.n_rays) if i not in idx)
        out.append(PolytopeStratum(fan.cone(idx), idx, strict, face, d))
    return out


def pullback_divisor(m: FanMorphism, d: TDivisor) -> TDivisor:
    """c'_j = -psi_c(f(v'_j)) for the source rays v'_j."""
    if d.fan != m.target:
        raise FanError("divisor is not on the target fan")
    ok, _ = check_fan_map(m)
    if not ok:
        raise FanError("not a fan morphism")
    data = CartierData(d, _local_data(d, require_unimodular=False))
    coeffs = []
    for v in m.source.rays:
        coeffs.append(-data.support_function(m(v)))
    return TDivisor(m.source, tuple(coeffs))
