"""Rational polyhedral cones and simplicial fans over an exact lattice."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from . import lattice as la


class FanError(ValueError):
    """Malformed cone or fan data."""


class NonSimplicialError(FanError):
    """A cone whose generators are linearly dependent."""


class NotPointedError(FanError):
    """A cone containing a line."""


class ConeNotInFanError(FanError):
    pass


def extreme_rays(ineqs: Sequence[Sequence], eqs: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Primitive extreme rays of the pointed cone {x : A x >= 0, E x = 0}.

    Brute force over (n-1)-rank active sets; intended for n <= 4.
    """
    e = la.rank(eqs)
    need = n - 1 - e
    if need < 0:
        return []
    found = set()
    for active in combinations(range(len(ineqs)), need):
        rows = list(eqs) + [ineqs[i] for i in active]
        if la.rank(rows) != n - 1:
            continue
        (x,) = la.nullspace(rows, n)
        x = la.primitive(x)
        for cand in (x, la.neg(x)):
            if all(la.pairing(a, cand) >= 0 for a in ineqs):
                found.add(cand)
    return sorted(found)


def _is_pointed(generators: Sequence[Sequence[int]], n: int) -> bool:
    if not generators:
        return True
    # a pointed cone admits no nontrivial nonnegative relation among generators
    k = len(generators)
    ident = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    relations = [tuple(g[i] for g in generators) for i in range(n)]
    return not extreme_rays(ident, relations, k)


@dataclass(frozen=True)
class Cone:
    """Cone generated by primitive lattice vectors.

    ``ray_indices`` refer to the owning fan's ray list and may be empty for
    free-standing cones.
    """

    generators: tuple[tuple[int, ...], ...]
    ray_indices: tuple[int, ...] = ()
    ambient_dim: int = field(default=0, compare=False)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not self.ambient_dim:
            if not gens:
                raise FanError("ambient dimension required for the zero cone")
            object.__setattr__(self, "ambient_dim", len(gens[0]))
        n = self.ambient_dim
        for g in gens:
            if len(g) != n:
                raise la.DimensionError(f"generator {g} is not in dimension {n}")
            if not la.is_primitive(g):
                raise FanError(f"generator {g} is not primitive")
        if not _is_pointed(gens, n):
            raise NotPointedError(f"cone generated by {list(gens)} contains a line")

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls((), (), n)

    @cached_property
    def dim(self) -> int:
        return la.rank(self.generators)

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    @cached_property
    def halfspaces(self) -> tuple[list[tuple], list[tuple]]:
        return cone_halfspaces(self)

    def contains(self, y: Sequence) -> bool:
        """Exact membership of a rational vector (simplicial cones)."""
        if not self.is_simplicial:
            raise NonSimplicialError("membership is only implemented for simplicial cones")
        ineqs, eqs = self.halfspaces
        return all(la.pairing(a, y) == 0 for a in eqs) and all(la.pairing(a, y) >= 0 for a in ineqs)

    def in_relative_interior(self, y: Sequence) -> bool:
        coeffs = la.solve_in_span(self.generators, la.as_fraction_vector(y))
        return coeffs is not None and all(a > 0 for a in coeffs)

    def barycenter(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.generators)) if self.generators else (0,) * self.ambient_dim


def dual_cone(c: Cone) -> list[tuple[int, ...]]:
    """Generators of the dual cone {x : <x, y> >= 0 for all y in c}.

    The lineality space c^perp contributes each of its saturated basis
    vectors with both signs; the remaining generators are the facet normals
    taken inside span(c).
    """
    n = c.ambient_dim
    perp = perp_space(c)
    pointed_part = extreme_rays(list(c.generators), perp, n)
    lineality = [v for p in perp for v in (p, la.neg(p))]
    return sorted(set(pointed_part) | set(lineality))


def perp_space(c: Cone) -> list[tuple[int, ...]]:
    """Saturated basis of c^perp intersected with M, in Hermite normal form."""
    return la.integer_kernel(list(c.generators), c.ambient_dim)


@dataclass(frozen=True)
class OrbitData:
    orbit_dim: int
    perp_basis: tuple[tuple[int, ...], ...]
    quotient_lattice_rank: int


def _minor_gcd(gens: Sequence[Sequence[int]]) -> int:
    k = len(gens)
    n = len(gens[0])
    return reduce(gcd, (abs(int(la.det([[g[j] for j in cols] for g in gens])))
                        for cols in combinations(range(n), k)), 0)


@dataclass(frozen=True)
class Fan:
    """A simplicial fan: ordered primitive rays and maximal cones as index sets.

    Ray order is never changed, since divisor coefficients are positional.
    """

    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if not rays:
            raise FanError("a fan needs at least one ray")
        n = len(rays[0])
        seen = {}
        for i, r in enumerate(rays):
            if len(r) != n:
                raise la.DimensionError(f"ray {i} has dimension {len(r)}, expected {n}")
            if not any(r):
                raise FanError(f"ray {i} is zero")
            if not la.is_primitive(r):
                raise FanError(f"ray {i} {list(r)} is not primitive")
            if r in seen:
                raise FanError(f"duplicate ray index {i} (same as ray {seen[r]})")
            seen[r] = i
        for k, c in enumerate(cones):
            if len(set(c)) != len(c):
                raise FanError(f"cone {k} repeats a ray index")
            for i in c:
                if not 0 <= i < len(rays):
                    raise FanError(f"cone {k} references ray index {i} out of range")
            if la.rank([rays[i] for i in c]) != len(c):
                raise NonSimplicialError(f"cone {k} {list(c)} is not simplicial")
        self._check_face_condition()

    def _check_face_condition(self):
        n = self.dim
        for (a, ca), (b, cb) in combinations(enumerate(self.max_cones), 2):
            common = set(ca) & set(cb)
            ia, ea = cone_halfspaces(self.cone(ca))
            ib, eb = cone_halfspaces(self.cone(cb))
            meet = extreme_rays(ia + ib, ea + eb, n)
            allowed = {self.rays[i] for i in common}
            if any(r not in allowed for r in meet):
                raise FanError(f"cones {a} and {b} do not intersect in a common face")

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone(self, indices: Iterable[int]) -> Cone:
        return _fan_cone(self, tuple(sorted(indices)))

    @cached_property
    def cone_index_sets(self) -> tuple[tuple[int, ...], ...]:
        """All cones of the fan as ray-index sets, sorted by (dim, indices)."""
        faces = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                faces.update(combinations(c, k))
        return tuple(sorted(faces, key=lambda f: (len(f), f)))

    def cones(self) -> list[Cone]:
        return [self.cone(f) for f in self.cone_index_sets]

    def max_cone_objects(self) -> list[Cone]:
        return [self.cone(c) for c in self.max_cones]

    def contains_cone(self, c: Cone) -> bool:
        if c.ray_indices or not c.generators:
            return tuple(sorted(c.ray_indices)) in self.cone_index_sets and \
                all(self.rays[i] == g for i, g in zip(c.ray_indices, c.generators))
        idx = []
        for g in c.generators:
            if g not in self.rays:
                return False
            idx.append(self.rays.index(g))
        return tuple(sorted(idx)) in self.cone_index_sets

    def locate(self, c: Cone) -> Cone:
        """The fan's own copy of ``c`` (with ray indices), or raise."""
        if not self.contains_cone(c):
            raise ConeNotInFanError(f"cone generated by {list(c.generators)} is not in the fan")
        if c.ray_indices or not c.generators:
            return self.cone(c.ray_indices)
        return self.cone(self.rays.index(g) for g in c.generators)

    def max_cone_containing(self, y: Sequence) -> int | None:
        for k, c in enumerate(self.max_cones):
            if self.cone(c).contains(y):
                return k
        return None

    def walls(self) -> dict[tuple[int, ...], list[int]]:
        """(n-1)-subsets of maximal cones mapped to the maximal cones containing them."""
        out: dict[tuple[int, ...], list[int]] = {}
        for k, c in enumerate(self.max_cones):
            if len(c) != self.dim:
                continue
            for w in combinations(c, self.dim - 1):
                out.setdefault(w, []).append(k)
        return out

    def boundary_complex(self) -> la.SimplicialComplex:
        return la.SimplicialComplex.generated_by(self.max_cones)


@lru_cache(maxsize=4096)
def _fan_cone(f: Fan, idx: tuple[int, ...]) -> Cone:
    return Cone(tuple(f.rays[i] for i in idx), idx, f.dim)


def cone_halfspaces(c: Cone) -> tuple[list[tuple], list[tuple]]:
    """(inequalities, equalities) cutting out a simplicial cone."""
    n = c.ambient_dim
    perp = perp_space(c)
    normals = extreme_rays(list(c.generators), perp, n)
    return normals, perp


@lru_cache(maxsize=256)
def is_complete(f: Fan) -> bool:
    """Support equals N_R.

    For a pure simplicial fan this holds iff every wall lies in exactly two
    maximal cones and the wall graph on maximal cones is connected.
    """
    n = f.dim
    if not f.max_cones or any(len(c) != n for c in f.max_cones):
        return False
    walls = f.walls()
    if any(len(ks) != 2 for ks in walls.values()):
        return False
    adj: dict[int, set[int]] = {k: set() for k in range(len(f.max_cones))}
    for a, b in walls.values():
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        for j in adj[k] - seen:
            seen.add(j)
            queue.append(j)
    return len(seen) == len(f.max_cones)


@lru_cache(maxsize=256)
def is_smooth(f: Fan) -> bool:
    for c in f.max_cones:
        gens = [f.rays[i] for i in c]
        if len(gens) == f.dim:
            if not la.unimodular_test(gens):
                return False
        elif gens and _minor_gcd(gens) != 1:
            return False
    return True


def orbit_data(f: Fan, tau: Cone) -> OrbitData:
    tau = f.locate(tau)
    perp = perp_space(tau)
    d = tau.dim
    return OrbitData(f.dim - d, tuple(perp), f.dim - d)


@dataclass(frozen=True)
class FanMorphism:
    """Integer linear map N_1 -> N_2; ``matrix`` is n2 x n1 acting on columns."""

    source: Fan
    target: Fan
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in self.matrix))
        if len(self.matrix) != self.target.dim or any(len(r) != self.source.dim for r in self.matrix):
            raise la.DimensionError(
                f"map matrix must be {self.target.dim} x {self.source.dim}")

    def __call__(self, v: Sequence) -> tuple:
        return la.mat_vec(self.matrix, v)

    def compose(self, after: "FanMorphism") -> "FanMorphism":
        """``after`` applied after ``self``."""
        if after.source != self.target:
            raise FanError("cannot compose: target and source fans differ")
        return FanMorphism(self.source, after.target, tuple(map(tuple, la.mat_mul(after.matrix, self.matrix))))


def check_fan_map(m: FanMorphism) -> tuple[bool, tuple[tuple[int, ...], ...]]:
    """Whether ``m`` is injective and maps cones into cones, plus the dual map
    M_2 -> M_1 (the transpose)."""
    dual = tuple(tuple(r) for r in la.transpose(m.matrix))
    if la.rank(m.matrix) != m.source.dim:
        return False, dual
    targets = m.target.max_cone_objects()
    for c in m.source.max_cones:
        images = [m(m.source.rays[i]) for i in c]
        if not any(all(t.contains(y) for y in images) for t in targets):
            return False, dual
    return True, dual
