"""The conical Lagrangian Lambda_Sigma and the line bundle / polytope-sheaf dictionary.

Sheaves are represented by their classifying data only: a kind
(costandard or standard) and the open polytope they live on.  Hom
dimensions are transported from the coherent side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import lattice as la
from .cohomology import ext_dims
from .fan import Cone, Fan, FanError
from .linebundle import (LatticePolytope, NotAmpleError, TDivisor, is_ample, minkowski_sum,
                         polytope_of, strata)


class UnsupportedDivisorError(ValueError):
    """Neither ample nor anti-ample: no object-level image is available."""


COSTANDARD = "costandard"
STANDARD = "standard"


@dataclass(frozen=True)
class SkeletonStratum:
    """F x (-tau): a face (or affine piece) of M_R times a cone of N_R."""

    source_cone: Cone
    base: LatticePolytope = field(compare=False)
    base_equalities: tuple = ()

    @property
    def cone_part(self) -> tuple[tuple[int, ...], ...]:
        return tuple(la.neg(g) for g in self.source_cone.generators)

    def contains(self, x: Sequence, y: Sequence) -> bool:
        neg_y = la.neg(la.as_fraction_vector(y))
        return self.base.contains(x) and (
            not any(neg_y) if not self.source_cone.generators else self.source_cone.contains(neg_y))


@dataclass(frozen=True)
class SheafObject:
    kind: str
    support: LatticePolytope
    shift: int = field(default=0, compare=False)

    def describe(self) -> str:
        if self.support.n == 1:
            lo, hi = self.support.interval()
            return f"{self.kind} on ({lo},{hi})"
        verts = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.support.vertices)
        return f"{self.kind} on interior of conv[{verts}]"


@dataclass(frozen=True)
class DictionaryEntry:
    divisor: TDivisor
    sheaf: SheafObject
    skeleton: tuple[SkeletonStratum, ...] = field(compare=False)


@dataclass(frozen=True)
class Witness:
    cone: Cone
    chi: tuple[int, ...]


def _clear_denominators(v: Sequence) -> tuple[tuple[int, ...], int]:
    v = la.as_fraction_vector(v)
    L = 1
    for a in v:
        L = L * a.denominator // gcd(L, a.denominator)
    return tuple(int(a * L) for a in v), L


def _perp_coset_witness(tau: Cone, x: Sequence) -> tuple[int, ...] | None:
    """Some chi in M with x - chi in tau^perp, or None."""
    gens = list(tau.generators)
    if not gens:
        return (0,) * tau.ambient_dim
    xs, L = _clear_denominators(x)
    p = [la.pairing(xs, g) for g in gens]
    if any(v % L for v in p):
        return None
    return la.solve_integer(gens, [v // L for v in p])


def lambda_sigma_contains(f: Fan, x: Sequence, y: Sequence) -> tuple[bool, Witness | None]:
    """Membership of (x, y) in the union of (tau^perp + M) x (-tau).

    Only the smallest cone containing -y matters: a larger cone has a
    smaller perp and so a stronger lattice condition.  That cone is also the
    witness.
    """
    if len(x) != f.dim or len(y) != f.dim:
        raise la.DimensionError(f"point must have two components of dimension {f.dim}")
    neg_y, _ = _clear_denominators(la.neg(la.as_fraction_vector(y)))
    for idx in f.cone_index_sets:
        tau = f.cone(idx)
        if idx and not tau.contains(neg_y):
            continue
        if not idx and any(neg_y):
            continue
        chi = _perp_coset_witness(tau, x)
        return (True, Witness(tau, chi)) if chi is not None else (False, None)
    return False, None


def reduce_mod_lattice(x: Sequence) -> tuple[Fraction, ...]:
    """Representative of x + M in the fundamental domain [0, 1)^n."""
    return tuple(v - (v.numerator // v.denominator) for v in la.as_fraction_vector(x))


def lambda_bar_contains(f: Fan, x: Sequence, y: Sequence) -> bool:
    """Membership in the image of Lambda_Sigma in T^* of the dual torus."""
    return lambda_sigma_contains(f, reduce_mod_lattice(x), y)[0]


def _signed_strata(d: TDivisor, sign: int) -> list[SkeletonStratum]:
    out = []
    for s in strata(d):
        face = s.face if sign > 0 else -s.face
        out.append(SkeletonStratum(s.cone, face, s.face.equalities))
    return out


def lambda_pm(d: TDivisor, sign: int) -> list[SkeletonStratum]:
    """Strata F_{tau, sign*c} x (-tau) for every tau in the fan (d ample).

    The minus sign uses Delta_{-c} := -Delta_c.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not is_ample(d):
        raise NotAmpleError("Lambda_{+-c} is only defined for ample c")
    return _signed_strata(d, sign)


def skeleton_containment(d: TDivisor) -> bool:
    """Every stratum of Lambda_{+c} and Lambda_{-c} lies in Lambda_Sigma.

    A stratum F x (-tau) is contained iff F spans a lattice translate of
    tau^perp of the right dimension.
    """
    if not is_ample(d):
        raise NotAmpleError("skeleton_containment needs an ample divisor")
    n = d.fan.dim
    for sign in (1, -1):
        for s in _signed_strata(d, sign):
            tau = s.source_cone
            if s.base.dim != n - tau.dim:
                return False
            for v in s.base.vertices:
                if any(la.pairing(la.sub(v, s.base.vertices[0]), g) for g in tau.generators):
                    return False
                if _perp_coset_witness(tau, v) is None:
                    return False
    return True


def dictionary(d: TDivisor) -> DictionaryEntry:
    """Ample L_c -> costandard sheaf on Delta_c; anti-ample -> standard on -Delta_{-c}."""
    if is_ample(d):
        return DictionaryEntry(d, SheafObject(COSTANDARD, polytope_of(d), d.fan.dim),
                               tuple(lambda_pm(d, 1)))
    if is_ample(-d):
        return DictionaryEntry(d, SheafObject(STANDARD, -polytope_of(-d), 0),
                               tuple(lambda_pm(-d, -1)))
    raise UnsupportedDivisorError(
        f"c = {list(d.coeffs)} is neither ample nor anti-ample; no object-level image")


def hom_dim(e1: DictionaryEntry, e2: DictionaryEntry) -> tuple[int, ...]:
    """Hom dimensions between dictionary objects, computed as Ext between the bundles."""
    if e1.divisor.fan != e2.divisor.fan:
        raise FanError("entries come from different fans")
    return ext_dims(e1.divisor, e2.divisor)


def convolve(e1: DictionaryEntry, e2: DictionaryEntry) -> DictionaryEntry:
    """Convolution of costandard objects: Minkowski sum of the supports."""
    if e1.sheaf.kind != COSTANDARD or e2.sheaf.kind != COSTANDARD:
        raise UnsupportedDivisorError("convolution is implemented for costandard objects only")
    d = e1.divisor + e2.divisor
    support = minkowski_sum(e1.sheaf.support, e2.sheaf.support)
    return DictionaryEntry(d, SheafObject(COSTANDARD, support, d.fan.dim), tuple(lambda_pm(d, 1)))
