"""Weight-graded cohomology of equivariant line bundles on complete toric varieties.

Two independent routes are provided.  ``weight_cohomology`` uses the reduced
cohomology of the full subcomplex of the fan on the rays where the weight is
"negative"; ``cech_weight_oracle`` builds the Cech complex of the cover by
maximal-cone charts directly.  Both depend on the weight only through the set
of negative rays, which is what the bulk scans key their memo tables on.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil
from typing import Sequence

import numpy as np

from . import lattice as la
from .fan import Fan, FanError, is_complete
from .linebundle import TDivisor, _local_data


class RadiusTooSmallError(RuntimeError):
    pass


class CohomologyMismatchError(AssertionError):
    """The combinatorial formula disagreed with the Cech complex."""


@dataclass(frozen=True)
class WeightCohomology:
    weight: tuple[int, ...]
    dims: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** i * h for i, h in enumerate(self.dims))


def _require_complete(fan: Fan):
    if not is_complete(fan):
        raise FanError("cohomology needs a complete fan")


def negative_rays(d: TDivisor, m: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, (v, c) in enumerate(zip(d.fan.rays, d.coeffs)) if la.pairing(m, v) < -c)


@lru_cache(maxsize=None)
def _formula_dims(fan: Fan, negative: frozenset[int]) -> tuple[int, ...]:
    sub = fan.boundary_complex().full_subcomplex(negative)
    red = la.reduced_cohomology(sub)
    # H^i = H~^{i-1}; red[k] is H~^{k-1}
    dims = list(red[: fan.dim + 1]) + [0] * (fan.dim + 1 - len(red))
    if any(red[fan.dim + 1:]):
        raise AssertionError("reduced cohomology above the fan dimension")
    return tuple(dims)


@lru_cache(maxsize=None)
def _cech_dims(fan: Fan, negative: frozenset[int]) -> tuple[int, ...]:
    cones = [frozenset(c) for c in fan.max_cones]
    v = len(cones)
    # term for an index set I is Q iff the face cap_{I} sigma has no negative ray
    terms: list[list[tuple[int, ...]]] = []
    for size in range(1, v + 1):
        live = []
        for I in combinations(range(v), size):
            face = frozenset.intersection(*(cones[i] for i in I))
            if not face & negative:
                live.append(I)
        terms.append(live)
    ranks = []
    for p in range(v - 1):
        src, dst = terms[p], terms[p + 1]
        if not src or not dst:
            ranks.append(0)
            continue
        index = {I: k for k, I in enumerate(src)}
        rows = []
        for J in dst:
            row = [0] * len(src)
            for k in range(len(J)):
                face = J[:k] + J[k + 1:]
                if face in index:
                    row[index[face]] = (-1) ** k
            rows.append(row)
        ranks.append(la.rank(rows))
    ranks.append(0)
    dims = [len(terms[p]) - ranks[p] - (ranks[p - 1] if p > 0 else 0) for p in range(v)]
    if any(dims[fan.dim + 1:]):
        raise AssertionError("Cech cohomology above the dimension")
    return tuple(dims[: fan.dim + 1]) + (0,) * max(0, fan.dim + 1 - v)


def weight_cohomology(d: TDivisor, m: Sequence[int]) -> WeightCohomology:
    """dim H^i(X, O(D_c))_m via the full subcomplex on the negative rays."""
    _require_complete(d.fan)
    m = la.to_int_vector(m)
    dims = _formula_dims(d.fan, negative_rays(d, m))
    oracle = _cech_dims(d.fan, negative_rays(d, m))
    if dims != oracle:
        raise CohomologyMismatchError(f"formula {dims} != Cech {oracle} at weight {m}")
    return WeightCohomology(m, dims)


def cech_weight_oracle(d: TDivisor, m: Sequence[int]) -> WeightCohomology:
    """dim H^i at weight m from the Cech complex of the maximal-cone cover."""
    _require_complete(d.fan)
    m = la.to_int_vector(m)
    return WeightCohomology(m, _cech_dims(d.fan, negative_rays(d, m)))


@dataclass(frozen=True)
class CohomologyTable:
    """Weight decomposition of H^*(X, O(D_c)).

    ``weights`` holds only weights with some nonzero cohomology.
    """

    divisor: TDivisor
    radius: int
    weights: dict
    totals: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** i * h for i, h in enumerate(self.totals))

    def character(self) -> dict[tuple[int, ...], int]:
        """Equivariant Euler characteristic as {weight: multiplicity}."""
        out = {}
        for m, wc in self.weights.items():
            if wc.euler:
                out[m] = wc.euler
        return out

    def evaluate_character(self, t: Sequence[complex]) -> complex:
        return sum(k * np.prod([ti ** mi for ti, mi in zip(t, m)]) for m, k in self.character().items())


def default_scan_radius(d: TDivisor) -> int:
    """n * (1 + max_sigma |m_sigma|_inf)."""
    m = _local_data(d, require_unimodular=False)
    biggest = max(abs(Fraction(x)) for v in m for x in v)
    return d.fan.dim * (1 + ceil(biggest))


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("TORIC_CCC_THREADS", "1")))
    except ValueError:
        return 1


def _box(n: int, R: int) -> np.ndarray:
    axes = [np.arange(-R, R + 1, dtype=np.int64)] * n
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)


def _masks(d: TDivisor, weights: np.ndarray) -> np.ndarray:
    rays = np.array(d.fan.rays, dtype=np.int64)
    c = np.array([int(x) for x in d.coeffs], dtype=np.int64)
    neg = weights @ rays.T < -c
    bits = np.int64(1) << np.arange(len(c), dtype=np.int64)
    return neg.astype(np.int64) @ bits


def _mask_set(mask: int, r: int) -> frozenset[int]:
    return frozenset(i for i in range(r) if mask >> i & 1)


def cohomology_table(d: TDivisor, scan_radius: int | None = None, method: str = "formula") -> CohomologyTable:
    """Scan the weight box [-R, R]^n and assemble the graded dimensions.

    ``method`` selects the per-weight route: "formula" (the fast path, still
    cross-checked against the Cech complex on every distinct sign pattern)
    or "cech".
    """
    _require_complete(d.fan)
    if not d.is_integral:
        raise ValueError("cohomology needs an integral divisor")
    n, r = d.fan.dim, d.fan.n_rays
    R = default_scan_radius(d) if scan_radius is None else int(scan_radius)
    weights = _box(n, R)
    chunks = np.array_split(weights, _thread_cap())
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        masks = np.concatenate(list(pool.map(lambda w: _masks(d, w), chunks)))

    dims_of = {}
    for mask in np.unique(masks).tolist():
        neg = _mask_set(mask, r)
        cech = _cech_dims(d.fan, neg)
        if method == "formula":
            dims = _formula_dims(d.fan, neg)
            if dims != cech:
                raise CohomologyMismatchError(f"formula {dims} != Cech {cech} for negative rays {sorted(neg)}")
        elif method == "cech":
            dims = cech
        else:
            raise ValueError(f"unknown method {method!r}")
        dims_of[mask] = dims

    table = {}
    totals = [0] * (n + 1)
    on_boundary = np.abs(weights).max(axis=1) == R
    for w, mask, edge in zip(weights.tolist(), masks.tolist(), on_boundary.tolist()):
        dims = dims_of[mask]
        if any(dims):
            if edge:
                raise RadiusTooSmallError(
                    f"weight {tuple(w)} on the boundary of the radius-{R} box has cohomology {dims}")
            table[tuple(w)] = WeightCohomology(tuple(w), dims)
            totals = [a + b for a, b in zip(totals, dims)]
    return CohomologyTable(d, R, table, tuple(totals))


def formula_matches_oracle(d: TDivisor, scan_radius: int | None = None) -> tuple[bool, int]:
    """Compare both routes on every weight of the scan box.

    Returns (agree, number of weights checked).
    """
    _require_complete(d.fan)
    R = default_scan_radius(d) if scan_radius is None else scan_radius
    weights = _box(d.fan.dim, R)
    masks = _masks(d, weights)
    r = d.fan.n_rays
    for mask in np.unique(masks).tolist():
        neg = _mask_set(mask, r)
        if _formula_dims(d.fan, neg) != _cech_dims(d.fan, neg):
            return False, len(weights)
    return True, len(weights)


def ext_dims(a: TDivisor, b: TDivisor) -> tuple[int, ...]:
    """dim Ext^i(L_a, L_b) = h^i(L_{b-a})."""
    return cohomology_table(b - a).totals
