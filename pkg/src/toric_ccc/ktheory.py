"""Equivariant K-theory of smooth projective toric varieties over an ample basis.

Classes are Laurent polynomials in basis line bundles L_1..L_r with
coefficients in the representation ring Z[M].  Restriction to the torus
fixed points (one per maximal cone) gives the localization fingerprint,
which the rewriting into the ample window must preserve exactly.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import lattice as la
from .fan import Fan, dual_cone, is_complete, is_smooth
from .linebundle import TDivisor, cartier_data, is_ample

SEARCH_BOUND = 8
STEP_GUARD = 10_000


class NotProjectiveError(ValueError):
    pass


class Character:
    """Element of the group ring Z[M], stored as {weight: multiplicity}."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, int] | Iterable = ()):
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, int] = {}
        for m, k in items:
            m = tuple(int(x) for x in m)
            if len(m) != n:
                raise la.DimensionError(f"character weight {m} is not in dimension {n}")
            acc[m] = acc.get(m, 0) + int(k)
        self._terms = {m: k for m, k in acc.items() if k}
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Character":
        # trusted path: keys are int tuples of length n, values nonzero ints
        obj = cls.__new__(cls)
        obj.n, obj._terms, obj._hash = n, terms, None
        return obj

    @classmethod
    def monomial(cls, m: Sequence[int], k: int = 1) -> "Character":
        return cls(len(m), {tuple(m): k})

    @classmethod
    def one(cls, n: int) -> "Character":
        return cls(n, {(0,) * n: 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "Character") -> "Character":
        acc = dict(self._terms)
        for m, k in other._terms.items():
            x = acc.get(m, 0) + k
            if x:
                acc[m] = x
            else:
                del acc[m]
        return Character._raw(self.n, acc)

    def __neg__(self) -> "Character":
        return Character._raw(self.n, {m: -k for m, k in self._terms.items()})

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Character._raw(self.n, {})
            return Character._raw(self.n, {m: k * other for m, k in self._terms.items()})
        acc: dict[tuple, int] = {}
        add = operator.add
        for a, ka in self._terms.items():
            for b, kb in other._terms.items():
                m = tuple(map(add, a, b))
                acc[m] = acc.get(m, 0) + ka * kb
        return Character._raw(self.n, {m: k for m, k in acc.items() if k})

    __rmul__ = __mul__

    def inverse_monomial(self) -> "Character":
        if len(self._terms) != 1:
            raise ValueError("only monomials +-t^m are invertible")
        ((m, k),) = self._terms.items()
        if k not in (1, -1):
            raise ValueError("only monomials +-t^m are invertible")
        return Character(self.n, {la.neg(m): k})

    def __eq__(self, other) -> bool:
        return isinstance(other, Character) and self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, t: Sequence[complex]) -> complex:
        return sum(k * np.prod([ti ** mi for ti, mi in zip(t, m)]) for m, k in self._terms.items())

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{k}*t^{list(m)}" for m, k in sorted(self._terms.items()))


class KClass:
    """sum_e coeff_e * L_1^{e_1} ... L_r^{e_r} with coeff_e in Z[M]."""

    __slots__ = ("n", "r", "_terms")

    def __init__(self, n: int, r: int, terms: Mapping[tuple, Character] | Iterable = ()):
        self.n, self.r = n, r
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, Character] = {}
        for e, ch in items:
            e = tuple(int(x) for x in e)
            acc[e] = acc[e] + ch if e in acc else ch
        self._terms = {e: ch for e, ch in acc.items() if not ch.is_zero()}

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Character) -> "KClass":
        return cls(coeff.n, len(exponents), {tuple(exponents): coeff})

    @classmethod
    def one(cls, n: int, r: int) -> "KClass":
        return cls(n, r, {(0,) * r: Character.one(n)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def exponents(self) -> list[tuple[int, ...]]:
        return sorted(self._terms)

    def __add__(self, other: "KClass") -> "KClass":
        return KClass(self.n, self.r, itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> "KClass":
        return KClass(self.n, self.r, {e: -ch for e, ch in self._terms.items()})

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def __mul__(self, other: "KClass | Character") -> "KClass":
        if isinstance(other, Character):
            return KClass(self.n, self.r, {e: ch * other for e, ch in self._terms.items()})
        return KClass(self.n, self.r, ((la.add(a, b), ca * cb)
                                       for a, ca in self._terms.items() for b, cb in other._terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, KClass) and self._terms == other._terms

    def __repr__(self):
        if not self._terms:
            return "KClass(0)"
        return "KClass(" + " + ".join(f"({ch})*L^{list(e)}" for e, ch in sorted(self._terms.items())) + ")"


@dataclass(frozen=True)
class AmpleBasis:
    """Ample line bundles L_1..L_r forming a Z-basis of Pic_T.

    L_1 is the first primitive ample class found; L_i = M_i + shifts[i] * L_1
    for a completion M_2..M_r of L_1 to a basis.
    """

    fan: Fan
    divisors: tuple[TDivisor, ...]
    shifts: tuple[int, ...]

    def __len__(self):
        return len(self.divisors)

    def __iter__(self):
        return iter(self.divisors)

    def __getitem__(self, i):
        return self.divisors[i]

    @cached_property
    def matrix(self) -> list[list[int]]:
        return [list(d.coeffs) for d in self.divisors]

    def coordinates(self, d: TDivisor) -> tuple[int, ...]:
        """Integer a with c = sum_i a_i c(L_i)."""
        a = la.solve(la.transpose(self.matrix), d.coeffs)
        return la.to_int_vector(a)


def _search_order(r: int, bound: int):
    vecs = itertools.product(range(-bound, bound + 1), repeat=r)
    return sorted((v for v in vecs if any(v)), key=lambda v: (sum(map(abs, v)), v))


def _complete_basis(v: Sequence[int]) -> list[tuple[int, ...]]:
    """Rows 2..r of a unimodular matrix whose first row is the primitive v."""
    r = len(v)
    for k, x in enumerate(v):
        if abs(x) == 1:
            return [tuple(int(i == j) for j in range(r)) for i in range(r) if i != k]
    _, U, _ = la.column_echelon([list(v)], r)
    # v U = e_1, so v is the first row of U^{-1}
    cols = [la.solve(U, [int(i == j) for i in range(r)]) for j in range(r)]
    Uinv_rows = [la.to_int_vector(row) for row in zip(*cols)]
    assert Uinv_rows[0] == tuple(v)
    return Uinv_rows[1:]


def ample_basis(f: Fan, bound: int = SEARCH_BOUND) -> AmpleBasis:
    if not (is_complete(f) and is_smooth(f)):
        raise NotProjectiveError("ample_basis needs a smooth complete fan")
    r = f.n_rays
    first = None
    for v in _search_order(r, bound):
        if reduce(gcd, map(abs, v)) == 1 and is_ample(TDivisor(f, v)):
            first = v
            break
    if first is None:
        raise NotProjectiveError(f"no ample divisor with |c_i| <= {bound}")
    L1 = TDivisor(f, first)
    divisors, shifts = [L1], [0]
    for m in _complete_basis(first):
        for k in range(0, 8 * bound + 1):
            cand = TDivisor(f, m) + L1.scaled(k)
            if is_ample(cand):
                divisors.append(cand)
                shifts.append(k)
                break
        else:
            raise NotProjectiveError(f"could not make {list(m)} ample by adding multiples of L_1")
    return AmpleBasis(f, tuple(divisors), tuple(shifts))


@dataclass(frozen=True)
class FixedPointWeights:
    """u[i][j] in M: the character of L_i at the fixed point of maximal cone j."""

    basis: AmpleBasis
    u: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def fan(self) -> Fan:
        return self.basis.fan

    @property
    def n(self) -> int:
        return self.fan.dim

    @property
    def r(self) -> int:
        return len(self.u)

    @property
    def v(self) -> int:
        return len(self.u[0])


def fixed_point_weights(basis: AmpleBasis, f: Fan | None = None) -> FixedPointWeights:
    f = basis.fan if f is None else f
    if f != basis.fan:
        raise ValueError("basis belongs to a different fan")
    u = tuple(tuple(la.to_int_vector(m) for m in cartier_data(L).m) for L in basis)
    return FixedPointWeights(basis, u)


Fingerprint = tuple  # of Character, one per maximal cone


def fingerprint(k: KClass, w: FixedPointWeights) -> Fingerprint:
    out = []
    for j in range(w.v):
        acc = Character(w.n)
        for e, ch in k.terms.items():
            shift = tuple(sum(e[i] * w.u[i][j][a] for i in range(w.r)) for a in range(w.n))
            acc = acc + ch * Character.monomial(shift)
        out.append(acc)
    return tuple(out)


def class_of(d: TDivisor, basis: AmpleBasis) -> KClass:
    """[L_c] as the basis monomial with trivial character."""
    return KClass.monomial(basis.coordinates(d), Character.one(d.fan.dim))


def _relation_coefficients(i: int, w: FixedPointWeights) -> list[Character]:
    """e_0..e_v with prod_j (L_i t^{-u_ij} - 1) = sum_k e_k L_i^k."""
    poly = [Character.one(w.n)]
    for j in range(w.v):
        a = Character.monomial(la.neg(w.u[i][j]))
        nxt = [Character(w.n) for _ in range(len(poly) + 1)]
        for k, ch in enumerate(poly):
            nxt[k + 1] = nxt[k + 1] + ch * a
            nxt[k] = nxt[k] - ch
        poly = nxt
    return poly


def relation_class(i: int, w: FixedPointWeights) -> KClass:
    """prod_j (L_i (x) V_ij - 1), with V_ij the trivial bundle twisted by t^{-u_ij}."""
    coeffs = _relation_coefficients(i, w)
    terms = {}
    for k, ch in enumerate(coeffs):
        e = [0] * w.r
        e[i] = k
        terms[tuple(e)] = ch
    return KClass(w.n, w.r, terms)


def _in_window(x: int, v: int) -> bool:
    return 1 <= x <= v


def rewrite_to_window(k: KClass, w: FixedPointWeights) -> KClass:
    """Rewrite k so every exponent lies in {1, ..., v}, using the relations.

    Basis indices are processed in order; within one index the term whose
    exponent is furthest outside the window is reduced first.  Exponents
    above v are lowered through L^v = -e_v^{-1} sum_{k<v} e_k L^k and
    exponents below 1 are raised through 1 = -e_0^{-1} sum_{k>=1} e_k L^k.
    """
    v = w.v
    terms = dict(k.terms)
    steps = 0
    for i in range(w.r):
        rel = _relation_coefficients(i, w)
        top_inv = rel[v].inverse_monomial()
        low_inv = rel[0].inverse_monomial()

        def distance(e):
            return e[i] - v if e[i] > v else 1 - e[i]

        while True:
            outside = [e for e in terms if not _in_window(e[i], v)]
            if not outside:
                break
            steps += 1
            if steps > STEP_GUARD:
                raise RuntimeError("rewrite_to_window exceeded the reduction step guard")
            e = max(outside, key=lambda x: (distance(x), x))
            coeff = terms.pop(e)
            if e[i] > v:
                factor, ks, offset = -(coeff * top_inv), range(v), e[i] - v
            else:
                factor, ks, offset = -(coeff * low_inv), range(1, v + 1), e[i]
            for kk in ks:
                if rel[kk].is_zero():
                    continue
                ne = list(e)
                ne[i] = offset + kk
                ne = tuple(ne)
                add = factor * rel[kk]
                new = terms[ne] + add if ne in terms else add
                if new.is_zero():
                    terms.pop(ne, None)
                else:
                    terms[ne] = new
    return KClass(k.n, k.r, terms)


def in_window(k: KClass, v: int) -> bool:
    return all(_in_window(x, v) for e in k.terms for x in e)


def tangent_denominator_weights(f: Fan, j: int) -> list[tuple[int, ...]]:
    """Generators of sigma_j^dual: the characters of the coordinate functions at x_j."""
    return dual_cone(f.cone(f.max_cones[j]))


def atiyah_bott_character(fp: Fingerprint, f: Fan, t: Sequence[complex]) -> complex:
    """sum_j fp_j(t) / prod_u (1 - t^u) over the fixed points, u generating sigma_j^dual."""
    total = 0j
    for j, ch in enumerate(fp):
        denom = 1.0 + 0j
        for u in tangent_denominator_weights(f, j):
            denom *= 1 - np.prod([ti ** ui for ti, ui in zip(t, u)])
        total += ch.evaluate(t) / denom
    return total


def atiyah_bott_chi(fp: Fingerprint, f: Fan, samples: int = 32, seed: int = 7) -> float:
    """Euler characteristic from the fixed-point sum alone.

    The sum is a Laurent polynomial P(t); evaluating it on a rotated grid of
    ``samples``-th roots of unity (rotation chosen generically, away from the
    poles of the individual terms) and taking a DFT recovers its
    coefficients, whose sum is P(1).  Exact when every exponent span is
    below ``samples``.
    """
    n = f.dim
    theta = np.random.default_rng(seed).uniform(0.1, 0.9, size=n) * 2 * np.pi / samples
    grid = np.empty((samples,) * n, dtype=complex)
    for k in itertools.product(range(samples), repeat=n):
        t = [np.exp(1j * (theta[a] + 2 * np.pi * k[a] / samples)) for a in range(n)]
        grid[k] = atiyah_bott_character(fp, f, t)
    coeffs = np.fft.fftn(grid) / samples ** n
    # coefficient of t^m sits at index (m mod N), twisted by e^{i m theta}
    total = 0j
    for k in itertools.product(range(samples), repeat=n):
        m = [ka if ka <= samples // 2 else ka - samples for ka in k]
        total += coeffs[k] * np.exp(-1j * float(np.dot(m, theta)))
    return float(total.real)


def random_class(w: FixedPointWeights, rng, n_terms: int = 4, low: int = -2, high: int = 5,
                 weight_bound: int = 2) -> KClass:
    """A small random class for property checks; ``rng`` is a numpy Generator."""
    terms = {}
    for _ in range(n_terms):
        e = tuple(int(x) for x in rng.integers(low, high + 1, size=w.r))
        m = tuple(int(x) for x in rng.integers(-weight_bound, weight_bound + 1, size=w.n))
        k = int(rng.choice([-2, -1, 1, 2]))
        terms[e] = Character.monomial(m, k) + terms[e] if e in terms else Character.monomial(m, k)
    return KClass(w.n, w.r, terms)
