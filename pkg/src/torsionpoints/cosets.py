"""Torsion cosets g*H: a torsion translate times a subtorus given by a saturated
integer direction lattice.

Everything reduces to exponent arithmetic in (Q/Z)^n. For an n x d direction
matrix B with Smith form P B Q = D, a torsion vector w lies in B*(Q/Z)^d iff
the last n - rank rows of P*w vanish mod Z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .laurent import (
    DimensionError,
    LaurentPolynomial,
    TorsionPoint,
    is_identically_zero,
    substitute_monomial_map,
)
from .normal_forms import matvec, saturate_and_canonicalize, smith_normal_form


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True, order=True)
class TorsionCoset:
    """translate * {y^B : y in G_m^d}; build with ``TorsionCoset.make``."""

    translate: TorsionPoint
    directions: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, translate: TorsionPoint, B: Sequence[Sequence[int]]) -> "TorsionCoset":
        if len(B) != translate.n:
            raise DimensionError(f"direction matrix has {len(B)} rows, translate has {translate.n}")
        H = saturate_and_canonicalize(B)
        return cls(_normalize_translate(translate, H), tuple(map(tuple, H)))

    @property
    def n(self) -> int:
        return len(self.directions)

    @property
    def dim(self) -> int:
        return len(self.directions[0])

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(col) for col in zip(*self.directions)]

    @cached_property
    def _quotient_rows(self) -> list[list[int]]:
        snf = smith_normal_form(self.directions)
        return snf.P[snf.rank :]

    def conjugate(self, u: int) -> "TorsionCoset":
        return TorsionCoset.make(self.translate.conjugate(u), self.directions)

    def galois_orbit(self) -> list["TorsionCoset"]:
        N = self.translate.N
        return sorted({self.conjugate(u) for u in range(1, N + 1) if gcd(u, N) == 1})


def _normalize_translate(translate: TorsionPoint, H: Sequence[Sequence[int]]) -> TorsionPoint:
    # smallest-order point on the coset, ties broken by lexicographic exponents
    n, d = len(H), len(H[0])
    if d == n:
        return TorsionPoint(1, (0,) * n)
    snf = smith_normal_form(H)
    N = translate.N
    moved = matvec(snf.P, translate.a)
    quotient = [x % N for x in moved[d:]]
    m = N // gcd(N, *quotient)
    tail = [q * m // N for q in quotient]
    best = None
    for head in itertools.product(range(m), repeat=d):
        x = tuple(v % m for v in matvec(snf.Pinv, list(head) + tail))
        if best is None or x < best:
            best = x
    return TorsionPoint(m, best)


def coset_contains_point(coset: TorsionCoset, pt: TorsionPoint) -> bool:
    if pt.n != coset.n:
        raise DimensionError(f"point has {pt.n} coordinates, coset lives in dimension {coset.n}")
    tr = coset.translate
    M = _lcm(pt.N, tr.N)
    w = [x * (M // pt.N) - y * (M // tr.N) for x, y in zip(pt.a, tr.a)]
    return all(v % M == 0 for v in matvec(coset._quotient_rows, w))


def coset_in_variety(coset: TorsionCoset, system: Iterable[LaurentPolynomial]) -> bool:
    polys = getattr(system, "polys", system)
    B = coset.directions
    for P in polys:
        if P.nvars != coset.n:
            raise DimensionError(f"polynomial has {P.nvars} variables, coset has {coset.n}")
        if not is_identically_zero(substitute_monomial_map(P, B, coset.translate)):
            return False
    return True


def coset_equal(c1: TorsionCoset, c2: TorsionCoset) -> bool:
    if c1.n != c2.n:
        return False
    if saturate_and_canonicalize(c1.directions) != saturate_and_canonicalize(c2.directions):
        return False
    return coset_contains_point(c1, c2.translate) and coset_contains_point(c2, c1.translate)
