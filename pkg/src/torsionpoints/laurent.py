"""Sparse Laurent polynomials over Q or over a cyclotomic field, and torsion points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CyclotomicElement, exponent_sum_is_zero, reduce_fractions
from .pigeonhole import TorsionDecomposition

Exponent = tuple[int, ...]


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TorsionPoint:
    """The point (zeta_N^a_1, ..., zeta_N^a_n) of exact order N."""

    N: int
    a: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"order must be positive, got {self.N}")
        if any(not 0 <= x < self.N for x in self.a):
            raise ValueError(f"exponents {self.a} not reduced mod {self.N}")
        if gcd(self.N, *self.a) != 1:
            raise ValueError(f"{self.a} does not have exact order {self.N}; use canonicalize")

    @property
    def n(self) -> int:
        return len(self.a)

    def conjugate(self, u: int) -> "TorsionPoint":
        return TorsionPoint(self.N, tuple(u * x % self.N for x in self.a))

    def galois_orbit(self) -> list["TorsionPoint"]:
        return sorted({self.conjugate(u) for u in range(1, self.N + 1) if gcd(u, self.N) == 1})


def canonicalize(N: int, a: Sequence[int]) -> TorsionPoint:
    """Rewrite zeta_N^a at its exact order."""
    if N < 1:
        raise ValueError(f"order must be positive, got {N}")
    a = [x % N for x in a]
    g = gcd(N, *a)
    M = N // g
    return TorsionPoint(M, tuple((x // g) % M for x in a))


def _coerce_coeff(c, modulus):
    if modulus is None:
        if isinstance(c, CyclotomicElement):
            raise TypeError("cyclotomic coefficient in a polynomial over Q")
        return Fraction(c)
    if isinstance(c, CyclotomicElement):
        if c.modulus != modulus:
            c = c.lift(modulus)
        return c
    return CyclotomicElement.rational(modulus, c)


class LaurentPolynomial:
    """Finitely supported map exponent vector -> nonzero coefficient.

    ``modulus`` is None for rational coefficients, otherwise m for
    coefficients in Q(zeta_m).
    """

    __slots__ = ("nvars", "modulus", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | Iterable = (), modulus=None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        self.modulus = modulus
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, object] = {}
        for exps, c in items:
            exps = tuple(int(x) for x in exps)
            if len(exps) != nvars:
                raise DimensionError(f"exponent {exps} has length {len(exps)}, expected {nvars}")
            c = _coerce_coeff(c, modulus)
            acc[exps] = acc[exps] + c if exps in acc else c
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def gens(cls, nvars: int) -> list["LaurentPolynomial"]:
        return [
            cls(nvars, {tuple(int(i == j) for j in range(nvars)): 1}) for i in range(nvars)
        ]

    @classmethod
    def constant(cls, nvars: int, value, modulus=None) -> "LaurentPolynomial":
        return cls(nvars, {(0,) * nvars: value}, modulus)

    @property
    def terms(self) -> dict[Exponent, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Laurent total degree: max over terms of sum |v_i|."""
        return max((sum(abs(x) for x in v) for v in self._terms), default=0)

    def span(self) -> int:
        """max exponent - min exponent of a univariate polynomial (0 if empty)."""
        if self.nvars != 1:
            raise DimensionError("span is defined for univariate polynomials")
        if not self._terms:
            return 0
        exps = [v[0] for v in self._terms]
        return max(exps) - min(exps)

    # arithmetic

    def _common(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise DimensionError(f"nvars {self.nvars} vs {other.nvars}")
            if self.modulus == other.modulus:
                return self, other
            m = _lcm(self.modulus or 1, other.modulus or 1)
            return self.with_modulus(m), other.with_modulus(m)
        if isinstance(other, CyclotomicElement):
            m = _lcm(self.modulus or 1, other.modulus)
            return self.with_modulus(m), LaurentPolynomial.constant(self.nvars, other, m)
        return self, LaurentPolynomial.constant(self.nvars, other, self.modulus)

    def with_modulus(self, m: int) -> "LaurentPolynomial":
        if self.modulus == m:
            return self
        return LaurentPolynomial(self.nvars, self._terms, m)

    def __add__(self, other):
        try:
            p, q = self._common(other)
        except TypeError:
            return NotImplemented
        terms = dict(p._terms)
        for v, c in q._terms.items():
            terms[v] = terms[v] + c if v in terms else c
        return LaurentPolynomial(self.nvars, terms, p.modulus)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.nvars, {v: -c for v, c in self._terms.items()}, self.modulus)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            p, q = self._common(other)
        except TypeError:
            return NotImplemented
        terms: dict[Exponent, object] = {}
        for v, c in p._terms.items():
            for w, d in q._terms.items():
                u = tuple(x + y for x, y in zip(v, w))
                terms[u] = terms[u] + c * d if u in terms else c * d
        return LaurentPolynomial(self.nvars, terms, p.modulus)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((v, c),) = self._terms.items()
            if self.modulus is not None:
                raise ValueError("inverting cyclotomic coefficients is not supported")
            return LaurentPolynomial(self.nvars, {tuple(-k * x for x in v): 1 / c ** (-k)})
        result = LaurentPolynomial.constant(self.nvars, 1, self.modulus)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.modulus != other.modulus:
            try:
                p, q = self._common(other)
            except TypeError:
                return False
            return p._terms == q._terms
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, self.modulus, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        names = ["X", "Y", "Z"] if self.nvars <= 3 else [f"X{i}" for i in range(self.nvars)]
        if self.nvars == 1:
            names = ["x"]
        parts = []
        for v, c in self._terms.items():
            mono = "*".join(
                names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(v) if x
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def evaluate_at_roots(P: LaurentPolynomial, m: int, exps: Sequence[int]) -> CyclotomicElement:
    """P(zeta_m^exps_1, ..., zeta_m^exps_n) in Q(zeta_m') with m' = lcm(m, P.modulus)."""
    if len(exps) != P.nvars:
        raise DimensionError(f"point has {len(exps)} coordinates, polynomial has {P.nvars} variables")
    if P.modulus is None:
        buckets = [Fraction(0)] * m
        for v, c in P.items():
            buckets[sum(x * y for x, y in zip(v, exps)) % m] += c
        return CyclotomicElement._canonical(m, reduce_fractions(m, buckets))
    target = _lcm(m, P.modulus)
    scale = target // m
    buckets = [Fraction(0)] * target
    for v, c in P.items():
        shift = scale * sum(x * y for x, y in zip(v, exps))
        lifted = c.lift(target)
        for i, ci in enumerate(lifted.coeffs):
            if ci:
                buckets[(i + shift) % target] += ci
    return CyclotomicElement._canonical(target, reduce_fractions(target, buckets))


def evaluate_at_torsion(P: LaurentPolynomial, pt: TorsionPoint) -> CyclotomicElement:
    if P.modulus is not None:
        raise TypeError("evaluate_at_torsion expects rational coefficients")
    return evaluate_at_roots(P, pt.N, pt.a)


def vanishes_at(P: LaurentPolynomial, pt: TorsionPoint) -> bool:
    """P(pt) == 0, decided sparsely; never builds Phi_N, so it scales to large orders."""
    if P.modulus is not None:
        raise TypeError("vanishes_at expects rational coefficients")
    if len(pt.a) != P.nvars:
        raise DimensionError(f"point has {len(pt.a)} coordinates, polynomial has {P.nvars} variables")
    return exponent_sum_is_zero(pt.N, ((sum(x * y for x, y in zip(v, pt.a)), c) for v, c in P.items()))


def _substitute(P: LaurentPolynomial, m: int, shifts: Sequence[int], B: Sequence[Sequence[int]]):
    # X_i <- zeta_m^shifts_i * prod_j y_j^B[i][j]
    n = P.nvars
    if len(B) != n or len(shifts) != n:
        raise DimensionError(f"substitution has {len(B)} rows, polynomial has {n} variables")
    d = len(B[0])
    if d < 1 or any(len(row) != d for row in B):
        raise DimensionError("direction matrix must be rectangular with at least one column")
    if P.modulus is not None and m % P.modulus:
        raise ValueError(f"coefficient modulus {P.modulus} does not divide {m}")
    grouped: dict[Exponent, list] = {}
    for v, c in P.items():
        w = tuple(sum(v[i] * B[i][j] for i in range(n)) for j in range(d))
        root = sum(x * s for x, s in zip(v, shifts))
        grouped.setdefault(w, []).append((root, c))
    terms = {}
    for w, pieces in grouped.items():
        if P.modulus is None:
            terms[w] = CyclotomicElement.from_exponent_sum(m, pieces)
        else:
            step = m // P.modulus
            terms[w] = CyclotomicElement.from_exponent_sum(
                m,
                (
                    (root + i * step, ci)
                    for root, c in pieces
                    for i, ci in enumerate(c.coeffs)
                    if ci
                ),
            )
    return LaurentPolynomial(d, terms, m)


def specialize(P: LaurentPolynomial, dec: TorsionDecomposition) -> LaurentPolynomial:
    """p(x) = P(zeta_e^t_1 x^c_1, ..., zeta_e^t_n x^c_n) over Q(zeta_e)."""
    if P.nvars != len(dec.c):
        raise DimensionError(f"decomposition has {len(dec.c)} coordinates, polynomial has {P.nvars}")
    return _substitute(P, dec.e, dec.t, [[ci] for ci in dec.c])


def is_identically_zero(P: LaurentPolynomial) -> bool:
    return all(
        (c.is_zero() if isinstance(c, CyclotomicElement) else c == 0) for _, c in P.items()
    )


def substitute_monomial_map(
    P: LaurentPolynomial, B: Sequence[Sequence[int]], translate: TorsionPoint
) -> LaurentPolynomial:
    """P(zeta_N^a_1 y^B_1, ..., zeta_N^a_n y^B_n) in d variables over Q(zeta_N)."""
    if P.nvars != translate.n:
        raise DimensionError(f"translate has {translate.n} coordinates, polynomial has {P.nvars}")
    return _substitute(P, translate.N, translate.a, B)
