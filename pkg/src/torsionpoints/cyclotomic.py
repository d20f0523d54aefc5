"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) as the
remainder modulo the m-th cyclotomic polynomial, so two elements are equal
exactly when their coefficient tuples are equal.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import NamedTuple, Sequence


class ModulusMismatchError(ValueError):
    """Operands live in different cyclotomic fields; lift them first."""


class Factorization(NamedTuple):
    value: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=None)
def _small_primes(limit: int = 1000) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Trial-division factorization of a positive integer."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    factors = []
    rest = n

    def strip(p):
        nonlocal rest
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            factors.append((p, e))

    for p in _small_primes():
        if p * p > rest:
            break
        strip(p)
    p = _small_primes()[-1] + 2
    while p * p <= rest:
        strip(p)
        p += 2
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def totient(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result -= result // p
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    # ascending coefficients, den monic
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m in ascending order of degree.

    Obtained by dividing x^m - 1 by Phi_d for every proper divisor d of m.
    """
    if m < 1:
        raise ValueError(f"cyclotomic_polynomial needs m >= 1, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _sparse_tail(m: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    return deg, tuple((j, c) for j, c in enumerate(phi[:-1]) if c)


def reduce_mod_cyclotomic(m: int, coeffs: Sequence) -> list:
    """Remainder of sum coeffs[i] x^i modulo Phi_m, padded to length phi(m)."""
    deg, tail = _sparse_tail(m)
    work = list(coeffs)
    if len(work) < deg:
        work.extend([0] * (deg - len(work)))
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            base = i - deg
            for j, pj in tail:
                work[base + j] -= c * pj
    return work[:deg]


def reduce_fractions(m: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Canonical coefficients of sum coeffs[i] x^i mod Phi_m, computed over the integers."""
    den = 1
    for c in coeffs:
        if c and c.denominator != 1:
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) if c else 0 for c in coeffs]
    reduced = reduce_mod_cyclotomic(m, ints)
    if den == 1:
        return tuple(Fraction(x) for x in reduced)
    return tuple(Fraction(x, den) for x in reduced)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _clear_denominators(coeffs: Sequence[Fraction]) -> tuple[int, list[int]]:
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = den * c.denominator // gcd(den, c.denominator)
    return den, [c.numerator * (den // c.denominator) for c in coeffs]


class CyclotomicElement:
    """An element of Q(zeta_m) in canonical reduced form.

    Immutable. Mixed arithmetic with ints and Fractions is allowed; mixing
    two different moduli raises ModulusMismatchError.
    """

    __slots__ = ("modulus", "coeffs", "_hash")

    def __init__(self, modulus: int, coeffs: Sequence = ()):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus
        self.coeffs: tuple[Fraction, ...] = reduce_fractions(
            modulus, [_as_fraction(c) for c in coeffs]
        )
        self._hash = None

    @classmethod
    def _canonical(cls, modulus: int, coeffs: tuple) -> "CyclotomicElement":
        obj = cls.__new__(cls)
        obj.modulus = modulus
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_exponent_sum(cls, modulus: int, terms) -> "CyclotomicElement":
        """Build sum c * zeta_m^j from (j, c) pairs; j is taken mod m."""
        buckets = [Fraction(0)] * modulus
        for j, c in terms:
            buckets[j % modulus] += c
        return cls._canonical(modulus, reduce_fractions(modulus, buckets))

    @classmethod
    def rational(cls, modulus: int, value) -> "CyclotomicElement":
        return cls(modulus, [value])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def _coerce(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            if other.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"moduli {self.modulus} and {other.modulus} differ; lift to "
                    f"lcm {self.modulus * other.modulus // gcd(self.modulus, other.modulus)}"
                )
            return other
        return CyclotomicElement.rational(self.modulus, other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicElement._canonical(
            self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement._canonical(self.modulus, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclotomicElement):
            try:
                s = _as_fraction(other)
            except TypeError:
                return NotImplemented
            return CyclotomicElement._canonical(self.modulus, tuple(a * s for a in self.coeffs))
        other = self._coerce(other)
        da, a = _clear_denominators(self.coeffs)
        db, b = _clear_denominators(other.coeffs)
        prod = [0] * (len(a) + len(b) - 1)
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in nz_b:
                    prod[i + j] += x * y
        den = da * db
        return CyclotomicElement._canonical(
            self.modulus,
            tuple(Fraction(x, den) for x in reduce_mod_cyclotomic(self.modulus, prod)),
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for roots of unity; use root_power")
        result = CyclotomicElement.rational(self.modulus, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.modulus == other.modulus and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus, self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def lift(self, target: int) -> "CyclotomicElement":
        """Embed into Q(zeta_target) via zeta_m = zeta_target^(target/m)."""
        if target % self.modulus:
            raise ModulusMismatchError(f"{self.modulus} does not divide {target}")
        step = target // self.modulus
        return CyclotomicElement.from_exponent_sum(
            target, ((i * step, c) for i, c in enumerate(self.coeffs) if c)
        )

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else (f"z{self.modulus}" if i == 1 else f"z{self.modulus}^{i}")
            parts.append(f"{c}*{mono}" if mono != "1" else str(c))
        return f"CyclotomicElement({' + '.join(parts) or '0'})"


def root_power(m: int, j: int) -> CyclotomicElement:
    """zeta_m^j in canonical form."""
    return CyclotomicElement.from_exponent_sum(m, [(j, Fraction(1))])


def exponent_sum_is_zero(m: int, terms) -> bool:
    """Decide sum c * zeta_m^j == 0 for sparse (j, c) pairs without building Phi_m.

    With p the smallest prime factor of m: if p^2 | m, the powers zeta_m^r
    (0 <= r < p) are a basis of Q(zeta_m) over Q(zeta_{m/p}), so every residue
    class of j mod p must vanish on its own. Otherwise Q(zeta_m) is Q(zeta_p)
    times the disjoint Q(zeta_{m/p}); splitting zeta_m^j by CRT into
    zeta_p^alpha * zeta_{m/p}^beta, the sum vanishes iff the coefficient
    sums S_alpha in Q(zeta_{m/p}) are all equal.
    """
    acc: dict[int, Fraction] = {}
    for j, c in terms:
        j %= m
        acc[j] = acc.get(j, 0) + c
    acc = {j: c for j, c in acc.items() if c}
    if not acc:
        return True
    if m == 1:
        return False
    p = factorize(m).factors[0][0]
    rest = m // p
    if rest % p == 0:
        classes: dict[int, list] = {}
        for j, c in acc.items():
            classes.setdefault(j % p, []).append((j // p, c))
        return all(exponent_sum_is_zero(rest, part) for part in classes.values())
    s = pow(p, -1, rest) if rest > 1 else 0
    t = (1 - s * p) // rest
    groups: dict[int, list] = {}
    for j, c in acc.items():
        groups.setdefault(j * t % p, []).append((j * s % rest, c))
    last = groups.pop(p - 1, [])
    if len(groups) < p - 1:
        # some S_alpha is empty, so all of them must vanish
        return exponent_sum_is_zero(rest, last) and all(
            exponent_sum_is_zero(rest, part) for part in groups.values()
        )
    negated = [(beta, -c) for beta, c in last]
    return all(exponent_sum_is_zero(rest, part + negated) for part in groups.values())


def arithmetic(op: str,lhs: CyclotomicElement, rhs: CyclotomicElement | None = None):
    if op == "neg":
        return -lhs
    if rhs is None:
        raise ValueError(f"{op} needs two operands")
    if rhs.modulus != lhs.modulus:
        raise ModulusMismatchError(f"moduli {lhs.modulus} and {rhs.modulus} differ")
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown operation {op!r}")


def is_zero(z: CyclotomicElement) -> bool:
    return z.is_zero()


def lift_to_common(*elems: CyclotomicElement) -> list[CyclotomicElement]:
    m = 1
    for z in elems:
        m = m * z.modulus // gcd(m, z.modulus)
    return [z.lift(m) for z in elems]
