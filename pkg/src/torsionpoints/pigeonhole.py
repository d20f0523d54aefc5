"""Short multiples of exponent vectors modulo N and the torsion decomposition.

A torsion point of exact order N is written zeta^a with gcd(a, N) = 1.
Some multiple k*a is short modulo N (max-norm at most N^(1 - 1/(2n)) once
N > 4^n); from it one gets e | N, a new primitive N-th root zeta^f and a
short integer vector c with

    a_i = f*c_i + (N/e)*t_i  (mod N),

i.e. each coordinate is an e-th root of unity times a small power of one
primitive N-th root.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod
from typing import Sequence

import numpy as np

from .cyclotomic import factorize

# k*a_i must stay inside int64
_NUMPY_LIMIT = 1 << 31
# orders small enough for a full (x, k) table of |centered(k*x)|
_TABLE_LIMIT = 1024


class NotExactOrderError(ValueError):
    """gcd(a_1, ..., a_n, N) != 1: canonicalize the point to its exact order first."""


def integer_root(x: int, k: int) -> int:
    """floor(x^(1/k)) for x >= 0, exactly."""
    if x < 0 or k < 1:
        raise ValueError("integer_root needs x >= 0, k >= 1")
    if x < 2 or k == 1:
        return x
    r = 1 << -(-x.bit_length() // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def norm_bound(N: int, n: int) -> int:
    """floor(N^(1 - 1/(2n)))."""
    return integer_root(N ** (2 * n - 1), 2 * n)


def below_bound(value: int, N: int, n: int, divisor: int = 1) -> bool:
    """Exact test of value <= N^(1 - 1/(2n)) / divisor."""
    return (value * divisor) ** (2 * n) <= N ** (2 * n - 1)


def guaranteed_threshold(n: int) -> int:
    """Smallest N for which a short multiple is guaranteed: 2^(2n) + 1."""
    return 4**n + 1


def centered(x: int, N: int) -> int:
    """Residue of x in (-N/2, N/2]."""
    r = x % N
    return r - N if 2 * r > N else r


def _check_primitive(a: Sequence[int], N: int) -> None:
    if gcd(N, *a) != 1:
        raise NotExactOrderError(
            f"gcd({', '.join(map(str, a))}, {N}) != 1; reduce the point to its exact order first"
        )


@dataclass(frozen=True)
class ShortMultiple:
    k: int
    b: tuple[int, ...]
    N: int
    bound_met: bool

    @property
    def norm(self) -> int:
        return max(abs(x) for x in self.b)


@lru_cache(maxsize=16)
def _distance_table(N: int) -> np.ndarray:
    # row x, column k-1: distance of k*x from 0 mod N
    res = np.outer(np.arange(N, dtype=np.int32), np.arange(1, N, dtype=np.int32)) % N
    return np.minimum(res, N - res)


def short_multiple(a: Sequence[int], N: int) -> ShortMultiple:
    """Minimal max-norm centered residue of k*a mod N over k in [1, N-1].

    Ties go to the smallest k.
    """
    if N < 2:
        raise ValueError(f"short_multiple needs N >= 2, got {N}")
    a = [x % N for x in a]
    _check_primitive(a, N)
    if N <= _TABLE_LIMIT:
        best_k = int(np.argmin(_distance_table(N)[a].max(axis=0))) + 1
    elif N < _NUMPY_LIMIT:
        ks = np.arange(1, N, dtype=np.int64)
        res = np.outer(ks, np.asarray(a, dtype=np.int64)) % N
        norms = np.minimum(res, N - res).max(axis=1)
        best_k = int(np.argmin(norms)) + 1
    else:
        best_k, best_norm = 0, N
        for k in range(1, N):
            norm = max(min(r, N - r) for r in (k * x % N for x in a))
            if norm < best_norm:
                best_k, best_norm = k, norm
                if norm == 1:
                    break
    b = tuple(centered(best_k * x, N) for x in a)
    norm = max(abs(x) for x in b)
    return ShortMultiple(best_k, b, N, norm <= norm_bound(N, len(a)))


def unit_adjust(k: int, N: int) -> tuple[int, int]:
    """Return (e, l) with e = gcd(k, N), gcd(l, N) = 1 and l*e = k (mod N).

    l = k/e + f*N/e where f is the product of the primes dividing N but not k/e.
    """
    if N < 2:
        raise ValueError(f"unit_adjust needs N >= 2, got {N}")
    k = k % N
    if k == 0:
        raise ValueError("k = 0 (mod N) has no unit adjustment")
    e = gcd(k, N)
    q = k // e
    f = prod(p for p, _ in factorize(N).factors if q % p)
    l = (q + f * (N // e)) % N
    assert gcd(l, N) == 1 and (l * e - k) % N == 0
    return e, l


@dataclass(frozen=True)
class TorsionDecomposition:
    N: int
    e: int
    f: int
    c: tuple[int, ...]
    t: tuple[int, ...]
    k: int = 0
    b: tuple[int, ...] = ()

    @property
    def bound_met(self) -> bool:
        n = len(self.c)
        return below_bound(self.e, self.N, n) and below_bound(
            max(abs(x) for x in self.c), self.N, n, self.e
        )


def decompose(a: Sequence[int], N: int) -> TorsionDecomposition:
    a = [x % N for x in a]
    sm = short_multiple(a, N)
    e, l = unit_adjust(sm.k, N)
    assert all(x % e == 0 for x in sm.b)
    c = tuple(x // e for x in sm.b)
    f = pow(l, -1, N)
    step = N // e
    t = []
    for ai, ci in zip(a, c):
        rem = (ai - f * ci) % N
        assert rem % step == 0
        t.append((rem // step) % e)
    dec = TorsionDecomposition(N, e, f, c, tuple(t), sm.k, sm.b)
    assert verify_decomposition(dec, a)
    return dec


def verify_decomposition(dec: TorsionDecomposition, a: Sequence[int]) -> bool:
    """Check the decomposition invariants against a with integer arithmetic only."""
    N, e, f = dec.N, dec.e, dec.f
    n = len(a)
    if len(dec.c) != n or len(dec.t) != n or n == 0:
        return False
    if e < 1 or N % e or gcd(f, N) != 1:
        return False
    if any(not 0 <= ti < e for ti in dec.t):
        return False
    step = N // e
    if any((ai - f * ci - step * ti) % N for ai, ci, ti in zip(a, dec.c, dec.t)):
        return False
    if N >= guaranteed_threshold(n) and not dec.bound_met:
        return False
    return True
