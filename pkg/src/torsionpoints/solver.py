"""Torsion points and one-dimensional torsion cosets on a subvariety of G_m^n.

Orders N are scanned exactly up to a cap. Every point found is pushed through
the pigeonhole decomposition; when all defining polynomials specialize to the
zero polynomial the point lies on a certified torsion coset, otherwise it is
recorded as an isolated point. ``order_bound`` gives the order beyond which
every torsion point on V is certified, which is what makes a scan complete.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .cosets import TorsionCoset, coset_contains_point, coset_in_variety
from .cyclotomic import divisors, factorize, totient
from .laurent import (
    DimensionError,
    LaurentPolynomial,
    TorsionPoint,
    canonicalize,
    evaluate_at_torsion,
    is_identically_zero,
    specialize,
    vanishes_at,
)
from .pigeonhole import decompose

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class VarietySystem:
    n: int
    polys: tuple[LaurentPolynomial, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient dimension must be positive")
        if not self.polys:
            raise ValueError("a variety needs at least one polynomial")
        object.__setattr__(self, "polys", tuple(self.polys))
        for i, P in enumerate(self.polys):
            if P.nvars != self.n:
                raise DimensionError(f"polynomial {i} has {P.nvars} variables, expected {self.n}")
            if P.modulus is not None:
                raise TypeError(f"polynomial {i} must have rational coefficients")
            if P.is_zero():
                raise ValueError(f"polynomial {i} is zero")

    @property
    def d_max(self) -> int:
        return max(P.degree() for P in self.polys)

    def __iter__(self):
        return iter(self.polys)


@dataclass
class TorsionReport:
    isolated_points: list[TorsionPoint]
    cosets: list[TorsionCoset]
    scanned_cap: int
    certified_bound: int | None
    complete: bool
    diagnostics: list[str] = field(default_factory=list)
    budget_exceeded: bool = False


# ---------------------------------------------------------------- orbits


def orbit_count(N: int, n: int) -> int:
    """Number of Galois orbits of exact-order-N points in G_m^n (the action is free)."""
    jordan = N**n
    for p, _ in factorize(N).factors:
        jordan -= jordan // p**n
    return jordan // totient(N)


def orbit_representatives(N: int, n: int) -> list[tuple[int, ...]]:
    """Lexicographically smallest element of each unit-orbit of primitive vectors mod N."""
    return [tuple(int(x) for x in row) for row in orbit_representative_array(N, n)]


def orbit_representative_array(N: int, n: int) -> np.ndarray:
    """Orbit representatives as a sorted (R, n) int64 array.

    The smallest element of an orbit starts with zeros, then the divisor
    g = gcd(first nonzero entry, N); the tail is then minimal under the units
    fixing g, i.e. u = 1 (mod N/g).
    """
    if N == 1:
        return np.zeros((1, n), dtype=np.int64)
    if n == 2:
        return _representatives_plane(N)
    units = np.array([u for u in range(2, N) if gcd(u, N) == 1], dtype=np.int64)
    blocks = []
    for lead in range(n):
        k = n - lead - 1
        tails = _all_vectors(N, k)
        for g in divisors(N)[:-1]:
            T = tails[np.gcd.reduce(tails, axis=1, initial=g) == 1]
            stab = units[units % (N // g) == 1]
            for u in stab:
                if not len(T):
                    break
                T = T[~_lex_less(u * T % N, T)]
            block = np.zeros((len(T), n), dtype=np.int64)
            block[:, lead] = g
            block[:, lead + 1 :] = T
            blocks.append(block)
    reps = np.concatenate(blocks)
    return reps[np.lexsort(reps.T[::-1])]


def _representatives_plane(N: int) -> np.ndarray:
    # Representatives (g, t), g | N, g < N, gcd(g, t) = 1. Write t = h*s with
    # h = gcd(t, N), m = N/h. The units u = 1 (mod N/g) act on s in U(m) through
    # the kernel of U(m) -> U(q), q = gcd(m, N/g), so each orbit is a residue
    # class r in U(q) and its smallest member is the first s = r (mod q) prime to m.
    rows = [np.array([[0, 1], [1, 0]], dtype=np.int64)]
    divs = divisors(N)
    for g in divs[:-1]:
        for h in divs[:-1]:
            if gcd(g, h) != 1:
                continue
            m = N // h
            q = gcd(m, N // g)
            r = np.arange(q, dtype=np.int64)
            r = r[np.gcd(r, q) == 1] if q > 1 else np.ones(1, dtype=np.int64)
            s = r.copy()
            todo = np.gcd(s, m) != 1
            while todo.any():
                s[todo] += q
                todo = np.gcd(s, m) != 1
            block = np.empty((len(s), 2), dtype=np.int64)
            block[:, 0] = g
            block[:, 1] = h * s
            rows.append(block)
    reps = np.concatenate(rows)
    return reps[np.lexsort(reps.T[::-1])]


def _all_vectors(N: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((N,) * k, dtype=np.int64).reshape(k, -1)
    return grids.T.copy()


def _lex_less(W: np.ndarray, T: np.ndarray) -> np.ndarray:
    diff = W != T
    first = diff.argmax(axis=1)
    rows = np.arange(len(T))
    return diff.any(axis=1) & (W[rows, first] < T[rows, first])


# ------------------------------------------------------- membership tests


def _is_probable_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class _ModularFilter:
    """Image of Z[1/D][zeta_N] in F_p for a prime p = 1 (mod N), p < 2^31.

    A nonzero residue proves the exact value is nonzero; a zero residue is
    re-checked in exact cyclotomic arithmetic. p < 2^31 keeps every product
    of two residues inside int64.
    """

    def __init__(self, N: int):
        if N >= 1 << 29:
            raise ValueError("order too large for the modular filter")
        k = (1 << 31) // N - 1
        while not _is_probable_prime(k * N + 1):
            k -= 1
        p = k * N + 1
        primes = factorize(N).primes()
        h = 2
        while True:
            g = pow(h, (p - 1) // N, p)
            if all(pow(g, N // q, p) != 1 for q in primes):
                break
            h += 1
        self.N, self.p = N, p
        powers = np.empty(N, dtype=np.int64)
        x = 1
        for j in range(N):
            powers[j] = x
            x = x * g % p
        self.powers = powers

    def _residues(self, P: LaurentPolynomial):
        p = self.p
        exps, coeffs = [], []
        for v, c in P.items():
            if c.denominator % p == 0:
                return None
            exps.append(v)
            coeffs.append(c.numerator * pow(c.denominator, -1, p) % p)
        return np.array(exps, dtype=np.int64), coeffs

    def maybe_zero(self, P: LaurentPolynomial, A: np.ndarray) -> np.ndarray:
        """Boolean mask over the rows of A (exponent vectors mod N)."""
        res = self._residues(P)
        if res is None:
            return np.ones(len(A), dtype=bool)
        V, coeffs = res
        E = (A @ (V.T % self.N)) % self.N
        total = np.zeros(len(A), dtype=np.int64)
        for t, c in enumerate(coeffs):
            total = (total + c * self.powers[E[:, t]]) % self.p
        return total == 0


@lru_cache(maxsize=64)
def _filter(N: int) -> _ModularFilter:
    return _ModularFilter(N)


def _candidates(system: VarietySystem, N: int, A: np.ndarray) -> np.ndarray:
    mask = np.ones(len(A), dtype=bool)
    if N < 3 or N >= 1 << 29:
        return mask
    flt = _filter(N)
    for P in system.polys:
        idx = np.flatnonzero(mask)
        if not len(idx):
            break
        mask[idx] = flt.maybe_zero(P, A[idx])
    return mask


def on_variety(system: VarietySystem, pt: TorsionPoint) -> bool:
    """Exact membership test; the modular screen only short-circuits nonzero values."""
    if pt.n != system.n:
        raise DimensionError(f"point has {pt.n} coordinates, system has {system.n}")
    if not _candidates(system, pt.N, np.array([pt.a], dtype=np.int64))[0]:
        return False
    return all(vanishes_at(P, pt) for P in system.polys)


# ---------------------------------------------------------------- oracle


def brute_force_torsion(system: VarietySystem, cap: int, expand: bool = True) -> list[TorsionPoint]:
    """Every torsion point of order <= cap on V by direct exact evaluation.

    Deliberately uses the dense evaluator rather than the solver's sparse
    zero test, so the two paths check each other.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    found = []
    for N in range(1, cap + 1):
        for a in orbit_representatives(N, system.n):
            pt = TorsionPoint(N, a)
            if all(evaluate_at_torsion(P, pt).is_zero() for P in system.polys):
                found.extend(pt.galois_orbit() if expand else [pt])
    return found


# ----------------------------------------------------------- certificates


def coset_certificate(system: VarietySystem, pt: TorsionPoint) -> TorsionCoset | None:
    """The torsion coset through pt given by its decomposition, if V contains it."""
    if pt.n != system.n:
        raise DimensionError(f"point has {pt.n} coordinates, system has {system.n}")
    if not on_variety(system, pt):
        raise ValueError(f"{pt} does not lie on the variety")
    if pt.N == 1:
        return None
    dec = decompose(pt.a, pt.N)
    if not all(is_identically_zero(specialize(P, dec)) for P in system.polys):
        return None
    coset = TorsionCoset.make(canonicalize(dec.e, dec.t), [[c] for c in dec.c])
    assert coset_contains_point(coset, pt)
    assert coset_in_variety(coset, system)
    return coset


# ------------------------------------------------------------ order bound

_EULER_GAMMA_EXP_HI = Fraction(17810724179902, 10**13)  # e^gamma = 1.78107241799019...
_LN2_LO = Fraction(693147180559945, 10**15)
_LN2_HI = Fraction(693147180559946, 10**15)
_LOG_SLACK = Fraction(1, 10**9)


def _log_bounds(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # float log is accurate to a few ulps; the slack dwarfs that
    return (
        Fraction(math.log(float(lo))) - _LOG_SLACK,
        Fraction(math.log(float(hi))) + _LOG_SLACK,
    )


def fails_bound(N: int, d: int, n: int) -> bool:
    """phi(N) <= 2 d N^(1 - 1/(2n)), decided exactly."""
    return totient(N) ** (2 * n) <= (2 * d) ** (2 * n) * N ** (2 * n - 1)


def analytic_cutoff(d: int, n: int) -> int:
    """A power of two N0 such that phi(N) > 2 d N^(1-1/(2n)) for every N >= N0.

    Uses phi(N) > N / (e^gamma L + 3/L), L = log log N (N >= 3). Past N0 the
    ratio N^(1/(2n)) / (e^gamma L + 3/L) is increasing once L log N > 2n, so
    checking N0 itself with outward-rounded bounds suffices.
    """
    j = 4
    while True:
        ln_lo, ln_hi = j * _LN2_LO, j * _LN2_HI
        L_lo, L_hi = _log_bounds(ln_lo, ln_hi)
        if L_lo > 0 and L_lo * ln_lo > 2 * n:
            den_hi = _EULER_GAMMA_EXP_HI * L_hi + 3 / L_lo
            if Fraction(2**j) > (2 * d * den_hi) ** (2 * n):
                return 2**j
        j += 1


def _primes_upto(m: int) -> np.ndarray:
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(m) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def _totient_block(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    vals = np.arange(lo, hi, dtype=np.int64)
    phi = vals.copy()
    rem = vals.copy()
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        start = (-lo) % p
        phi[start::p] -= phi[start::p] // p
        pk = p
        while pk < hi:
            s = (-lo) % pk
            rem[s::pk] //= p
            pk *= p
    big = rem > 1
    phi[big] -= phi[big] // rem[big]
    return phi


def largest_failing_order(d: int, n: int, cutoff: int, block: int = 1 << 20) -> int:
    """Largest N < cutoff with phi(N) <= 2 d N^(1-1/(2n)); 0 if none."""
    primes = _primes_upto(math.isqrt(cutoff) + 1)
    hi = cutoff
    while hi > 1:
        lo = max(1, hi - block)
        phi = _totient_block(lo, hi, primes)
        N = np.arange(lo, hi, dtype=np.float64)
        # float screen only discards orders that pass by a wide margin
        margin = np.log(phi.astype(np.float64)) - math.log(2 * d) - (1 - 1 / (2 * n)) * np.log(N)
        for idx in np.flatnonzero(margin <= 1e-6)[::-1]:
            cand = lo + int(idx)
            if int(phi[idx]) ** (2 * n) <= (2 * d) ** (2 * n) * cand ** (2 * n - 1):
                return cand
        hi = lo
    return 0


@lru_cache(maxsize=None)
def order_bound_for(d: int, n: int) -> int:
    if d == 0:
        return 1
    cutoff = analytic_cutoff(d, n)
    return largest_failing_order(d, n, cutoff) + 1


def order_bound(system: VarietySystem) -> int:
    """M such that every point of order >= M on V lies on a certified coset in V."""
    return order_bound_for(system.d_max, system.n)


# ------------------------------------------------------------------ solve


def _scan_order(system: VarietySystem, N: int) -> tuple[list[TorsionPoint], list[TorsionCoset]]:
    isolated, cosets = [], []
    reps = orbit_representative_array(N, system.n)
    for row in reps[_candidates(system, N, reps)]:
        pt = TorsionPoint(N, tuple(int(x) for x in row))
        if not all(vanishes_at(P, pt) for P in system.polys):
            continue
        coset = coset_certificate(system, pt)
        if coset is None:
            isolated.append(pt)
        else:
            cosets.append(coset)
    return isolated, cosets


def _plan(orders: Iterable[int], n: int, npolys: int, budget: int, used: int):
    chosen = []
    for N in orders:
        cost = orbit_count(N, n) * npolys
        if used + cost > budget:
            return chosen, used, True
        chosen.append(N)
        used += cost
    return chosen, used, False


def _run(system, orders, jobs):
    if jobs > 1 and len(orders) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_order, itertools.repeat(system), orders, chunksize=4))
    return [_scan_order(system, N) for N in orders]


def solve(
    system: VarietySystem,
    cap_override: int | None = None,
    probe: int | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> TorsionReport:
    M = order_bound(system)
    cap = M if cap_override is None else min(cap_override, M)
    diagnostics = []
    orders, used, exceeded = _plan(range(1, cap + 1), system.n, len(system.polys), budget, 0)
    scanned = orders[-1] if orders else 0
    if exceeded:
        diagnostics.append(
            f"evaluation budget {budget} exhausted after order {scanned} (target cap {cap})"
        )
    probe_orders: list[int] = []
    if probe is not None and probe > cap and not exceeded:
        probe_orders, used, probe_cut = _plan(
            range(cap + 1, probe + 1), system.n, len(system.polys), budget, used
        )
        if probe_cut:
            diagnostics.append(f"probe stopped at order {probe_orders[-1] if probe_orders else cap}")
    log.info("scanning orders 1..%d, probing %d more", scanned, len(probe_orders))

    results = _run(system, orders + probe_orders, jobs)
    isolated_reps: list[TorsionPoint] = []
    found: set[TorsionCoset] = set()
    for N, (iso, cos) in zip(orders + probe_orders, results):
        if N <= scanned:
            isolated_reps.extend(iso)
        found.update(cos)

    # V is defined over Q, so Galois conjugates of certified cosets lie in V too
    cosets = sorted({c for coset in found for c in coset.galois_orbit()})
    isolated = sorted(
        {
            q
            for pt in isolated_reps
            if not any(coset_contains_point(c, pt) for c in cosets)
            for q in pt.galois_orbit()
        }
    )
    complete = not exceeded and (cap_override is None or cap_override >= M)
    return TorsionReport(
        isolated_points=isolated,
        cosets=cosets,
        scanned_cap=scanned,
        certified_bound=M,
        complete=complete,
        diagnostics=diagnostics,
        budget_exceeded=exceeded,
    )


def covered_points(report: TorsionReport, n: int, cap: int) -> set[TorsionPoint]:
    """All points of order <= cap that the report lists or places on a coset."""
    isolated = set(report.isolated_points)
    covered = set()
    for N in range(1, cap + 1):
        for a in itertools.product(range(N), repeat=n):
            if gcd(N, *a) != 1:
                continue
            pt = TorsionPoint(N, a)
            if pt in isolated or any(coset_contains_point(c, pt) for c in report.cosets):
                covered.add(pt)
    return covered
