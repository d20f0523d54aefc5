import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torsionpoints.cosets import TorsionCoset, coset_contains_point, coset_equal, coset_in_variety
from torsionpoints.laurent import (
    DimensionError,
    LaurentPolynomial,
    TorsionPoint,
    canonicalize,
    evaluate_at_torsion,
)
from torsionpoints.normal_forms import (
    hermite_normal_form,
    identity,
    integer_rank,
    matmul,
    saturate_and_canonicalize,
    smith_normal_form,
)

X, Y = LaurentPolynomial.gens(2)
ORIGIN = TorsionPoint(1, (0, 0))


def random_matrix(rng, rows, cols, lo=-4, hi=4):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def in_rational_span(v, B):
    return Matrix(B).rank() == Matrix([list(r) + [x] for r, x in zip(B, v)]).rank()


def in_integer_span(v, B):
    # x with B x = v over Z, via the Smith form
    snf = smith_normal_form(B)
    w = [sum(p * x for p, x in zip(row, v)) for row in snf.P]
    for i, wi in enumerate(w):
        d = snf.D[i][i] if i < len(snf.D[0]) else 0
        if d == 0 and wi != 0:
            return False
        if d and wi % d:
            return False
    return True


# ------------------------------------------------------------ normal forms


def test_smith_form_against_sympy_and_transforms():
    rng = random.Random(1)
    for _ in range(150):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = random_matrix(rng, r, c, -6, 6)
        snf = smith_normal_form(A)
        assert matmul(matmul(snf.P, A), snf.Q) == snf.D
        assert matmul(snf.P, snf.Pinv) == identity(r)
        assert abs(Matrix(snf.Q).det()) == 1
        diag = snf.diagonal
        nz = [d for d in diag if d]
        assert all(d > 0 for d in nz) and all(b % a == 0 for a, b in zip(nz, nz[1:]))
        expected = [abs(x) for x in sympy_snf(Matrix(A), domain=ZZ).diagonal()]
        assert sorted(diag) == sorted(expected)
        assert integer_rank(A) == Matrix(A).rank()


def test_hermite_form_properties():
    rng = random.Random(2)
    for _ in range(150):
        A = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        H = hermite_normal_form(A)
        assert len(H) == Matrix(A).rank() if any(any(r) for r in A) else H == []
        pivots = [next(j for j, x in enumerate(row) if x) for row in H]
        assert pivots == sorted(set(pivots))
        for i, (row, p) in enumerate(zip(H, pivots)):
            assert row[p] > 0
            assert all(0 <= H[k][p] < row[p] for k in range(i))
        # same row lattice: each side's rows lie in the other's integer span
        At, Ht = [list(c) for c in zip(*A)], [list(c) for c in zip(*H)] if H else None
        if H:
            assert all(in_integer_span(row, Ht) for row in A)
            assert all(in_integer_span(row, At) for row in H)
        assert hermite_normal_form(H) == H


def test_saturation_examples():
    assert saturate_and_canonicalize([[2], [-2]]) == [[1], [-1]]
    B = [[1, 0], [0, 1], [1, 1]]
    assert saturate_and_canonicalize(B) == B
    assert saturate_and_canonicalize(identity(3)) == identity(3)
    assert saturate_and_canonicalize([[-1], [1]]) == [[1], [-1]]
    with pytest.raises(ValueError):
        saturate_and_canonicalize([[0], [0]])


def test_saturation_matches_box_oracle():
    rng = random.Random(3)
    box = range(-3, 4)
    for _ in range(60):
        n, d = rng.randint(2, 3), rng.randint(1, 2)
        B = random_matrix(rng, n, d)
        if integer_rank(B) == 0:
            continue
        S = saturate_and_canonicalize(B)
        assert len(S[0]) == integer_rank(B)
        assert saturate_and_canonicalize(S) == S
        for v in itertools.product(box, repeat=n):
            assert in_integer_span(v, S) == in_rational_span(v, B), (B, S, v)


# ------------------------------------------------------------------ cosets


def test_make_canonicalizes():
    c = TorsionCoset.make(TorsionPoint(6, (1, 5)), [[-2], [2]])
    assert c.directions == ((1,), (-1,))
    assert c.translate == ORIGIN
    c = TorsionCoset.make(TorsionPoint(4, (1, 3)), [[1], [1]])
    assert c.translate == TorsionPoint(2, (0, 1))
    assert TorsionCoset.make(TorsionPoint(5, (2, 3)), identity(2)).translate == ORIGIN


def test_contains_point_examples():
    anti = TorsionCoset.make(ORIGIN, [[1], [-1]])
    assert coset_contains_point(anti, TorsionPoint(6, (1, 5)))
    assert not coset_contains_point(anti, TorsionPoint(6, (1, 1)))
    c = TorsionCoset.make(TorsionPoint(12, (5, 2)), [[1], [2]])
    assert coset_contains_point(c, c.translate)
    assert coset_contains_point(c, TorsionPoint(12, (5, 2)))
    with pytest.raises(DimensionError):
        coset_contains_point(anti, TorsionPoint(3, (1,)))


def test_contains_point_matches_parametrization():
    rng = random.Random(4)
    for _ in range(40):
        B = random_matrix(rng, 2, 1, -3, 3)
        if not any(r[0] for r in B):
            continue
        gN = rng.randint(1, 6)
        g = canonicalize(gN, (1, rng.randrange(gN)))
        c = TorsionCoset.make(g, B)
        for N in range(1, 13):
            # points g * (zeta_L^x)^B; entries of B are at most 3 in size, so
            # L = 6 * lcm(N, g.N) reaches every parameter with image of order N
            L = 6 * N * g.N // gcd(N, g.N)
            covered = set()
            for x in range(L):
                a = [(gi * (L // g.N) + x * b[0]) % L for gi, b in zip(g.a, B)]
                s = gcd(L, *a)
                if L // s == N:
                    covered.add(tuple(v // s for v in a))
            for a in itertools.product(range(N), repeat=2):
                if gcd(N, *a) == 1:
                    assert coset_contains_point(c, TorsionPoint(N, a)) == (a in covered), (B, g, a)


def test_coset_in_variety_examples():
    anti = TorsionCoset.make(ORIGIN, [[1], [-1]])
    assert coset_in_variety(anti, [X * Y - 1])
    assert coset_in_variety(TorsionCoset.make(TorsionPoint(2, (0, 1)), [[1], [1]]), [X + Y])
    assert not coset_in_variety(anti, [X + Y - 1])
    assert not coset_in_variety(anti, [X * Y - 1, X - 1])


def test_coset_equal_examples():
    a = TorsionCoset.make(TorsionPoint(2, (0, 1)), [[1], [1]])
    b = TorsionCoset.make(TorsionPoint(6, (1, 4)), [[1], [1]])
    assert coset_equal(a, b) and a == b
    assert coset_equal(TorsionCoset.make(ORIGIN, [[1], [-1]]), TorsionCoset.make(ORIGIN, [[-1], [1]]))
    assert not coset_equal(TorsionCoset.make(ORIGIN, [[1], [-1]]), TorsionCoset.make(ORIGIN, [[1], [1]]))
    assert not coset_equal(a, TorsionCoset.make(ORIGIN, [[1], [1]]))


def test_coset_equal_is_an_equivalence_and_matches_identity():
    rng = random.Random(5)
    cosets = []
    for _ in range(60):
        B = [[rng.choice([1, 2, -1])], [rng.randint(-2, 2)]]
        N = rng.randint(1, 6)
        cosets.append(TorsionCoset.make(TorsionPoint(N, (1 % N, rng.randrange(N))), B))
    for a in cosets:
        assert coset_equal(a, a)
        for b in cosets:
            assert coset_equal(a, b) == coset_equal(b, a) == (a == b)
            for c in cosets[:15]:
                if coset_equal(a, b) and coset_equal(b, c):
                    assert coset_equal(a, c)


def test_galois_orbit_of_cosets():
    c = TorsionCoset.make(TorsionPoint(3, (0, 1)), [[1], [0]])
    assert {x.translate for x in c.galois_orbit()} == {TorsionPoint(3, (0, 1)), TorsionPoint(3, (0, 2))}


def test_points_on_contained_cosets_are_zeros():
    systems = [[X * Y - 1], [X + Y], [X**2 - Y**2], [X * Y**2 - 1, X**2 * Y**4 - 1], [X**3 * Y - X**3]]
    directions = [[[1], [-1]], [[1], [1]], [[1], [0]], [[0], [1]], [[2], [-1]], [[1], [2]]]
    translates = [TorsionPoint(N, a) for N in range(1, 5) for a in itertools.product(range(N), repeat=2) if gcd(N, *a) == 1]
    hits = 0
    for S in systems:
        for B in directions:
            for g in translates:
                c = TorsionCoset.make(g, B)
                if not coset_in_variety(c, S):
                    continue
                hits += 1
                for N in range(1, 21):
                    for a in itertools.product(range(N), repeat=2):
                        if gcd(N, *a) != 1:
                            continue
                        pt = TorsionPoint(N, a)
                        if coset_contains_point(c, pt):
                            assert all(evaluate_at_torsion(P, pt).is_zero() for P in S)
    assert hits >= len(systems)


def test_coefficients_never_float():
    c = TorsionCoset.make(ORIGIN, [[1], [-1]])
    assert coset_in_variety(c, [LaurentPolynomial(2, {(1, 1): Fraction(1, 3), (0, 0): Fraction(-1, 3)})])
