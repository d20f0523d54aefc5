import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from torsionpoints.pigeonhole import (
    NotExactOrderError,
    TorsionDecomposition,
    centered,
    decompose,
    integer_root,
    guaranteed_threshold,
    norm_bound,
    short_multiple,
    unit_adjust,
    verify_decomposition,
)


def brute_min_norm(a, N):
    best = None
    for k in range(1, N):
        b = [centered(k * x, N) for x in a]
        norm = max(abs(x) for x in b)
        if best is None or norm < best[0]:
            best = (norm, k, tuple(b))
    return best


def test_integer_root_is_exact_floor():
    for x in range(0, 5000):
        for k in (1, 2, 3, 4):
            r = integer_root(x, k)
            assert r**k <= x < (r + 1) ** k


def test_norm_bound_values():
    assert norm_bound(17, 2) == 8
    assert norm_bound(30, 1) == 5
    assert guaranteed_threshold(2) == 17


def test_short_multiple_examples():
    sm = short_multiple((1, 4), 17)
    assert (sm.k, sm.b, sm.norm, sm.bound_met) == (1, (1, 4), 4, True)
    sm = short_multiple((1, 7), 15)
    assert (sm.k, sm.b, sm.norm) == (2, (2, -1), 2)
    for N in (5, 12, 101):
        sm = short_multiple((1, 1, 1), N)
        assert (sm.k, sm.b) == (1, (1, 1, 1))


def test_short_multiple_rejects_non_primitive():
    with pytest.raises(NotExactOrderError):
        short_multiple((2, 4), 6)
    with pytest.raises(ValueError):
        short_multiple((1,), 1)


def test_short_multiple_matches_brute_force_oracle():
    for N in range(2, 60):
        for a in itertools.product(range(N), repeat=2):
            if gcd(N, *a) != 1:
                continue
            sm = short_multiple(a, N)
            norm, k, b = brute_min_norm(a, N)
            assert (sm.norm, sm.k, sm.b) == (norm, k, b)


def test_short_multiple_bound_n1_exhaustive():
    for N in range(5, 501):
        bound = norm_bound(N, 1)
        for a in range(1, N):
            if gcd(a, N) == 1:
                sm = short_multiple((a,), N)
                assert sm.bound_met and sm.norm <= bound, (a, N)


def test_short_multiple_below_threshold_still_minimal():
    # N <= 16 for n = 2: no guarantee, but the true minimum is returned
    for N in range(2, 17):
        for a in itertools.product(range(N), repeat=2):
            if gcd(N, *a) == 1:
                sm = short_multiple(a, N)
                assert sm.norm == brute_min_norm(a, N)[0]
                assert sm.bound_met == (sm.norm <= norm_bound(N, 2))


def test_unit_adjust_examples():
    assert unit_adjust(4, 6) == (2, 5)
    assert unit_adjust(5, 6) == (1, 5)
    assert unit_adjust(8, 12) == (4, 11)
    with pytest.raises(ValueError):
        unit_adjust(12, 12)


def test_unit_adjust_agrees_with_exhaustive_search():
    for N in range(2, 80):
        for k in range(1, N):
            e, l = unit_adjust(k, N)
            valid = [x for x in range(1, N) if gcd(x, N) == 1 and (x * e - k) % N == 0]
            assert e == gcd(k, N) and l in valid


def test_decompose_examples():
    dec = decompose((1, 4), 17)
    assert (dec.e, dec.f, dec.c, dec.t) == (1, 1, (1, 4), (0, 0))
    for N in (5, 9, 20):
        dec = decompose((1, N - 1), N)
        assert (dec.e, dec.f, dec.c, dec.t) == (1, 1, (1, -1), (0, 0))


def test_decompose_six_seven_mod_36():
    # smallest-k tie-break picks k = 5 (b = (-6, -1)); the hand decomposition
    # e = 6, f = 1, c = (0, 1), t = (1, 1) from k = 6 is also valid
    hand = TorsionDecomposition(36, 6, 1, (0, 1), (1, 1))
    assert verify_decomposition(hand, (6, 7))
    dec = decompose((6, 7), 36)
    assert (dec.k, dec.b, dec.e, dec.f, dec.c, dec.t) == (5, (-6, -1), 1, 29, (-6, -1), (0, 0))
    assert verify_decomposition(dec, (6, 7))


def test_verify_rejects_broken_decompositions():
    checked_f = checked_t = 0
    for N in range(2, 40):
        for a in itertools.product(range(N), repeat=2):
            if gcd(N, *a) != 1:
                continue
            dec = decompose(a, N)
            if gcd(dec.f + 1, N) != 1:
                bad = TorsionDecomposition(N, dec.e, dec.f + 1, dec.c, dec.t)
                assert not verify_decomposition(bad, a)
                checked_f += 1
            if dec.e > 1:
                t = ((dec.t[0] + 1) % dec.e,) + dec.t[1:]
                bad = TorsionDecomposition(N, dec.e, dec.f, dec.c, t)
                assert not verify_decomposition(bad, a)
                checked_t += 1
    assert checked_f and checked_t


def test_verify_rejects_shape_errors():
    dec = decompose((1, 4), 17)
    assert not verify_decomposition(dec, (1, 4, 0))
    assert not verify_decomposition(TorsionDecomposition(17, 3, 1, (1, 4), (0, 0)), (1, 4))


@st.composite
def primitive_points(draw):
    n = draw(st.integers(1, 3))
    N = draw(st.integers(2, 3000))
    a = draw(st.lists(st.integers(0, N - 1), min_size=n, max_size=n))
    if gcd(N, *a) != 1:
        a[0] = 1
    return tuple(a), N


@settings(max_examples=300, deadline=None)
@given(primitive_points())
def test_decompose_round_trip(point):
    a, N = point
    dec = decompose(a, N)
    assert verify_decomposition(dec, a)
    assert N % dec.e == 0 and gcd(dec.f, N) == 1
    assert all((dec.k * x - y) % N == 0 for x, y in zip(a, dec.b))
    if N >= guaranteed_threshold(len(a)):
        assert dec.bound_met
