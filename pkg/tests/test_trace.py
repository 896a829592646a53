import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primefree.errors import NotPisotOrSalem, PrecisionInsufficient
from primefree.ilrs import eval_exact
from primefree.trace import (
    NEITHER,
    PISOT,
    SALEM,
    MinPoly,
    classify,
    floor_alpha_pow,
    floor_offset,
    offset_bound,
    trace_ilrs,
)

from oracles import terms

GOLDEN = MinPoly.from_coefficients([1, -1, -1])
SILVER_SQ = MinPoly.from_coefficients([1, -6, 1])      # (3 + 2 sqrt 2) and its inverse
PLASTIC = MinPoly.from_coefficients([1, 0, -1, -1])
SALEM4 = MinPoly.from_coefficients([1, -1, -1, -1, 1])
LEHMER = MinPoly.from_coefficients([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])


def power_sums_numeric(poly, n_max, dps=80):
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(poly.coefficients(), maxsteps=200, extraprec=300)
        return [int(mpmath.nint(mpmath.re(mpmath.fsum(r**n for r in roots))))
                for n in range(1, n_max + 1)]


def test_coefficient_conventions():
    assert GOLDEN.coeffs == (1, 1)
    assert GOLDEN.coefficients() == [1, -1, -1]
    assert MinPoly.from_dict(SALEM4.to_dict()) == SALEM4
    assert SALEM4.is_palindromic() and not GOLDEN.is_palindromic()
    with pytest.raises(ValueError):
        MinPoly.from_coefficients([2, 1])
    with pytest.raises(ValueError):
        MinPoly.from_coefficients([1, 1, 0])


def test_golden_trace_is_lucas():
    spec = trace_ilrs(GOLDEN)
    assert spec.initial == (1, 3)
    lucas = terms(spec, 40)
    assert lucas[:6] == [1, 3, 4, 7, 11, 18]


@pytest.mark.parametrize("poly", [GOLDEN, SILVER_SQ, PLASTIC, SALEM4,
                                  MinPoly.from_coefficients([1, -3, 1]),
                                  MinPoly.from_coefficients([1, -2, -3, 5])])
def test_trace_matches_numeric_power_sums(poly):
    spec = trace_ilrs(poly)
    assert terms(spec, 25) == power_sums_numeric(poly, 25)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.integers(1, 4).filter(bool))
@settings(max_examples=60, deadline=None)
def test_newton_identities_random(rest, a0):
    coeffs = [1] + rest + [a0 if len(rest) % 2 else -a0]
    poly = MinPoly.from_coefficients(coeffs)
    assert terms(trace_ilrs(poly), 12) == power_sums_numeric(poly, 12)


@pytest.mark.parametrize("poly,kind", [
    (GOLDEN, PISOT), (SILVER_SQ, PISOT), (PLASTIC, PISOT),
    (MinPoly.from_coefficients([1, -2]), PISOT),
    (SALEM4, SALEM), (LEHMER, SALEM),
    (MinPoly.from_coefficients([1, 0, -4]), NEITHER),     # +-2
    (MinPoly.from_coefficients([1, 0, -2]), NEITHER),     # +-sqrt 2
    (MinPoly.from_coefficients([1, 1]), NEITHER),         # -1
    (MinPoly.from_coefficients([1, -1, 1]), NEITHER),     # roots of unity
    (MinPoly.from_coefficients([1, -3, -1]), PISOT),      # 3.30 and -0.30
    (MinPoly.from_coefficients([1, -1, -3]), NEITHER),    # 2.30 and -1.30
])
def test_classify(poly, kind):
    assert classify(poly).kind == kind


def test_classify_reports_roots():
    cls = classify(GOLDEN)
    with mpmath.workprec(256):
        assert abs(cls.dominant_root - (1 + mpmath.sqrt(5)) / 2) < mpmath.mpf(2) ** -200
    assert len(cls.conjugate_moduli) == 1


def test_non_reciprocal_band_roots_raise():
    # (X^2 + 1)(X - 2): roots +-i on the unit circle, not palindromic
    poly = MinPoly.from_coefficients([1, -2, 1, -2], irreducible_asserted=False)
    with pytest.raises(PrecisionInsufficient):
        classify(poly)


def test_floor_golden():
    assert [floor_alpha_pow(GOLDEN, n) for n in range(1, 6)] == [1, 2, 4, 6, 11]
    assert floor_alpha_pow(MinPoly.from_coefficients([1, -3, 1]), 2) == 6


@pytest.mark.parametrize("poly", [GOLDEN, SILVER_SQ, PLASTIC, SALEM4])
def test_floor_against_direct_power(poly):
    with mpmath.workdps(200):
        roots = mpmath.polyroots(poly.coefficients(), maxsteps=200, extraprec=600)
        alpha = max((r for r in roots if abs(mpmath.im(r)) < 1e-50), key=lambda r: mpmath.re(r))
        for n in range(1, 120):
            assert floor_alpha_pow(poly, n) == int(mpmath.floor(mpmath.re(alpha) ** n))


def test_floor_offset_is_small_for_large_n():
    assert floor_offset(GOLDEN, 10**4) in (-1, 0)
    # n even: conjugate power is positive and tiny, so floor = L(n) - 1
    assert floor_alpha_pow(GOLDEN, 200) == eval_exact(trace_ilrs(GOLDEN), 200) - 1


def test_floor_rejects_neither():
    with pytest.raises(NotPisotOrSalem):
        floor_alpha_pow(MinPoly.from_coefficients([1, 0, -4]), 3)


def test_offset_bound():
    assert offset_bound(GOLDEN).G == 1
    assert offset_bound(MinPoly.from_coefficients([1, -2])).G == 1
    assert offset_bound(SALEM4).G == 3
    for poly in (GOLDEN, PLASTIC, SALEM4, SILVER_SQ):
        G = offset_bound(poly).G
        assert all(abs(floor_offset(poly, n)) <= G for n in range(1, 80))


def test_salem_offsets_oscillate():
    seen = {floor_offset(SALEM4, n) for n in range(1, 200)}
    assert len(seen) > 1 and max(abs(g) for g in seen) <= 3
