"""Exit criteria.  One test per criterion; the terminal summary prints a
pass/fail line for each (see conftest.py)."""

import math
import random
import time
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest

from primefree.certify import (
    DivisibilityEntry,
    certify_divisibility,
    certify_pisot_floor,
    certify_prime_free_interval,
    delta_estimate,
    pisot_floor_order_product,
)
from primefree.errors import BudgetExceeded, NonReversibleLevel
from primefree.ilrs import CompositionChain, IlrsSpec, eval_chain_exact
from primefree.modular import find_period
from primefree.primes import theta
from primefree.tower import eval_chain_mod
from primefree.trace import MinPoly, floor_alpha_pow, floor_offset, trace_ilrs
from primefree.verify import verify_certificate

from oracles import chain_value, lucas_number, pisano, primes_upto

F = IlrsSpec((1, 1), 0, (1, 1), "F")
LUCAS = IlrsSpec((1, 1), 0, (1, 3), "Lucas")
DOUBLING = IlrsSpec((2,), 0, (1,), "doubling")
GOLDEN = MinPoly.from_coefficients([1, -1, -1])


def failed(report):
    return [c.name for c in report.failures]


@pytest.mark.acceptance(1, "period bounds on 200 random recurrences")
def test_period_bounds():
    rng = random.Random(20240601)
    cases = []
    for _ in range(200):
        d = rng.randint(1, 3)
        a0 = rng.choice([a for a in range(-5, 6) if a])
        coeffs = (a0,) + tuple(rng.randint(-5, 5) for _ in range(d - 1))
        spec = IlrsSpec(coeffs, rng.randint(-5, 5), tuple(rng.randint(-9, 9) for _ in range(d)))
        cases.append((spec, rng.randint(2, 20)))
    assert sum(spec.reversible for spec, _ in cases) > 0

    start = time.perf_counter()
    for spec, q in cases:
        info = find_period(spec, q)
        bound = q ** spec.order
        assert info.s <= bound and info.L <= bound, (spec, q, info)
        if spec.reversible:
            assert info.s == 1, (spec, q, info)
    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"{elapsed:.2f} s"


@pytest.mark.acceptance(2, "Pisano periods match a direct residue scan")
def test_pisano_suite():
    for q in (2, 3, 5, 7, 10):
        info = find_period(F, q)
        assert (info.s, info.L) == (1, pisano(q)), q
    assert [pisano(q) for q in (2, 3, 5, 7, 10)] == [3, 8, 20, 16, 60]


@pytest.mark.acceptance(3, "tower evaluation equals exact evaluation mod q")
def test_tower_oracle_equivalence():
    chains = {
        "[F]": [F],
        "[F,F]": [F, F],
        "[Lucas,F]": [LUCAS, F],
        "[doubling,F]": [DOUBLING, F],
    }
    compared = 0
    for name, levels in chains.items():
        chain = CompositionChain(tuple(levels))
        for n in range(1, 26):
            try:
                exact = eval_chain_exact(chain, n)
            except BudgetExceeded:
                continue
            assert exact == chain_value(levels, n)
            for q in primes_upto(50):
                assert eval_chain_mod(chain, n, q) == exact % q, (name, n, q)
                compared += 1
    # every listed chain contributes, including the fast-growing ones
    assert compared >= 4 * 15 * 15


@pytest.mark.acceptance(4, "divisibility certificate for F, H=0, m=12")
def test_divisibility_certificate():
    start = time.perf_counter()
    cert = certify_divisibility(CompositionChain.of(F), 0, 12)
    report = verify_certificate(cert, 5)
    elapsed = time.perf_counter() - start

    assert cert.f_m == 144
    assert cert.prime_for(0) == 2
    assert cert.L % 3 == 0
    assert report.ok, report.lines()
    progression = [c for c in report.claims if c.name.startswith("n=")]
    assert len(progression) == 5
    # parities of F(12), F(15), ..., F(27) by plain iteration
    for n in range(6):
        assert chain_value([F], 12 + cert.L * n) % 2 == 0
    assert elapsed < 5, f"{elapsed:.2f} s"


@pytest.mark.acceptance(5, "prime-free interval certificate for [F,F], m=5")
def test_prime_free_interval():
    ff = CompositionChain.of(F, F)
    cert = certify_prime_free_interval(ff, 5)
    assert cert.H == 3
    assert cert.primes == (2, 3, 5, 7)
    assert {e.p for e in cert.entries} == set(primes_upto(2 * cert.H + 2))

    report = verify_certificate(cert, 2)
    assert report.ok, report.lines()
    for k in range(2):
        n = cert.n_star + k
        offsets = [c for c in report.claims if c.name.startswith(f"n={n} offset ")]
        assert len(offsets) == 2 * cert.H + 1
        assert all(c.passed for c in offsets)


@pytest.mark.acceptance(6, "constants 0.0624 and 1/(8d) - eps")
def test_interval_constants():
    est = delta_estimate(10**6, 8, 1e-4)
    assert f"{est.c:.4f}" == "0.0624"
    assert est.c_exact == Fraction(1, 16) - Fraction(1, 10**4)

    ff = CompositionChain.of(F, F)
    for d in (2, 3, 4):
        D = pisot_floor_order_product(d, ff)
        assert D == 4 * d
        est = delta_estimate(10**6, D, 1e-4)
        assert est.c_exact == Fraction(1, 8 * d) - Fraction(1, 10**4)
        assert est.formula == f"1/(2*{4 * d}) - 1/10000"


@pytest.mark.acceptance(7, "floor(phi^F(N)) composite for the golden ratio")
def test_pisot_floor_composite():
    inner = CompositionChain.of(F)
    cert = certify_pisot_floor(GOLDEN, inner, 0, 4)
    assert cert.G == 1
    report = verify_certificate(cert, 2)
    assert report.ok, report.lines()

    div = cert.divisibility
    for n in range(cert.n_start, cert.n_start + 2):
        E = chain_value([F], div.L * n + div.m)
        value = floor_alpha_pow(GOLDEN, E)
        g = floor_offset(GOLDEN, E)
        assert abs(g) <= cert.G
        assert value == lucas_number(E) + g
        p = div.prime_for(g)
        assert value % p == 0 and value > p


@pytest.mark.acceptance(8, "trace of X^2 - X - 1 is the Lucas sequence")
def test_trace_construction():
    spec = trace_ilrs(GOLDEN)
    lucas = [lucas_number(n) for n in range(1, 31)]
    with mpmath.workprec(256):
        roots = mpmath.polyroots([1, -1, -1], maxsteps=100, extraprec=256)
        tol = mpmath.mpf(2) ** -128
        for n in range(1, 31):
            numeric = mpmath.re(mpmath.fsum(r**n for r in roots))
            exact = chain_value([spec], n)
            assert exact == lucas[n - 1]
            assert abs(numeric - exact) < tol, n


@pytest.mark.acceptance(9, "Chebyshev theta sanity")
def test_theta():
    assert theta(10) == pytest.approx(math.log(2) + math.log(3) + math.log(5) + math.log(7), abs=1e-3)
    assert abs(theta(10) - 5.3471) < 1e-3
    start = time.perf_counter()
    for X in (10**3, 10**4, 10**5):
        ratio = theta(X) / X
        assert 0.8 < ratio < 1.2, (X, ratio)
    assert time.perf_counter() - start < 5


@pytest.mark.acceptance(10, "tampered certificates and non-reversible inner levels rejected")
def test_negative_controls():
    cert = certify_divisibility(CompositionChain.of(F), 0, 12)
    assert verify_certificate(cert, 3).ok

    wrong_prime = replace(cert, entries=(DivisibilityEntry(0, 7, 16, 1),))
    assert "n=0 h=0: 7 | f(12) + 0" in failed(verify_certificate(wrong_prime, 3))

    wrong_L = replace(cert, L=4)
    assert "L=4 is a multiple of L(2)=3" in failed(verify_certificate(wrong_L, 3))

    wrong_m = replace(cert, m=13)
    assert "n=0 h=0: 2 | f(13) + 0" in failed(verify_certificate(wrong_m, 3))

    with pytest.raises(NonReversibleLevel):
        CompositionChain.of(F, DOUBLING)
