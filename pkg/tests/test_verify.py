from dataclasses import replace

import pytest

from primefree.certify import (
    DivisibilityEntry,
    certify_divisibility,
    certify_pisot_floor,
    certify_prime_free_interval,
)
from primefree.ilrs import CompositionChain
from primefree.verify import companion_power_mod, verify_certificate

from oracles import residue_loop


@pytest.fixture(scope="module")
def fib_cert():
    from primefree.ilrs import IlrsSpec

    return certify_divisibility(CompositionChain.of(IlrsSpec((1, 1), 0, (1, 1))), 0, 12)


def failed_names(report):
    return [c.name for c in report.failures]


def test_companion_power(fib, lucas, doubling):
    for spec in (fib, lucas, doubling):
        for q in (2, 7, 10, 97):
            for n in (1, 2, 3, 17, 500):
                assert companion_power_mod(spec, n, q) == residue_loop(spec, n, q)


def test_divisibility_passes(fib_cert):
    report = verify_certificate(fib_cert, 5)
    assert report.ok and not report.failures
    assert len(report.claims) >= 5


def test_zero_checks(fib_cert):
    assert verify_certificate(fib_cert, 0).claims == []


def test_wrong_prime(fib_cert):
    bad = replace(fib_cert, entries=(DivisibilityEntry(0, 7, 16, 1),))
    report = verify_certificate(bad, 3)
    assert not report.ok
    assert any("7 | f(12)" in name for name in failed_names(report))


def test_non_prime(fib_cert):
    bad = replace(fib_cert, entries=(DivisibilityEntry(0, 4, 6, 1),))
    report = verify_certificate(bad, 2)
    assert "p=4 is prime" in failed_names(report)


def test_wrong_L(fib_cert):
    report = verify_certificate(replace(fib_cert, L=4), 3)
    assert "L=4 is a multiple of L(2)=3" in failed_names(report)


def test_wrong_m(fib_cert):
    report = verify_certificate(replace(fib_cert, m=13), 3)
    assert any(name.startswith("n=0 h=0: 2 | f(13)") for name in failed_names(report))


def test_missing_offsets(ff):
    cert = certify_divisibility(ff, 1, 5)
    report = verify_certificate(replace(cert, entries=cert.entries[:2]), 1)
    assert "entries cover every |h| <= 1" in failed_names(report)


def test_large_terms_use_tower_free_path(ff):
    # f(120 n + 5) for n >= 1 is too large to evaluate; the verifier reduces
    # the outer level by matrix powering instead
    cert = certify_divisibility(ff, 1, 5)
    report = verify_certificate(cert, 3)
    assert report.ok
    assert len([c for c in report.claims if c.name.startswith("n=2")]) == 3


def test_interval(ff):
    cert = certify_prime_free_interval(ff, 5)
    report = verify_certificate(cert, 2)
    assert report.ok, report.lines()
    bad = replace(cert, primes=(2, 3, 5))
    assert "P equals the primes <= 8" in failed_names(verify_certificate(bad, 1))
    bad = replace(cert, H=4)
    assert "H = |f(m)| - 2 = 4" in failed_names(verify_certificate(bad, 1))


def test_pisot(golden, fib):
    cert = certify_pisot_floor(golden, CompositionChain.of(fib), 0, 4)
    report = verify_certificate(cert, 2)
    assert report.ok, report.lines()
    assert any("direct floor" in c.name for c in report.claims)
    bad = replace(cert, G=0)
    assert "H = H' + G = 0 + 0" in failed_names(verify_certificate(bad, 1))


def test_not_a_certificate():
    with pytest.raises(TypeError):
        verify_certificate(object(), 1)


def test_report_lines(fib_cert):
    lines = verify_certificate(fib_cert, 1).lines()
    assert lines and all(line.startswith("PASS ") for line in lines)
    assert lines[-1].endswith("(residue 0)")
