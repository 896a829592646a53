"""Independent re-checking of certificates.

Construction goes through period towers.  Verification deliberately does
not: it evaluates f(N) exactly when the budget allows, and otherwise
evaluates the inner levels exactly and the outer level modulo p by
powering the affine companion matrix.  Primality is re-tested with
Miller-Rabin and the prime set of interval certificates is re-sieved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .certify import (
    DivisibilityCertificate,
    PisotFloorCertificate,
    PrimeFreeIntervalCertificate,
)
from .errors import BudgetExceeded, NonPositiveIndex, PrecisionInsufficient
from .ilrs import (
    DEFAULT_MAX_STEPS,
    DEFAULT_SIZE_BUDGET,
    CompositionChain,
    IlrsSpec,
    chain_window,
    eval_chain_exact,
    eval_exact,
)
from .primes import is_prime
from .trace import floor_offset, trace_ilrs

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"

NUMERIC_CROSSCHECK_MAX_EXPONENT = 500


@dataclass(frozen=True)
class ClaimResult:
    name: str
    status: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class VerificationReport:
    kind: str
    n_checks: int
    claims: list[ClaimResult] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.claims.append(ClaimResult(name, PASS if ok else FAIL, detail))

    def skip(self, name: str, detail: str) -> None:
        self.claims.append(ClaimResult(name, SKIP, detail))

    @property
    def failures(self) -> list[ClaimResult]:
        return [c for c in self.claims if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        return [f"{c.status.upper():7} {c.name}" + (f"  ({c.detail})" if c.detail else "")
                for c in self.claims]


# --------------------------------------------------------------------------
# independent evaluation


def _matmul(A, B, q):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) % q for j in range(m)] for i in range(n)]


def companion_power_mod(spec: IlrsSpec, n: int, q: int) -> int:
    """R(n) mod q by binary powering of the (d+1)x(d+1) affine companion matrix."""
    if n < 1:
        raise NonPositiveIndex(f"index must be >= 1, got {n}")
    d = spec.order
    if n <= d:
        return spec.initial[n - 1] % q
    # state (R(k), ..., R(k+d-1), 1) -> (R(k+1), ..., R(k+d), 1)
    T = [[0] * (d + 1) for _ in range(d + 1)]
    for i in range(d - 1):
        T[i][i + 1] = 1
    for j, a in enumerate(spec.coeffs):
        T[d - 1][j] = a % q
    T[d - 1][d] = spec.inhom % q
    T[d][d] = 1
    P = [[int(i == j) for j in range(d + 1)] for i in range(d + 1)]
    e = n - 1
    while e:
        if e & 1:
            P = _matmul(P, T, q)
        T = _matmul(T, T, q)
        e >>= 1
    v = [[r % q] for r in spec.initial] + [[1]]
    return _matmul(P, v, q)[0][0]


class _Evaluator:
    """Caches exact inner values per index during one verification run."""

    def __init__(self, chain: CompositionChain, size_budget: int, max_steps: int):
        self.chain = chain
        self.size_budget = size_budget
        self.max_steps = max_steps
        self._exact: dict[int, Optional[int]] = {}
        self._inner: dict[int, int] = {}
        self._window: Optional[list[int]] = None

    def window(self) -> list[int]:
        if self._window is None:
            self._window = chain_window(self.chain)
        return self._window

    def exact(self, N: int) -> Optional[int]:
        if N not in self._exact:
            try:
                self._exact[N] = eval_chain_exact(self.chain, N, self.size_budget, self.max_steps)
            except BudgetExceeded:
                self._exact[N] = None
        return self._exact[N]

    def inner_value(self, N: int) -> int:
        """U(N) exactly (N itself when the chain has one level)."""
        if N not in self._inner:
            inner = self.chain.inner()
            self._inner[N] = N if inner is None else eval_chain_exact(
                inner, N, self.size_budget, self.max_steps)
        return self._inner[N]

    def residue(self, N: int, p: int) -> int:
        value = self.exact(N)
        if value is not None:
            return value % p
        return companion_power_mod(self.chain.outer, self.inner_value(N), p)


def _independent_size(ev: _Evaluator, N: int, threshold: int) -> Optional[tuple[int, str]]:
    """(sign, method) if |f(N)| > threshold can be re-derived, else None."""
    value = ev.exact(N)
    if value is not None:
        return ((value > 0) - (value < 0), "exact") if abs(value) > threshold else None
    vals = ev.window()
    K = len(vals)
    if K < 4 or N <= K:
        return None
    mags = [abs(v) for v in vals]
    sign = (vals[-1] > 0) - (vals[-1] < 0)
    start = K - 1
    while start > 0 and mags[start - 1] < mags[start] and ((vals[start - 1] > 0) - (vals[start - 1] < 0)) == sign:
        start -= 1
    if K - start < 4 or sign == 0:
        return None
    if not any(mags[k] > threshold for k in range(start, K)):
        return None
    return sign, "monotone-window"


# --------------------------------------------------------------------------
# per-variant checks


def _check_primes(report: VerificationReport, entries) -> None:
    for p in sorted({e.p for e in entries}):
        report.add(f"p={p} is prime", is_prime(p))


def _check_periods(report: VerificationReport, L: int, entries, strict: bool) -> None:
    seen = {}
    for e in entries:
        seen.setdefault(e.p, e.L_p)
    for p, L_p in sorted(seen.items()):
        report.add(f"L={L} is a multiple of L({p})={L_p}", L_p >= 1 and L % L_p == 0)


def _verify_divisibility(cert: DivisibilityCertificate, n_checks: int,
                         report: VerificationReport, size_budget: int, max_steps: int) -> None:
    _check_primes(report, cert.entries)
    _check_periods(report, cert.L, cert.entries, cert.strict_paper)
    hs = sorted(e.h for e in cert.entries)
    report.add(f"entries cover every |h| <= {cert.H}", hs == list(range(-cert.H, cert.H + 1)))
    ev = _Evaluator(cert.chain, size_budget, max_steps)
    for n in range(n_checks):
        N = cert.L * n + cert.m
        for e in cert.entries:
            name = f"n={n} h={e.h}: {e.p} | f({N}) + {e.h}"
            try:
                r = ev.residue(N, e.p)
            except BudgetExceeded as exc:
                report.skip(name, str(exc))
                continue
            report.add(name, (r + e.h) % e.p == 0, f"residue {r}")


def _verify_interval(cert: PrimeFreeIntervalCertificate, n_checks: int,
                     report: VerificationReport, size_budget: int, max_steps: int) -> None:
    bound = 2 * cert.H + 2
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if flags[i]:
            for j in range(i * i, bound + 1, i):
                flags[j] = 0
    P = tuple(i for i in range(bound + 1) if flags[i])
    report.add(f"P equals the primes <= {bound}", P == tuple(cert.primes))
    report.add(f"H = |f(m)| - 2 = {cert.H}", cert.H == abs(cert.f_m) - 2 and cert.H >= 2)
    chain_ev = _Evaluator(cert.chain, size_budget, max_steps)
    fm = chain_ev.exact(cert.m)
    report.add(f"f({cert.m}) = {cert.f_m}", fm == cert.f_m)
    report.add("{p_h : |h| <= H} equals P", {e.p for e in cert.entries} == set(P))
    _check_primes(report, cert.entries)
    _check_periods(report, cert.L, cert.entries, cert.strict_paper)
    hs = sorted(e.h for e in cert.entries)
    report.add(f"entries cover every |h| <= {cert.H}", hs == list(range(-cert.H, cert.H + 1)))
    primes_by_h = {e.h: e.p for e in cert.entries}
    for k in range(n_checks):
        N = cert.L * (cert.n_star + k) + cert.m
        size = _independent_size(chain_ev, N, 3 * cert.H + 2)
        if size is None:
            report.add(f"n={cert.n_star + k}: |f({N})| - H > 2H + 2", False, "no size evidence")
            continue
        sign, method = size
        report.add(f"n={cert.n_star + k}: |f({N})| - H > 2H + 2", True, method)
        for h in range(-cert.H, cert.H + 1):
            p = primes_by_h.get(sign * h)
            name = f"n={cert.n_star + k} offset {h}: {p} | |f({N})| + {h}"
            if p is None:
                report.add(name, False, "no prime recorded")
                continue
            try:
                r = chain_ev.residue(N, p)
            except BudgetExceeded as exc:
                report.skip(name, str(exc))
                continue
            report.add(name, (sign * r + h) % p == 0)


def _direct_floor(poly, E: int, precision: int) -> int:
    digits_bits = int(E * 2) + precision
    with mpmath.workprec(digits_bits * 2):
        roots = mpmath.polyroots(poly.coefficients(), maxsteps=400, extraprec=digits_bits)
        roots = roots if isinstance(roots, list) else [roots]
        alpha = max((mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(2) ** -precision))
        return int(mpmath.floor(mpmath.power(alpha, E)))


def _verify_pisot(cert: PisotFloorCertificate, n_checks: int,
                  report: VerificationReport, size_budget: int, max_steps: int) -> None:
    div = cert.divisibility
    trace = trace_ilrs(cert.poly)
    report.add("embedded chain is Tr o U",
               div.chain.levels == (trace,) + cert.inner.levels)
    report.add(f"H = H' + G = {cert.H_user} + {cert.G}", div.H == cert.H_user + cert.G)
    _verify_divisibility(div, n_checks, report, size_budget, max_steps)
    inner_ev = _Evaluator(cert.inner, size_budget, max_steps)
    for n in range(cert.n_start, cert.n_start + n_checks):
        N = div.L * n + div.m
        tag = f"n={n}"
        try:
            E = inner_ev.exact(N)
            if E is None:
                raise BudgetExceeded(f"U({N}) too large")
            tr = eval_exact(trace, E, max_steps)
            g = floor_offset(cert.poly, E, cert.precision)
        except (BudgetExceeded, PrecisionInsufficient) as exc:
            report.skip(f"{tag}: floor(alpha^U({N})) composite", str(exc))
            continue
        floor_val = tr + g
        report.add(f"{tag}: |g(U({N}))| = {abs(g)} <= G = {cert.G}", abs(g) <= cert.G)
        if E <= NUMERIC_CROSSCHECK_MAX_EXPONENT:
            report.add(f"{tag}: Tr + g equals direct floor(alpha^{E})",
                       _direct_floor(cert.poly, E, cert.precision) == floor_val)
        for h in range(-cert.H_user, cert.H_user + 1):
            k = g + h
            try:
                p = div.prime_for(k)
            except KeyError:
                report.add(f"{tag} h={h}: prime for offset {k}", False, "offset outside [-H, H]")
                continue
            v = floor_val + h
            report.add(f"{tag} h={h}: {p} | floor(alpha^{E}) + {h} and exceeds it",
                       v % p == 0 and abs(v) > p)


def verify_certificate(cert, n_checks: int = 3,
                       size_budget: int = DEFAULT_SIZE_BUDGET,
                       max_steps: int = DEFAULT_MAX_STEPS) -> VerificationReport:
    """Re-check ``cert`` for its first ``n_checks`` progression terms.

    Failures are report entries, never exceptions.
    """
    if not isinstance(cert, (DivisibilityCertificate, PrimeFreeIntervalCertificate,
                             PisotFloorCertificate)):
        raise TypeError(f"not a certificate: {type(cert).__name__}")
    report = VerificationReport(cert.kind, n_checks)
    if n_checks <= 0:
        return report
    if isinstance(cert, PisotFloorCertificate):
        _verify_pisot(cert, n_checks, report, size_budget, max_steps)
    elif isinstance(cert, PrimeFreeIntervalCertificate):
        _verify_interval(cert, n_checks, report, size_budget, max_steps)
    else:
        _verify_divisibility(cert, n_checks, report, size_budget, max_steps)
    return report
