"""Certificate builders for fixed-offset divisibility, prime-free intervals and Pisot/Salem floors.

All three rest on one observation: once f(n) mod p is purely L(p)-periodic
from the tower start, f(L n + m) + h ≡ f(m) + h (mod p) for every n >= 0
whenever L is a multiple of L(p).  Choosing p as the smallest prime factor
of f(m) + h then makes every f(L n + m) + h divisible by p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    BudgetExceeded,
    HTooLarge,
    IndexBelowTowerStart,
    NoFactorFound,
    NonPositiveIndex,
    NonReversibleLevel,
)
from .ilrs import (
    DEFAULT_MAX_STEPS,
    DEFAULT_SIZE_BUDGET,
    CompositionChain,
    SpecOrChain,
    as_chain,
    eval_chain_exact,
)
from .primes import primorial, sieve, smallest_prime_factor, theta
from .tower import PER_MODULUS, TowerReduction, chain_period, eval_chain_mod, growth_window
from .trace import (
    DEFAULT_PRECISION,
    MinPoly,
    _require_pisot_salem,
    floor_offset,
    offset_bound,
    trace_ilrs,
)

DEFAULT_BOUND = 10**6
DEFAULT_EPSILON = 1e-4
MAX_WITNESS_SEARCH = 10_000

__all__ = [
    "DivisibilityCertificate",
    "DivisibilityEntry",
    "PisotFloorCertificate",
    "PrimeFreeIntervalCertificate",
    "SizeEvidence",
    "DeltaEstimate",
    "certify_divisibility",
    "certify_pisot_floor",
    "certify_prime_free_interval",
    "delta_estimate",
    "smallest_prime_factor_chain",
    "theta",
]


# --------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class DivisibilityEntry:
    """p divides f(L n + m) + h for every n >= 0; L(p) and the tower start back it."""

    h: int
    p: int
    L_p: int
    tower_start: int

    def to_dict(self) -> dict:
        return {"h": str(self.h), "p": str(self.p), "L_p": str(self.L_p),
                "tower_start": str(self.tower_start)}

    @classmethod
    def from_dict(cls, d) -> "DivisibilityEntry":
        return cls(int(d["h"]), int(d["p"]), int(d["L_p"]), int(d["tower_start"]))


@dataclass(frozen=True)
class SizeEvidence:
    """Why |f(N)| exceeds ``threshold``.

    ``method`` is ``"exact"`` (value computed) or ``"monotone-window"``: the
    exact window f(1..window) has |f| strictly increasing and of constant
    sign on its tail, and |f(crossing)| > threshold with crossing <= N.  The
    second form relies on the growth hypothesis beyond the window.
    """

    method: str
    threshold: int
    sign: int
    window: int = 0
    crossing: int = 0

    def to_dict(self) -> dict:
        return {"method": self.method, "threshold": str(self.threshold),
                "sign": self.sign, "window": self.window, "crossing": self.crossing}

    @classmethod
    def from_dict(cls, d) -> "SizeEvidence":
        return cls(d["method"], int(d["threshold"]), int(d["sign"]),
                   int(d["window"]), int(d["crossing"]))


@dataclass(frozen=True)
class DivisibilityCertificate:
    chain: CompositionChain
    H: int
    m: int
    L: int
    entries: tuple[DivisibilityEntry, ...]
    m0: int
    f_m: Optional[int] = None
    strict_paper: bool = False
    convention: str = PER_MODULUS
    window: int = 0

    kind = "divisibility"

    def prime_for(self, h: int) -> int:
        for e in self.entries:
            if e.h == h:
                return e.p
        raise KeyError(h)

    @property
    def claim(self) -> str:
        return (f"for every |h| <= {self.H} and n >= 0, p_h divides "
                f"f({self.L}*n + {self.m}) + h")

    def to_dict(self) -> dict:
        return {
            "chain": self.chain.to_list(),
            "H": str(self.H),
            "m": str(self.m),
            "L": str(self.L),
            "entries": [e.to_dict() for e in self.entries],
            "m0": str(self.m0),
            "f_m": None if self.f_m is None else str(self.f_m),
            "strict_paper": self.strict_paper,
            "convention": self.convention,
            "window": self.window,
            "claim": self.claim,
        }

    @classmethod
    def from_dict(cls, d) -> "DivisibilityCertificate":
        return cls(
            chain=CompositionChain.from_list(d["chain"]),
            H=int(d["H"]),
            m=int(d["m"]),
            L=int(d["L"]),
            entries=tuple(DivisibilityEntry.from_dict(e) for e in d["entries"]),
            m0=int(d["m0"]),
            f_m=None if d.get("f_m") is None else int(d["f_m"]),
            strict_paper=bool(d.get("strict_paper", False)),
            convention=d.get("convention", PER_MODULUS),
            window=int(d.get("window", 0)),
        )


@dataclass(frozen=True)
class PrimeFreeIntervalCertificate:
    chain: CompositionChain
    m: int
    f_m: int
    H: int
    primes: tuple[int, ...]
    entries: tuple[DivisibilityEntry, ...]
    L: int
    n_star: int
    D: int
    size_evidence: SizeEvidence
    paper_witness: Optional[int] = None
    paper_witness_log: float = 0.0
    strict_paper: bool = False
    convention: str = PER_MODULUS

    kind = "prime-free-interval"

    @property
    def N_star(self) -> int:
        return self.L * self.n_star + self.m

    def prime_for(self, h: int) -> int:
        for e in self.entries:
            if e.h == h:
                return e.p
        raise KeyError(h)

    @property
    def claim(self) -> str:
        return (f"for N = {self.L}*n + {self.m} with n >= {self.n_star}, no integer in "
                f"[|f(N)| - {self.H}, |f(N)| + {self.H}] is prime")

    def to_dict(self) -> dict:
        return {
            "chain": self.chain.to_list(),
            "m": str(self.m),
            "f_m": str(self.f_m),
            "H": str(self.H),
            "primes": [str(p) for p in self.primes],
            "entries": [e.to_dict() for e in self.entries],
            "L": str(self.L),
            "n_star": str(self.n_star),
            "D": str(self.D),
            "size_evidence": self.size_evidence.to_dict(),
            "paper_witness": None if self.paper_witness is None else str(self.paper_witness),
            "paper_witness_log": repr(self.paper_witness_log),
            "strict_paper": self.strict_paper,
            "convention": self.convention,
            "claim": self.claim,
        }

    @classmethod
    def from_dict(cls, d) -> "PrimeFreeIntervalCertificate":
        return cls(
            chain=CompositionChain.from_list(d["chain"]),
            m=int(d["m"]),
            f_m=int(d["f_m"]),
            H=int(d["H"]),
            primes=tuple(int(p) for p in d["primes"]),
            entries=tuple(DivisibilityEntry.from_dict(e) for e in d["entries"]),
            L=int(d["L"]),
            n_star=int(d["n_star"]),
            D=int(d["D"]),
            size_evidence=SizeEvidence.from_dict(d["size_evidence"]),
            paper_witness=None if d.get("paper_witness") is None else int(d["paper_witness"]),
            paper_witness_log=float(d.get("paper_witness_log", 0.0)),
            strict_paper=bool(d.get("strict_paper", False)),
            convention=d.get("convention", PER_MODULUS),
        )


@dataclass(frozen=True)
class PisotFloorCertificate:
    poly: MinPoly
    kind_of_alpha: str
    inner: CompositionChain
    G: int
    H_user: int
    divisibility: DivisibilityCertificate
    n_start: int
    size_evidence: SizeEvidence
    precision: int = DEFAULT_PRECISION

    kind = "pisot-floor"

    @property
    def H(self) -> int:
        return self.H_user + self.G

    @property
    def L(self) -> int:
        return self.divisibility.L

    @property
    def m(self) -> int:
        return self.divisibility.m

    @property
    def claim(self) -> str:
        return (f"for every |h| <= {self.H_user} and n >= {self.n_start}, "
                f"floor(alpha^U({self.L}*n + {self.m})) + h is composite")

    def to_dict(self) -> dict:
        return {
            "poly": self.poly.to_dict(),
            "alpha_kind": self.kind_of_alpha,
            "inner": self.inner.to_list(),
            "G": str(self.G),
            "H_user": str(self.H_user),
            "H": str(self.H),
            "divisibility": self.divisibility.to_dict(),
            "n_start": str(self.n_start),
            "size_evidence": self.size_evidence.to_dict(),
            "precision": self.precision,
            "claim": self.claim,
        }

    @classmethod
    def from_dict(cls, d) -> "PisotFloorCertificate":
        return cls(
            poly=MinPoly.from_dict(d["poly"]),
            kind_of_alpha=d["alpha_kind"],
            inner=CompositionChain.from_list(d["inner"]),
            G=int(d["G"]),
            H_user=int(d["H_user"]),
            divisibility=DivisibilityCertificate.from_dict(d["divisibility"]),
            n_start=int(d["n_start"]),
            size_evidence=SizeEvidence.from_dict(d["size_evidence"]),
            precision=int(d.get("precision", DEFAULT_PRECISION)),
        )


Certificate = Union[DivisibilityCertificate, PrimeFreeIntervalCertificate, PisotFloorCertificate]


# --------------------------------------------------------------------------
# helpers


def _try_exact(chain: CompositionChain, n: int,
               size_budget: int = DEFAULT_SIZE_BUDGET,
               max_steps: int = DEFAULT_MAX_STEPS) -> Optional[int]:
    try:
        return eval_chain_exact(chain, n, size_budget, max_steps)
    except BudgetExceeded:
        return None


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def size_evidence(chain: SpecOrChain, N: int, threshold: int,
                  size_budget: int = DEFAULT_SIZE_BUDGET,
                  max_steps: int = DEFAULT_MAX_STEPS) -> Optional[SizeEvidence]:
    """Evidence that |f(N)| > threshold, or None if none is available."""
    chain = as_chain(chain)
    exact = _try_exact(chain, N, size_budget, max_steps)
    if exact is not None:
        if abs(exact) > threshold:
            return SizeEvidence("exact", threshold, _sign(exact))
        return None
    vals = growth_window(chain)
    K = len(vals)
    if K < 4 or N <= K:
        return None
    mags = [abs(v) for v in vals]
    sign = _sign(vals[-1])
    # tail: maximal suffix on which |f| strictly increases with constant sign
    start = K - 1
    while start > 0 and mags[start - 1] < mags[start] and _sign(vals[start - 1]) == sign:
        start -= 1
    if K - start < 4 or sign == 0:
        return None
    crossing = next((k for k in range(start, K) if mags[k] > threshold), None)
    if crossing is None:
        return None
    return SizeEvidence("monotone-window", threshold, sign, K, crossing + 1)


def smallest_prime_factor_chain(
    chain: SpecOrChain,
    m: int,
    h: int,
    bound: int = DEFAULT_BOUND,
    cache=None,
    towers: Optional[dict] = None,
    convention: str = PER_MODULUS,
) -> int:
    """Smallest prime p <= bound dividing f(m) + h.

    If f(m) fits the exact budget, trial division proposes the candidate and
    the tower residue must agree with it; otherwise primes are scanned in
    increasing order using tower residues only.
    """
    chain = as_chain(chain)
    towers = {} if towers is None else towers
    exact = _try_exact(chain, m)

    def tower_residue(p: int) -> int:
        if p not in towers:
            towers[p] = chain_period(chain, p, cache=cache, convention=convention)
        return eval_chain_mod(chain, m, p, towers[p], cache=cache)

    if exact is not None:
        value = exact + h
        if abs(value) < 2:
            raise HTooLarge(f"f({m}) + {h} = {value} has no prime factor")
        p = smallest_prime_factor(value, bound)
        if p is None:
            raise NoFactorFound(bound)
        if (tower_residue(p) + h) % p != 0:
            raise AssertionError(f"tower residue disagrees with exact f({m}) mod {p}")
        return p

    limit = 1024
    checked = 1
    while True:
        top = min(limit, bound)
        for p in sieve(top):
            if p <= checked:
                continue
            if (tower_residue(p) + h) % p == 0:
                return p
        checked = top
        if top >= bound:
            raise NoFactorFound(bound)
        limit *= 4


def _combine_periods(periods: dict[int, int], strict_paper: bool) -> int:
    if strict_paper:
        out = 1
        for L_p in periods.values():
            out *= L_p
        return out
    return math.lcm(*periods.values()) if periods else 1


def _check_tower_start(m: int, towers: dict, primes) -> None:
    for p in primes:
        if m < towers[p].m:
            raise IndexBelowTowerStart(
                f"m={m} is below the tower start {towers[p].m} for p={p}; choose m >= {towers[p].m}"
            )


def _size_start(chain: CompositionChain, threshold: int, m: int) -> int:
    """Smallest index k <= m backed by the window with |f(j)| >= threshold for j in [k, m]."""
    vals = growth_window(chain)
    k = min(m, len(vals))
    if k == 0 or abs(vals[k - 1]) < threshold:
        return m
    while k > 1 and abs(vals[k - 2]) >= threshold:
        k -= 1
    return k


# --------------------------------------------------------------------------
# builders


def certify_divisibility(
    chain: SpecOrChain,
    H: int,
    m: int,
    bound: int = DEFAULT_BOUND,
    cache=None,
    strict_paper: bool = False,
    convention: str = PER_MODULUS,
) -> DivisibilityCertificate:
    """Primes p_h (|h| <= H) and L with p_h | f(L n + m) + h for all n >= 0."""
    chain = as_chain(chain)
    if H < 0:
        raise ValueError("H must be >= 0")
    if m < 1:
        raise NonPositiveIndex(f"m must be >= 1, got {m}")
    f_m = _try_exact(chain, m)
    if f_m is not None:
        if abs(f_m) - H < 2:
            raise HTooLarge(f"|f({m})| - H = {abs(f_m) - H} < 2; increase m or lower H")
    elif size_evidence(chain, m, H + 1) is None:
        raise HTooLarge(f"cannot certify |f({m})| - {H} >= 2 within budget")

    towers: dict[int, TowerReduction] = {}
    entries = []
    for h in range(-H, H + 1):
        p = smallest_prime_factor_chain(chain, m, h, bound, cache, towers, convention)
        if p not in towers:
            towers[p] = chain_period(chain, p, cache=cache, convention=convention)
        entries.append(DivisibilityEntry(h, p, towers[p].L_total, towers[p].m))
    used = sorted({e.p for e in entries})
    _check_tower_start(m, towers, used)
    L = _combine_periods({p: towers[p].L_total for p in used}, strict_paper)
    m0 = max([towers[p].m for p in used] + [_size_start(chain, H + 2, m)])
    return DivisibilityCertificate(
        chain=chain, H=H, m=m, L=L, entries=tuple(entries), m0=m0, f_m=f_m,
        strict_paper=strict_paper, convention=convention,
        window=len(growth_window(chain)),
    )


def _paper_witness(H: int, D: int, L: int) -> tuple[Optional[int], float]:
    """ceil(exp(D * theta(2H + 2)) / L), i.e. ceil(primorial(2H + 2)**D / L)."""
    log_value = D * theta(2 * H + 2) - math.log(L)
    if D * (2 * H + 2) * 1.5 > 2 * 10**5:
        return None, log_value
    big = primorial(2 * H + 2) ** D
    return -(-big // L), log_value


def certify_prime_free_interval(
    chain: SpecOrChain,
    m: int,
    bound: int = DEFAULT_BOUND,
    cache=None,
    strict_paper: bool = False,
    convention: str = PER_MODULUS,
) -> PrimeFreeIntervalCertificate:
    """Certificate that [|f(N)| - H, |f(N)| + H] holds no prime, H = |f(m)| - 2."""
    chain = as_chain(chain)
    f_m = _try_exact(chain, m)
    if f_m is None:
        raise BudgetExceeded(f"f({m}) is too large to evaluate exactly")
    if abs(f_m) < 4:
        raise HTooLarge(f"|f({m})| = {abs(f_m)} < 4, so H = |f(m)| - 2 < 2")
    H = abs(f_m) - 2
    P = tuple(sieve(2 * H + 2))
    towers: dict[int, TowerReduction] = {}
    entries = []
    for h in range(-H, H + 1):
        p = smallest_prime_factor_chain(chain, m, h, bound, cache, towers, convention)
        entries.append(p)
    found = set(entries)
    if found != set(P):
        raise AssertionError(f"prime set {sorted(found)} differs from primes <= {2 * H + 2}")
    for p in P:
        if p not in towers:
            towers[p] = chain_period(chain, p, cache=cache, convention=convention)
    _check_tower_start(m, towers, P)
    entries = tuple(
        DivisibilityEntry(h, p, towers[p].L_total, towers[p].m)
        for h, p in zip(range(-H, H + 1), entries)
    )
    L = _combine_periods({p: towers[p].L_total for p in P}, strict_paper)
    threshold = 3 * H + 2
    for n in range(1, MAX_WITNESS_SEARCH + 1):
        ev = size_evidence(chain, L * n + m, threshold)
        if ev is not None:
            break
    else:
        raise BudgetExceeded(f"no n <= {MAX_WITNESS_SEARCH} with certified |f(Ln+m)| > {threshold}")
    D = chain.order_product
    witness, witness_log = _paper_witness(H, D, L)
    return PrimeFreeIntervalCertificate(
        chain=chain, m=m, f_m=f_m, H=H, primes=P, entries=entries, L=L, n_star=n,
        D=D, size_evidence=ev, paper_witness=witness, paper_witness_log=witness_log,
        strict_paper=strict_paper, convention=convention,
    )


def certify_pisot_floor(
    poly: MinPoly,
    inner_chain: SpecOrChain,
    H_user: int,
    m: int,
    bound: int = DEFAULT_BOUND,
    cache=None,
    strict_paper: bool = False,
    precision: int = DEFAULT_PRECISION,
) -> PisotFloorCertificate:
    """Certificate that floor(alpha^U(L n + m)) + h is composite for |h| <= H_user.

    The trace chain Tr o U differs from floor(alpha^U) by g with |g| <= G, so a
    divisibility certificate for the trace chain with H = H_user + G covers
    every floor offset.
    """
    cls = _require_pisot_salem(poly, precision)
    inner = as_chain(inner_chain)
    for j, lv in enumerate(inner.levels):
        if not lv.reversible:
            raise NonReversibleLevel(f"inner level {j + 1} ({lv.label}) is not reversible")
    G = offset_bound(poly, 1, precision).G
    trace_chain = CompositionChain((trace_ilrs(poly),) + inner.levels)
    div = certify_divisibility(trace_chain, H_user + G, m, bound, cache, strict_paper)
    H = H_user + G
    pmax = max(e.p for e in div.entries)

    n_start = 1
    exponent = _try_exact(inner, m)
    if exponent is not None and exponent >= 1:
        try:
            g = floor_offset(poly, exponent, precision)
            tr = div.f_m if div.f_m is not None else eval_chain_exact(trace_chain, m)
            if all(abs(tr + g + h) > div.prime_for(g + h) for h in range(-H_user, H_user + 1)):
                n_start = 0
        except BudgetExceeded:
            pass
    ev = size_evidence(trace_chain, div.L * max(n_start, 1) + m, H + pmax)
    if ev is None:
        raise BudgetExceeded("cannot certify floor(alpha^U(N)) + h > p_h beyond the first term")
    return PisotFloorCertificate(
        poly=poly, kind_of_alpha=cls.kind, inner=inner, G=G, H_user=H_user,
        divisibility=div, n_start=n_start, size_evidence=ev, precision=precision,
    )


# --------------------------------------------------------------------------
# interval width estimate


@dataclass(frozen=True)
class DeltaEstimate:
    """Main term (log n) / (2D) of the prime-free half-width, and c = 1/(2D) - epsilon.

    The error term involves an ineffective absolute constant and is not
    computed; ``main_term_only`` is always True.
    """

    main_term: float
    c: float
    c_exact: Fraction
    D: int
    epsilon: Fraction
    main_term_only: bool = True

    @property
    def formula(self) -> str:
        return f"1/(2*{self.D}) - {self.epsilon}"


def delta_estimate(n: Union[int, float], D: int, epsilon=DEFAULT_EPSILON) -> DeltaEstimate:
    if D < 1:
        raise ValueError("D must be >= 1")
    eps = Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    c_exact = Fraction(1, 2 * D) - eps
    return DeltaEstimate(math.log(n) / (2 * D), float(c_exact), c_exact, D, eps)


def pisot_floor_order_product(alpha_degree: int, inner: SpecOrChain) -> int:
    """D for floor(alpha^U(n)): deg(alpha) times the orders of the inner levels."""
    return alpha_degree * as_chain(inner).order_product
