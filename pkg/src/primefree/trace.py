"""Trace sequences of algebraic integers and Pisot/Salem floor powers.

For a monic integer polynomial X^d - a_{d-1} X^{d-1} - ... - a_0 with roots
alpha_1, ..., alpha_d, the power sums Tr(alpha^n) satisfy the recurrence
with coefficients (a_0, ..., a_{d-1}).  For a Pisot or Salem number
alpha = alpha_1,

    floor(alpha^N) = Tr(alpha^N) + g(N),
    g(N) = -(alpha_2^N + ... + alpha_d^N) - frac(alpha^N),

and g is bounded.  Tr is computed exactly; g is computed numerically with an
explicit error bound and rejected if the bound does not pin down the floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath

from .errors import BudgetExceeded, NotPisotOrSalem, PrecisionInsufficient
from .ilrs import DEFAULT_MAX_STEPS, IlrsSpec, eval_exact

PISOT = "Pisot"
SALEM = "Salem"
NEITHER = "Neither"

DEFAULT_PRECISION = 256
DEFAULT_TOL_BITS = 64


@dataclass(frozen=True)
class MinPoly:
    """Monic X^d - a_{d-1} X^{d-1} - ... - a_0, stored as ``coeffs = (a_0, ..., a_{d-1})``.

    Irreducibility is not checked; ``irreducible_asserted`` records that the
    caller vouches for it.
    """

    coeffs: tuple[int, ...]
    irreducible_asserted: bool = True
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("polynomial degree must be >= 1")
        if self.coeffs[0] == 0:
            raise ValueError("constant term must be nonzero")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], **kw) -> "MinPoly":
        """Build from ordinary coefficients, highest degree first, e.g. [1, -1, -1]."""
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) < 2 or coeffs[0] != 1:
            raise ValueError("polynomial must be monic of degree >= 1")
        return cls(tuple(-c for c in reversed(coeffs[1:])), **kw)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def coefficients(self) -> list[int]:
        """Ordinary coefficients, highest degree first."""
        return [1] + [-a for a in reversed(self.coeffs)]

    def is_palindromic(self) -> bool:
        c = self.coefficients()
        return c == c[::-1]

    def to_dict(self) -> dict:
        out = {"coefficients": [str(c) for c in self.coefficients()],
               "irreducible_asserted": self.irreducible_asserted}
        if self.name is not None:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data) -> "MinPoly":
        return cls.from_coefficients(
            [int(c) for c in data["coefficients"]],
            irreducible_asserted=bool(data.get("irreducible_asserted", True)),
            name=data.get("name"),
        )


def trace_ilrs(poly: MinPoly) -> IlrsSpec:
    """Recurrence for Tr(alpha^n) with initial power sums from Newton's identities."""
    a = poly.coeffs
    d = poly.degree
    p: list[int] = []
    for k in range(1, d + 1):
        # p_k = a_{d-1} p_{k-1} + ... + a_{d-k+1} p_1 + k a_{d-k}
        pk = k * a[d - k]
        for i in range(1, k):
            pk += a[d - i] * p[k - i - 1]
        p.append(pk)
    return IlrsSpec(a, 0, tuple(p), name=f"Tr[{poly.name or poly.coefficients()}]")


@dataclass(frozen=True)
class Classification:
    kind: str
    dominant_root: mpmath.mpf | None
    conjugate_moduli: tuple
    tolerance: mpmath.mpf
    precision: int
    palindromic: bool
    irreducible_asserted: bool

    @property
    def is_pisot_or_salem(self) -> bool:
        return self.kind in (PISOT, SALEM)


@lru_cache(maxsize=128)
def _roots(coeffs: tuple[int, ...], prec: int) -> tuple:
    with mpmath.workprec(prec):
        try:
            roots = mpmath.polyroots(list(coeffs), maxsteps=400, extraprec=prec)
        except mpmath.libmp.NoConvergence as exc:
            raise PrecisionInsufficient(
                f"root finding did not converge at {prec} bits"
            ) from exc
    if not isinstance(roots, list):
        roots = [roots]
    return tuple(sorted((mpmath.mpc(r) for r in roots), key=lambda z: -abs(z)))


def classify(poly: MinPoly, precision: int = DEFAULT_PRECISION,
             tol_bits: int = DEFAULT_TOL_BITS) -> Classification:
    """Decide Pisot / Salem / Neither from numerically located roots.

    A conjugate modulus within ``2**-tol_bits`` of 1 cannot be resolved for
    a non-reciprocal polynomial and raises PrecisionInsufficient.  The
    reciprocity test for Salem numbers is exact.
    """
    pal = poly.is_palindromic()
    with mpmath.workprec(precision):
        tol = mpmath.mpf(2) ** (-tol_bits)
        roots = _roots(tuple(poly.coefficients()), precision)
        dom = roots[0]
        others = roots[1:]
        moduli = tuple(abs(z) for z in others)

        def result(kind, dominant=None):
            return Classification(kind, dominant, moduli, tol, precision, pal,
                                  poly.irreducible_asserted)

        if abs(dom.imag) > tol or dom.real <= 1 + tol:
            return result(NEITHER)
        alpha = dom.real
        if any(abs(r - alpha) <= tol for r in moduli):
            return result(NEITHER)
        if any(r > 1 + tol for r in moduli):
            return result(NEITHER)
        inside = [r for r in moduli if r < 1 - tol]
        band = [r for r in moduli if abs(r - 1) <= tol]
        if not band:
            return result(PISOT, alpha)
        if pal and poly.degree >= 4 and poly.degree % 2 == 0 and len(inside) == 1:
            return result(SALEM, alpha)
        if pal:
            return result(NEITHER)
        raise PrecisionInsufficient(
            f"{len(band)} conjugate moduli of {poly.coefficients()} within 2^-{tol_bits} of 1"
        )


def _require_pisot_salem(poly: MinPoly, precision: int) -> Classification:
    cls = classify(poly, precision)
    if not cls.is_pisot_or_salem:
        raise NotPisotOrSalem(f"{poly.coefficients()} is {cls.kind}")
    return cls


def floor_offset(poly: MinPoly, N: int, precision: int = DEFAULT_PRECISION) -> int:
    """g(N) = floor(alpha^N) - Tr(alpha^N), determined with a certified margin."""
    if N < 1:
        raise ValueError("exponent must be >= 1")
    _require_pisot_salem(poly, precision)
    if poly.degree == 1:
        return 0
    wp = precision + N.bit_length() + 32
    with mpmath.workprec(wp):
        roots = _roots(tuple(poly.coefficients()), wp)
        conj = roots[1:]
        powers = [mpmath.power(z, N) for z in conj]
        x = -mpmath.fsum(powers).real  # alpha^N - Tr(alpha^N)
        scale = mpmath.fsum(abs(w) for w in powers)
        err = scale * (N + poly.degree) * mpmath.mpf(2) ** (-(wp - 16))
        lo = mpmath.floor(x - err)
        hi = mpmath.floor(x + err)
        if lo != hi:
            raise PrecisionInsufficient(
                f"alpha^{N} is within {mpmath.nstr(err, 3)} of an integer at {wp} bits"
            )
        return int(lo)


def floor_alpha_pow(poly: MinPoly, N: int, precision: int = DEFAULT_PRECISION,
                    max_steps: int = DEFAULT_MAX_STEPS) -> int:
    """Exact floor(alpha^N) for the dominant root of a Pisot or Salem polynomial."""
    if N - poly.degree > max_steps:
        raise BudgetExceeded(f"Tr(alpha^{N}) needs more than {max_steps} steps")
    g = floor_offset(poly, N, precision)
    return eval_exact(trace_ilrs(poly), N, max_steps) + g


@dataclass(frozen=True)
class FloorOffsetBound:
    """|g(N)| <= G for every exponent N >= N_min."""

    G: int
    N_min: int
    conjugate_sum_bound: mpmath.mpf


def offset_bound(poly: MinPoly, N_min: int = 1,
                 precision: int = DEFAULT_PRECISION) -> FloorOffsetBound:
    """Integer G with |g(N)| <= G for all N >= N_min.

    |g(N)| < S + 1 where S bounds |alpha_2^N + ... + alpha_d^N|, and g is an
    integer, so G = floor(S) + 1 is safe.
    """
    cls = _require_pisot_salem(poly, precision)
    d = poly.degree
    with mpmath.workprec(precision):
        if d == 1:
            S = mpmath.mpf(0)
        elif cls.kind == PISOT:
            rmax = max(cls.conjugate_moduli) + cls.tolerance
            S = (d - 1) * rmax ** N_min
        else:
            recip = min(cls.conjugate_moduli) + cls.tolerance
            S = (d - 2) + recip ** N_min
        G = int(mpmath.floor(S)) + 1
    return FloorOffsetBound(G, N_min, S)
