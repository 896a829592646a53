"""Preperiod/period detection of a recurrence modulo q and evaluation at huge indices.

The state at index n is the vector (R(n), ..., R(n+d-1)) mod q.  The
transition is affine on (Z/q)^d, so the state sequence is eventually
periodic; the first revisit of a state gives the minimal preperiod ``s`` and
minimal period ``L`` of the state sequence.  Any multiple of ``L`` is a period
of the residues R(n) mod q for n >= s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, log2
from typing import Optional

from .errors import BudgetExceeded, NonPositiveIndex
from .ilrs import IlrsSpec

DEFAULT_MAX_STATES = 5 * 10**6
TABLE_LIMIT = 200_000


@dataclass(frozen=True)
class ModState:
    q: int
    vec: tuple[int, ...]
    base_index: int

    def __post_init__(self):
        if not all(0 <= r < self.q for r in self.vec):
            raise ValueError("residues must lie in [0, q)")


@dataclass(frozen=True)
class PeriodInfo:
    """(R(n) mod q)_{n >= s} is purely L-periodic; s and L are minimal at state level.

    ``bound_check`` is True when s, L <= q**d was confirmed and False when
    q**d is too large to bother (d * log2(q) > 64).
    """

    q: int
    s: int
    L: int
    bound_check: bool = False

    def __post_init__(self):
        if self.s < 1 or self.L < 1:
            raise ValueError(f"invalid period data s={self.s} L={self.L}")

    def to_dict(self) -> dict:
        return {"q": str(self.q), "s": str(self.s), "L": str(self.L),
                "bound_check": self.bound_check}

    @classmethod
    def from_dict(cls, data) -> "PeriodInfo":
        return cls(int(data["q"]), int(data["s"]), int(data["L"]), bool(data["bound_check"]))


def initial_state(spec: IlrsSpec, q: int) -> ModState:
    return ModState(q, tuple(r % q for r in spec.initial), 1)


def _stepper(spec: IlrsSpec, q: int):
    coeffs = [a % q for a in spec.coeffs]
    b = spec.inhom % q
    if len(coeffs) == 1:
        a0 = coeffs[0]
        return lambda st: ((a0 * st[0] + b) % q,)
    if len(coeffs) == 2:
        a0, a1 = coeffs
        return lambda st: (st[1], (a0 * st[0] + a1 * st[1] + b) % q)

    def step(st):
        nxt = b
        for a, r in zip(coeffs, st):
            nxt += a * r
        return st[1:] + (nxt % q,)

    return step


def find_period(
    spec: IlrsSpec,
    q: int,
    max_states: int = DEFAULT_MAX_STATES,
    cache=None,
) -> PeriodInfo:
    """Minimal preperiod and period of the state sequence of ``spec`` mod ``q``.

    ``cache`` may be any object with a ``get_or_compute(spec, q, fn)`` method
    (see :class:`primefree.cache.PeriodCache`).
    """
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    if cache is not None:
        return cache.get_or_compute(spec, q, lambda: _find_period(spec, q, max_states))
    return _find_period(spec, q, max_states)


def _find_period(spec: IlrsSpec, q: int, max_states: int) -> PeriodInfo:
    step = _stepper(spec, q)
    state = initial_state(spec, q).vec
    seen = {state: 1}
    n = 1
    while True:
        state = step(state)
        n += 1
        first = seen.get(state)
        if first is not None:
            s, L = first, n - first
            break
        if n > max_states:
            raise BudgetExceeded(f"no repeated state mod {q} within {max_states} states")
        seen[state] = n
    d = spec.order
    bound_check = False
    if d * log2(q) <= 64:
        bound = q**d
        if s > bound or L > bound:
            raise AssertionError(f"s={s}, L={L} exceed q^d={bound}")
        bound_check = True
    if gcd(spec.coeffs[0], q) == 1:
        # the state map is invertible, so the orbit is a pure cycle
        assert s == 1, f"invertible state map but preperiod {s}"
    return PeriodInfo(q, s, L, bound_check)


def step_mod(spec: IlrsSpec, n: int, q: int) -> int:
    """R(n) mod q by direct stepping, no period shortcut."""
    if n < 1:
        raise NonPositiveIndex(f"index must be >= 1, got {n}")
    state = initial_state(spec, q).vec
    if n <= spec.order:
        return state[n - 1]
    step = _stepper(spec, q)
    for _ in range(n - spec.order):
        state = step(state)
    return state[-1]


def reduce_index(n: int, period: PeriodInfo) -> int:
    """Smallest index congruent to ``n`` under the period, never below s."""
    if n <= period.s + period.L:
        return n
    return period.s + (n - period.s) % period.L


def eval_mod(
    spec: IlrsSpec,
    n: int,
    q: int,
    period: Optional[PeriodInfo] = None,
    cache=None,
) -> int:
    """R(n) mod q for arbitrarily large n."""
    if n < 1:
        raise NonPositiveIndex(f"index must be >= 1, got {n}")
    if period is None:
        period = find_period(spec, q, cache=cache)
    elif period.q != q:
        raise ValueError(f"period data is for modulus {period.q}, not {q}")
    r = reduce_index(n, period)
    if period.s + period.L <= TABLE_LIMIT:
        return _residue_table(spec, q, period.s + period.L)[r - 1]
    return step_mod(spec, r, q)


@lru_cache(maxsize=512)
def _residue_table(spec: IlrsSpec, q: int, length: int) -> tuple[int, ...]:
    state = initial_state(spec, q).vec
    out = list(state[:length])
    step = _stepper(spec, q)
    while len(out) < length:
        state = step(state)
        out.append(state[-1])
    return tuple(out)


def check_prime_preperiod_bound(spec: IlrsSpec, p: int, cache=None) -> bool:
    """True iff the detected preperiod mod the prime p is at most |a0|**d."""
    s = find_period(spec, p, cache=cache).s
    return s <= abs(spec.coeffs[0]) ** spec.order
