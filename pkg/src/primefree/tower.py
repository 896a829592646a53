"""Periods of composed sequences f = R0 o U modulo q, with U = R1 o ... o RM.

If R0 mod q is purely Q-periodic from index s0, and U(n) >= s0 for n >= m,
then f(n) mod q only depends on U(n) mod Q.  The inner chain is reversible
at every level, so its residues mod Q are purely periodic from 1 and the
same argument recurses with Q in place of q.  Minimal periods are used at
every level, which keeps the tower moduli small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .errors import BudgetExceeded, IndexBelowTowerStart, NonMonotoneEvidence
from .ilrs import (
    DEFAULT_MAX_STEPS,
    DEFAULT_SIZE_BUDGET,
    CompositionChain,
    SpecOrChain,
    as_chain,
    chain_window,
    eval_chain_exact,
)
from .modular import PeriodInfo, eval_mod, find_period

PER_MODULUS = "per-modulus"
UNIFORM = "uniform"

WINDOW_K = 48
WINDOW_STEPS = 10**5
WINDOW_BITS = 10**5
MIN_TAIL = 3


@dataclass(frozen=True)
class TowerLevel:
    index: int
    modulus: int
    period: PeriodInfo


@dataclass(frozen=True)
class TowerReduction:
    """Everything needed to evaluate ``chain`` mod ``q`` at large indices.

    ``m`` is the index from which f(n) mod q is purely ``L_total``-periodic.
    ``inner`` is the reduction of U modulo the outer period (None when M = 0
    or when the outer period is 1).  ``window`` is the number of exact terms
    of U that back the claim U(n) >= s0 for n >= m.
    """

    q: int
    chain: CompositionChain
    outer: PeriodInfo
    m: int
    L_total: int
    inner: Optional["TowerReduction"] = None
    convention: str = PER_MODULUS
    window: int = 0
    threshold: int = 1

    @property
    def levels(self) -> list[TowerLevel]:
        out = []
        node, j = self, 0
        while node is not None:
            out.append(TowerLevel(j, node.q, node.outer))
            node = node.inner
            j += 1
        return out

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "m": str(self.m),
            "L_total": str(self.L_total),
            "convention": self.convention,
            "window": self.window,
            "levels": [
                {"index": lv.index, "modulus": str(lv.modulus), **lv.period.to_dict()}
                for lv in self.levels
            ],
        }


@lru_cache(maxsize=256)
def _window(chain: CompositionChain, k_max: int) -> tuple[int, ...]:
    return tuple(chain_window(chain, k_max, WINDOW_BITS, WINDOW_STEPS))


def growth_window(chain: SpecOrChain, k_max: int = WINDOW_K) -> tuple[int, ...]:
    """Exact values f(1..K) used as growth evidence (memoized per chain)."""
    return _window(as_chain(chain), k_max)


def find_tower_start(chain: Optional[SpecOrChain], s0: int, k_max: int = WINDOW_K) -> int:
    """Smallest m such that the window supports U(n) >= s0 for all n >= m.

    ``chain`` is U; ``None`` stands for the identity U(n) = n.  The evidence
    is: every exact window value from m on is >= s0 and the last
    ``MIN_TAIL`` + 1 window values are strictly increasing.  This is finite
    evidence for the hypothesis U(n) -> infinity, not a proof of it.
    """
    if s0 < 1:
        raise ValueError("s0 must be >= 1")
    if chain is None:
        return s0
    vals = growth_window(chain, k_max)
    if len(vals) < MIN_TAIL + 1:
        raise NonMonotoneEvidence(
            f"only {len(vals)} exact terms of {as_chain(chain).label} fit the budget"
        )
    tail = vals[-(MIN_TAIL + 1):]
    if not all(x < y for x, y in zip(tail, tail[1:])):
        raise NonMonotoneEvidence(
            f"{as_chain(chain).label} is not increasing at the end of a {len(vals)}-term window"
        )
    if vals[-1] < s0:
        raise NonMonotoneEvidence(
            f"{as_chain(chain).label} stays below {s0} on a {len(vals)}-term window"
        )
    m = len(vals)
    while m > 1 and vals[m - 2] >= s0:
        m -= 1
    return m


def _uniform_threshold(chain: CompositionChain, s0: int) -> int:
    a0 = abs(chain.outer.coeffs[0])
    return max(s0, a0 ** chain.outer.order)


def chain_period(
    chain: SpecOrChain,
    q: int,
    cache=None,
    convention: str = PER_MODULUS,
    k_max: int = WINDOW_K,
) -> TowerReduction:
    """Build the period tower of ``chain`` modulo ``q``.

    With ``convention="uniform"`` the start index uses the modulus-free
    threshold |a0|**d0 (valid for every prime modulus at once) instead of
    the detected preperiod.
    """
    chain = as_chain(chain)
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    if convention not in (PER_MODULUS, UNIFORM):
        raise ValueError(f"unknown convention {convention!r}")
    outer = find_period(chain.outer, q, cache=cache)
    s0, Q = outer.s, outer.L
    threshold = _uniform_threshold(chain, s0) if convention == UNIFORM else s0
    inner_chain = chain.inner()
    if inner_chain is None:
        return TowerReduction(q, chain, outer, threshold, Q, None, convention, 0, threshold)
    m = find_tower_start(inner_chain, threshold, k_max)
    window = len(growth_window(inner_chain, k_max))
    if Q == 1:
        # R0 is constant mod q from s0 on: any index >= s0 gives the same residue
        return TowerReduction(q, chain, outer, m, 1, None, convention, window, threshold)
    inner = chain_period(inner_chain, Q, cache=cache, convention=PER_MODULUS, k_max=k_max)
    return TowerReduction(
        q, chain, outer, max(m, inner.m), inner.L_total, inner, convention, window, threshold
    )


def _eval_tower(tower: TowerReduction, n: int, cache) -> int:
    chain = tower.chain
    s0 = tower.outer.s
    inner_chain = chain.inner()
    if inner_chain is None:
        t = n
    elif tower.inner is None:
        t = s0
    else:
        Q = tower.outer.L
        u = _eval_tower(tower.inner, n, cache)
        t = s0 + (u - s0) % Q
    return eval_mod(chain.outer, t, tower.q, tower.outer)


def eval_chain_mod(
    chain: SpecOrChain,
    n: int,
    q: int,
    tower: Optional[TowerReduction] = None,
    cache=None,
    size_budget: int = DEFAULT_SIZE_BUDGET,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> int:
    """f(n) mod q without materializing U(n).

    Below the tower start the value is computed exactly if the budgets
    allow; otherwise IndexBelowTowerStart is raised.
    """
    chain = as_chain(chain)
    if tower is None:
        tower = chain_period(chain, q, cache=cache)
    elif tower.q != q:
        raise ValueError(f"tower is for modulus {tower.q}, not {q}")
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    if n < tower.m:
        try:
            return eval_chain_exact(chain, n, size_budget, max_steps) % q
        except BudgetExceeded as exc:
            raise IndexBelowTowerStart(
                f"n={n} is below the tower start m={tower.m} and exact evaluation failed"
            ) from exc
    return _eval_tower(tower, n, cache)
