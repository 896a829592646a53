"""Exact integer evaluation of inhomogeneous linear recurrences and their compositions.

A sequence of order ``d`` satisfies

    R(n + d) = a[d-1] R(n + d - 1) + ... + a[0] R(n) + b,      n >= 1,

with ``a[0] != 0``.  Indices start at 1 and the first ``d`` terms are part of
the definition.  Everything here is plain Python ``int`` arithmetic; the step
and bit budgets exist so that requests for astronomically large terms fail
fast instead of exhausting memory.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    EmptyOrder,
    NonPositiveIndex,
    NonReversibleLevel,
    ZeroLeadCoefficient,
)

DEFAULT_MAX_STEPS = 10**6
DEFAULT_SIZE_BUDGET = 10**6  # bits


@dataclass(frozen=True)
class IlrsSpec:
    """Recurrence data plus the initial segment R(1), ..., R(d).

    ``coeffs`` is ordered ``(a0, a1, ..., a_{d-1})``.
    """

    coeffs: tuple[int, ...]
    inhom: int
    initial: tuple[int, ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "initial", tuple(int(c) for c in self.initial))
        object.__setattr__(self, "inhom", int(self.inhom))
        if len(self.coeffs) < 1:
            raise EmptyOrder("order d must be >= 1")
        if len(self.initial) != len(self.coeffs):
            raise ArityMismatch(
                f"expected {len(self.coeffs)} initial terms, got {len(self.initial)}"
            )
        if self.coeffs[0] == 0:
            raise ZeroLeadCoefficient("a0 must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def reversible(self) -> bool:
        return self.coeffs[0] in (-1, 1)

    @property
    def label(self) -> str:
        return self.name or f"ILRS{self.coeffs}+{self.inhom}|{self.initial}"

    def canonical(self) -> dict:
        """Name-free canonical form; integers as decimal strings."""
        return {
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
            "inhom": str(self.inhom),
            "initial": [str(c) for c in self.initial],
        }

    def to_dict(self) -> dict:
        out = self.canonical()
        if self.name is not None:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "IlrsSpec":
        return validate_ilrs(data)


def validate_ilrs(raw: Union[IlrsSpec, Mapping]) -> IlrsSpec:
    """Check a candidate definition and return it as an :class:`IlrsSpec`.

    ``raw`` is either an existing spec or a mapping with keys ``coeffs``,
    ``initial`` and optionally ``order``, ``inhom`` and ``name``.  The
    reversibility flag is available afterwards as ``spec.reversible``.
    """
    if isinstance(raw, IlrsSpec):
        return raw
    coeffs = [int(c) for c in raw["coeffs"]]
    initial = [int(c) for c in raw["initial"]]
    order = int(raw.get("order", len(coeffs)))
    if order < 1:
        raise EmptyOrder(f"order must be >= 1, got {order}")
    if len(coeffs) != order:
        raise ArityMismatch(f"order {order} but {len(coeffs)} coefficients")
    if len(initial) != order:
        raise ArityMismatch(f"order {order} but {len(initial)} initial terms")
    return IlrsSpec(tuple(coeffs), int(raw.get("inhom", 0)), tuple(initial), raw.get("name"))


def iter_terms(spec: IlrsSpec) -> Iterator[int]:
    """Yield R(1), R(2), ... forever."""
    coeffs = spec.coeffs
    b = spec.inhom
    yield from spec.initial
    if len(coeffs) == 1:
        a0 = coeffs[0]
        x = spec.initial[0]
        while True:
            x = a0 * x + b
            yield x
    if len(coeffs) == 2:
        a0, a1 = coeffs
        x, y = spec.initial
        if a0 == 1 and a1 == 1 and b == 0:
            while True:
                x, y = y, x + y
                yield y
        while True:
            x, y = y, a1 * y + a0 * x + b
            yield y
    window = deque(spec.initial)
    while True:
        nxt = b
        for a, r in zip(coeffs, window):
            if a == 1:
                nxt += r
            elif a:
                nxt += a * r
        window.append(nxt)
        window.popleft()
        yield nxt


def _check_steps(spec: IlrsSpec, n: int, max_steps: int) -> None:
    if n < 1:
        raise NonPositiveIndex(f"index must be >= 1, got {n}")
    if n - spec.order > max_steps:
        raise BudgetExceeded(
            f"R({n}) of {spec.label} needs {n - spec.order} steps (budget {max_steps})"
        )


def eval_exact(spec: IlrsSpec, n: int, max_steps: int = DEFAULT_MAX_STEPS) -> int:
    """Return R(n) exactly by iterating the recurrence."""
    _check_steps(spec, n, max_steps)
    if n <= spec.order:
        return spec.initial[n - 1]
    for i, value in enumerate(iter_terms(spec), start=1):
        if i == n:
            return value
    raise AssertionError("unreachable")


def eval_many(
    spec: IlrsSpec,
    indices: Iterable[int],
    max_steps: int = DEFAULT_MAX_STEPS,
    size_budget: Optional[int] = None,
) -> dict[int, int]:
    """Evaluate R at several indices with a single pass of the recurrence."""
    wanted = set(indices)
    if not wanted:
        return {}
    top = max(wanted)
    if min(wanted) < 1:
        raise NonPositiveIndex(f"index must be >= 1, got {min(wanted)}")
    _check_steps(spec, top, max_steps)
    out = {}
    for i, value in enumerate(iter_terms(spec), start=1):
        if size_budget is not None and value.bit_length() > size_budget:
            raise BudgetExceeded(
                f"R({i}) of {spec.label} exceeds {size_budget} bits before index {top}"
            )
        if i in wanted:
            out[i] = value
            if i == top:
                return out
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class CompositionChain:
    """f(n) = R0(R1(...RM(n)...)); ``levels[0]`` is the outermost sequence.

    Every inner level (index >= 1) has to be reversible; the outer level is
    exempt.
    """

    levels: tuple[IlrsSpec, ...]

    def __post_init__(self):
        levels = tuple(validate_ilrs(lv) for lv in self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise EmptyOrder("a composition chain needs at least one level")
        for j, lv in enumerate(levels[1:], start=1):
            if not lv.reversible:
                raise NonReversibleLevel(
                    f"inner level {j} ({lv.label}) is not reversible: a0={lv.coeffs[0]}, must be +-1"
                )

    @classmethod
    def of(cls, *levels: IlrsSpec) -> "CompositionChain":
        return cls(tuple(levels))

    @property
    def M(self) -> int:
        return len(self.levels) - 1

    @property
    def outer(self) -> IlrsSpec:
        return self.levels[0]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(lv.order for lv in self.levels)

    @property
    def order_product(self) -> int:
        """D = d0 * d1 * ... * dM."""
        out = 1
        for d in self.orders:
            out *= d
        return out

    def inner(self) -> Optional["CompositionChain"]:
        """The chain U = R1 o ... o RM, or None when M = 0."""
        if self.M == 0:
            return None
        return CompositionChain(self.levels[1:])

    @property
    def label(self) -> str:
        return " o ".join(lv.label for lv in self.levels)

    def to_list(self) -> list[dict]:
        return [lv.to_dict() for lv in self.levels]

    @classmethod
    def from_list(cls, data: Sequence[Mapping]) -> "CompositionChain":
        return cls(tuple(validate_ilrs(d) for d in data))


SpecOrChain = Union[IlrsSpec, CompositionChain]


def as_chain(obj: SpecOrChain) -> CompositionChain:
    if isinstance(obj, CompositionChain):
        return obj
    return CompositionChain((obj,))


def eval_chain_exact(
    chain: SpecOrChain,
    n: int,
    size_budget: int = DEFAULT_SIZE_BUDGET,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> int:
    """Return f(n) = R0(R1(...RM(n)...)) exactly.

    Raises BudgetExceeded as soon as an intermediate index would need more
    than ``max_steps`` recurrence steps or a value exceeds ``size_budget``
    bits, and NonPositiveIndex if an inner value drops below 1.
    """
    chain = as_chain(chain)
    return eval_chain_many(chain, [n], size_budget, max_steps)[n]


def eval_chain_many(
    chain: SpecOrChain,
    indices: Iterable[int],
    size_budget: int = DEFAULT_SIZE_BUDGET,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> dict[int, int]:
    """Evaluate the composition at several indices, one pass per level."""
    chain = as_chain(chain)
    indices = list(indices)
    current = {n: n for n in indices}
    for lv in reversed(chain.levels):
        args = set(current.values())
        bad = [x for x in args if x < 1]
        if bad:
            raise NonPositiveIndex(f"{lv.label} evaluated at non-positive index {min(bad)}")
        vals = eval_many(lv, args, max_steps=max_steps, size_budget=size_budget)
        current = {n: vals[x] for n, x in current.items()}
    return current


@dataclass(frozen=True)
class WindowReport:
    """Finite evidence over terms 1..window; not a proof of any asymptotic claim."""

    window: int
    all_positive: bool
    strictly_increasing: bool
    min_value: int
    max_value: int


def check_window(
    obj: SpecOrChain,
    K: int,
    size_budget: int = DEFAULT_SIZE_BUDGET,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> WindowReport:
    """Evaluate terms 1..K exactly and report positivity and monotonicity."""
    if K < 2:
        raise ValueError("window must have K >= 2")
    vals = eval_chain_many(as_chain(obj), range(1, K + 1), size_budget, max_steps)
    seq = [vals[n] for n in range(1, K + 1)]
    return WindowReport(
        window=K,
        all_positive=all(v > 0 for v in seq),
        strictly_increasing=all(x < y for x, y in zip(seq, seq[1:])),
        min_value=min(seq),
        max_value=max(seq),
    )


def chain_window(
    chain: SpecOrChain,
    k_max: int = 48,
    size_budget: int = 10**5,
    max_steps: int = 10**5,
) -> list[int]:
    """Exact values f(1), ..., f(K) for the largest K <= k_max within budget.

    Used as growth evidence; the returned list may be shorter than ``k_max``
    when later terms are too large to evaluate.
    """
    chain = as_chain(chain)
    lo, hi = 0, k_max
    # terms are evaluated in one pass per level, so probe the feasible prefix
    # length by bisection instead of growing one index at a time
    best: list[int] = []
    while lo < hi:
        mid = (lo + hi + 1) // 2
        try:
            vals = eval_chain_many(chain, range(1, mid + 1), size_budget, max_steps)
        except (BudgetExceeded, NonPositiveIndex):
            hi = mid - 1
            continue
        best = [vals[n] for n in range(1, mid + 1)]
        lo = mid
    if len(best) != lo:
        vals = eval_chain_many(chain, range(1, lo + 1), size_budget, max_steps)
        best = [vals[n] for n in range(1, lo + 1)]
    return best
