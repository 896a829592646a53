"""Prime sieve, deterministic primality test, trial division, Chebyshev theta."""

from __future__ import annotations

import math
from math import isqrt

from .errors import BudgetExceeded

SIEVE_CAP = 10**8

# Miller-Rabin with the first 13 prime bases is deterministic for
# n < 3,317,044,064,679,887,385,961,981 (Sorenson and Webster, 2015).
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def sieve(limit: int) -> list[int]:
    """All primes p <= limit."""
    if limit > SIEVE_CAP:
        raise BudgetExceeded(f"sieve limit {limit} exceeds cap {SIEVE_CAP}")
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def is_prime(n: int) -> bool:
    """Deterministic below ``MR_DETERMINISTIC_LIMIT``; strong probable prime above."""
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_prime_factor(n: int, bound: int | None = None) -> int | None:
    """Smallest prime dividing |n| by trial division, or None if none <= bound.

    Returns |n| itself when |n| is prime and within the bound.
    """
    n = abs(n)
    if n < 2:
        raise ValueError(f"{n} has no prime factor")
    limit = isqrt(n)
    if bound is not None:
        limit = min(limit, bound)
    if bound is not None and bound < 2:
        return None
    if n % 2 == 0:
        return 2
    p = 3
    while p <= limit:
        if n % p == 0:
            return p
        p += 2
    if limit < isqrt(n):
        return None
    return n if bound is None or n <= bound else None


def primorial(x: int) -> int:
    out = 1
    for p in sieve(x):
        out *= p
    return out


def theta(X: float) -> float:
    """Chebyshev's theta(X) = sum of log p over primes p <= X."""
    if X < 2:
        raise ValueError("theta is defined here for X >= 2")
    return math.fsum(math.log(p) for p in sieve(math.floor(X)))
