"""Independent reference implementations used only by the tests."""


def brent_cycle(spec, q):
    """(s, L) of the state sequence via Brent's algorithm (no hashing)."""
    d = len(spec.coeffs)

    def f(st):
        nxt = (spec.inhom + sum(a * r for a, r in zip(spec.coeffs, st))) % q
        return st[1:] + (nxt,)

    x0 = tuple(r % q for r in spec.initial)
    power = lam = 1
    tortoise, hare = x0, f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise, power, lam = hare, power * 2, 0
        hare = f(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    assert d >= 1
    return mu + 1, lam


def pisano(q):
    """Pisano period by scanning for the pair (0, 1)."""
    a, b, n = 0, 1, 0
    while True:
        a, b = b, (a + b) % q
        n += 1
        if (a, b) == (0, 1):
            return n


def terms(spec, count):
    vals = list(spec.initial)
    d = len(spec.coeffs)
    while len(vals) < count:
        vals.append(spec.inhom + sum(a * v for a, v in zip(spec.coeffs, vals[-d:])))
    return vals[:count]


def chain_value(levels, n):
    """f(n) for levels listed outermost first, by plain list evaluation."""
    for spec in reversed(levels):
        n = terms(spec, n)[n - 1]
    return n


def primes_upto(x):
    return [p for p in range(2, x + 1) if all(p % k for k in range(2, int(p**0.5) + 1))]



def residue_loop(spec, n, q):
    """R(n) mod q by plain iteration of residues."""
    window = [r % q for r in spec.initial]
    if n <= len(window):
        return window[n - 1]
    for _ in range(n - len(window)):
        nxt = (spec.inhom + sum(a * v for a, v in zip(spec.coeffs, window))) % q
        window = window[1:] + [nxt]
    return window[-1]


def chain_residue(levels, n, q):
    """f(n) mod q: inner levels exactly, outer level by residue iteration."""
    inner = chain_value(levels[1:], n) if len(levels) > 1 else n
    return residue_loop(levels[0], inner, q)


def fib_pair(n):
    """(F(n), F(n+1)) by fast doubling, F(0) = 0."""
    if n == 0:
        return 0, 1
    a, b = fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n & 1 else (c, d)


def lucas_number(n):
    """L(n) = F(n - 1) + F(n + 1), with L(1) = 1, L(2) = 3."""
    f, g = fib_pair(n)
    return 2 * g - f
