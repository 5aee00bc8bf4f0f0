"""Integer utilities: primality, factorisation, small prime lists."""

from __future__ import annotations

import math
import random
from functools import lru_cache

import gmpy2

from ..errors import FactorizationError

TRIAL_BOUND = 10**6


@lru_cache(maxsize=4)
def primes_up_to(bound: int) -> tuple[int, ...]:
    """All primes p <= bound (simple sieve)."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i in range(bound + 1) if sieve[i])


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 40))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    return int(gmpy2.next_prime(n))


def is_square(n: int) -> bool:
    return n >= 0 and bool(gmpy2.is_square(n))


def _brent(n: int, rng: random.Random, max_iter: int) -> int | None:
    if n % 2 == 0:
        return 2
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > max_iter:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def factor_integer(
    n: int, trial_bound: int = TRIAL_BOUND, rho_iterations: int = 10**7, seed: int = 1
) -> dict[int, int]:
    """Prime factorisation of a nonzero integer as ``{p: e}`` (sign dropped).

    Trial division up to ``trial_bound`` followed by Pollard rho with Brent's
    cycle detection.  Raises :class:`FactorizationError` when the rho budget
    is exhausted on a composite cofactor.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in primes_up_to(min(trial_bound, max(2, math.isqrt(n)))):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n == 1:
        return out
    rng = random.Random(seed)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = None
        for _ in range(8):
            d = _brent(m, rng, rho_iterations)
            if d is not None and 1 < d < m:
                break
        if d is None or not 1 < d < m:
            raise FactorizationError(f"could not split composite {m}")
        stack += [d, m // d]
    return dict(sorted(out.items()))


def prime_factors(n: int) -> list[int]:
    return sorted(factor_integer(n))


def divisors(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def crt(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = math.gcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        t = ((r - x) // g) * pow(m // g, -1, n // g) % (n // g)
        x += m * t
        m = m // g * n
        x %= m
    return x


def integer_nth_root(n: int, k: int) -> tuple[int, bool]:
    r, exact = gmpy2.iroot(n, k)
    return int(r), bool(exact)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
