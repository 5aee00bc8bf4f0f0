"""Univariate polynomials over a finite field.

Polynomials are lists of field elements, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import random

from .fields import GF, FqElem


def strip(f: list) -> list:
    while f and f[-1].is_zero():
        f.pop()
    return f


def deg(f: list) -> int:
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        if i < len(f) and i < len(g):
            out.append(f[i] + g[i])
        elif i < len(f):
            out.append(f[i])
        else:
            out.append(g[i])
    return strip(out)


def sub(f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        if i < len(f) and i < len(g):
            out.append(f[i] - g[i])
        elif i < len(f):
            out.append(f[i])
        else:
            out.append(-g[i])
    return strip(out)


def neg(f):
    return [-c for c in f]


def scale(f, c):
    if c.is_zero():
        return []
    return [a * c for a in f]


def mul(f, g):
    if not f or not g:
        return []
    F = f[0].F
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return strip(out)


def divmod_(f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    if len(f) < len(g):
        return [], f
    F = g[0].F
    inv = g[-1].inverse()
    dg = len(g) - 1
    qt = [F.zero] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv
        if c.is_zero():
            continue
        qt[i - dg] = c
        for j in range(dg + 1):
            f[i - dg + j] = f[i - dg + j] - c * g[j]
    return strip(qt), strip(f[:dg])


def mod(f, g):
    return divmod_(f, g)[1]


def monic(f):
    if not f:
        return f
    inv = f[-1].inverse()
    return [c * inv for c in f]


def gcd(f, g):
    while g:
        f, g = g, mod(f, g)
    return monic(f)


def xgcd(f, g):
    """Return (d, s, t) with s f + t g = d monic."""
    F = (f or g)[0].F
    r0, r1 = f, g
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        qt, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(qt, s1))
        t0, t1 = t1, sub(t0, mul(qt, t1))
    lc = r0[-1].inverse()
    return scale(r0, lc), scale(s0, lc), scale(t0, lc)


def powmod(f, e: int, m):
    F = m[0].F
    result = [F.one]
    base = mod(f, m)
    while e:
        if e & 1:
            result = mod(mul(result, base), m)
        base = mod(mul(base, base), m)
        e >>= 1
    return result


def derivative(f):
    return strip([f[i] * i for i in range(1, len(f))])


def evaluate(f, x):
    F = x.F
    acc = F.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def from_ints(coeffs, F: GF) -> list:
    return strip([F(int(c)) for c in coeffs])


def to_ints(f) -> list[int]:
    if f and f[0].F.k != 1:
        raise ValueError("coefficients are not in the prime field")
    return [c.v[0] for c in f]


def _pth_root(f, F: GF):
    """f(x) = g(x^p); return g with coefficients replaced by their p-th roots."""
    p = F.p
    e = F.order // p  # a^(q/p) is the inverse of Frobenius
    return strip([f[i] ** e for i in range(0, len(f), p)])


def squarefree_decomposition(f) -> list[tuple[list, int]]:
    """Yun/Musser style decomposition of a monic polynomial into (g_i, i)."""
    F = f[0].F
    out: list[tuple[list, int]] = []

    def rec(f, mult):
        if len(f) <= 1:
            return
        df = derivative(f)
        if not df:
            rec(_pth_root(f, F), mult * F.p)
            return
        c = gcd(f, df)
        w = divmod_(f, c)[0]
        i = 1
        while len(w) > 1:
            y = gcd(w, c)
            z = divmod_(w, y)[0]
            if len(z) > 1:
                out.append((monic(z), i * mult))
            i += 1
            w = y
            c = divmod_(c, y)[0]
        if len(c) > 1:
            rec(_pth_root(c, F), mult * F.p)

    rec(monic(f), 1)
    return out


def distinct_degree(f) -> list[tuple[list, int]]:
    """Distinct-degree factorisation of a squarefree monic polynomial."""
    F = f[0].F
    x = [F.zero, F.one]
    out = []
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, F.order, f)
        g = gcd(f, sub(h, x))
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g)[0]
            h = mod(h, f)
    if len(f) > 1:
        out.append((monic(f), len(f) - 1))
    return out


def equal_degree(f, d: int, rng: random.Random) -> list[list]:
    """Split a squarefree monic product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    F = f[0].F
    while True:
        a = strip([F.random(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(kd-1))
            t = a
            s = a
            for _ in range(F.k * d - 1):
                t = mod(mul(t, t), f)
                s = add(s, t)
            b = s
        else:
            b = sub(powmod(a, (F.order**d - 1) // 2, f), [F.one])
        g = gcd(f, b)
        if 1 < len(g) < len(f):
            return equal_degree(g, d, rng) + equal_degree(divmod_(f, g)[0], d, rng)


def factor(f, seed: int = 0) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicity, sorted deterministically."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for fac in equal_degree(h, d, rng):
                out.append((fac, m))
    out.sort(key=lambda t: (len(t[0]), [c.v for c in reversed(t[0])], t[1]))
    return out


def roots(f, seed: int = 0) -> list[FqElem]:
    """Distinct roots of f in its coefficient field."""
    if len(f) <= 1:
        return []
    F = f[0].F
    x = [F.zero, F.one]
    g = gcd(f, sub(powmod(x, F.order, monic(f)), x))
    if len(g) <= 1:
        return []
    rng = random.Random(seed)
    return sorted((-fac[0] for fac in equal_degree(g, 1, rng)), key=lambda r: r.v)


def is_irreducible(f) -> bool:
    """Rabin's irreducibility test."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    F = f[0].F
    f = monic(f)
    x = [F.zero, F.one]
    from .integers import prime_factors

    h = powmod(x, F.order**n, f)
    if sub(h, x):
        return False
    for r in prime_factors(n):
        h = powmod(x, F.order ** (n // r), f)
        if len(gcd(f, sub(h, x))) > 1:
            return False
    return True
