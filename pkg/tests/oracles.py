"""Brute-force reference computations used only by the tests."""

import random
from collections import Counter

import numpy as np

from endoring.arith import fpoly
from endoring.arith.fields import GF
from endoring.errors import InputError
from endoring.genus2.curve import Curve


def random_curve(q, rng, degree=5):
    while True:
        f = [rng.randrange(q) for _ in range(degree)] + [1]
        try:
            return Curve(q, tuple(f))
        except InputError:
            continue


def count_points_brute(C, k):
    """#C(F_{q^k}) by evaluating f at every element (degree-5 models: one point at infinity)."""
    F = GF(C.q, k)
    f = fpoly.from_ints(C.f, F)
    n = 1 if C.degree == 5 else (2 if F(C.f[-1]).is_square() else 0)
    for x in F.elements():
        y2 = fpoly.evaluate(f, x)
        n += 1 if y2.is_zero() else (2 if y2.is_square() else 0)
    return n


def mumford_pairs(C):
    """All reduced Mumford pairs over F_q as ((u0, u1, ...), (v0, ...)) with monic u."""
    q = C.q
    f = [c % q for c in C.f]

    def fval(x):
        return sum(c * pow(x, i, q) for i, c in enumerate(f)) % q

    out = [((1,), ())]
    for a in range(q):
        for b in range(q):
            if (b * b - fval(a)) % q == 0:
                out.append(((-a % q, 1), (b,)))
    v1, v0 = np.meshgrid(np.arange(q, dtype=np.int64), np.arange(q, dtype=np.int64), indexing="ij")
    for c0 in range(q):
        for c1 in range(q):
            # f mod x^2 + c1 x + c0
            r = [0, 0]
            rem = list(f)
            for d in range(len(rem) - 1, 1, -1):
                lc = rem[d]
                rem[d] = 0
                rem[d - 1] = (rem[d - 1] - lc * c1) % q
                rem[d - 2] = (rem[d - 2] - lc * c0) % q
            r = rem[:2]
            lin = (2 * v1 * v0 - v1 * v1 * c1) % q
            const = (v0 * v0 - v1 * v1 * c0) % q
            hits = np.argwhere((lin == r[1]) & (const == r[0]))
            for i, j in hits:
                out.append(((c0, c1, 1), tuple(x for x in (int(v0[i, j]), int(v1[i, j])))))
    return out


def jacobian_order_brute(C):
    return len(mumford_pairs(C))


def key_of(D):
    return (tuple(c.v[0] for c in D.u), tuple(c.v[0] for c in D.v))


def normalize_pair(u, v):
    v = list(v)
    while v and v[-1] == 0:
        v.pop()
    return (tuple(u), tuple(v))


def hit_counts(J, draws, seed):
    rng = random.Random(seed)
    return Counter(key_of(J.random_point(rng)) for _ in range(draws))


def superring_candidates(K, basis, p):
    """Elements y/p, y in span(basis) mod p, y not in p*span, whose first two power sums are integral.

    Any x = y/p integral over Z lies in this list; survivors are then tested exactly.
    """
    from fractions import Fraction

    t = [int(K.trace(b)) for b in basis]
    G = [[int(K.trace(K.mul(a, b))) for b in basis] for a in basis]
    p2 = p * p
    r = np.arange(p, dtype=np.int64)
    c1, c2, c3 = np.meshgrid(r, r, r, indexing="ij")
    out = []
    for c0 in range(p):
        cs = [np.full_like(c1, c0), c1, c2, c3]
        tr = sum(cs[i] * t[i] for i in range(4)) % p
        q = np.zeros_like(c1)
        for i in range(4):
            for j in range(4):
                q = (q + (cs[i] * cs[j] % p2) * (G[i][j] % p2)) % p2
        hits = np.argwhere((tr == 0) & (q == 0))
        for h in hits:
            c = (c0, int(h[0]), int(h[1]), int(h[2]))
            if any(c):
                y = K.zero
                for ci, b in zip(c, basis):
                    y = K.add(y, K.scale(b, ci))
                out.append(K.scale(y, Fraction(1, p)))
    return out


def is_integral_element(K, x):
    import sympy

    M = sympy.Matrix(K.mult_matrix(x))
    return all(sympy.Rational(c).q == 1 for c in M.charpoly().all_coeffs())
