"""Units of the real quadratic subfield and of its orders."""

from __future__ import annotations

import math
from fractions import Fraction

from ..arith.integers import factor_integer
from ..errors import EndoRingError
from .field import CMField, Elt

UNIT_POWER_BOUND = 100_000
CF_STEP_BOUND = 10**7


def squarefree_part(n: int) -> tuple[int, int]:
    """(d, s) with n = s^2 d and d squarefree."""
    d, s = 1, 1
    for p, e in factor_integer(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return d, s


def fundamental_unit(d: int) -> tuple[Fraction, Fraction, int]:
    """Fundamental unit (x + y sqrt d) of the maximal order of Q(sqrt d), and its norm.

    Runs through convergents h/k of the continued fraction of omega
    (omega = (1 + sqrt d)/2 or sqrt d) and stops at the first h - k conj(omega)
    of norm +-1.
    """
    if d <= 1:
        raise ValueError("d must be a squarefree integer > 1")
    if d % 4 == 1:
        P, Q = 1, 2
        tr, nm = 1, Fraction(1 - d, 4)
    else:
        P, Q = 0, 1
        tr, nm = 0, Fraction(-d)
    r = math.isqrt(d)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    for _ in range(CF_STEP_BOUND):
        a = (P + r) // Q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        n = h1 * h1 - h1 * k1 * tr + k1 * k1 * nm
        if n in (1, -1):
            # h - k conj(omega) = h - k (P0 - sqrt d)/Q0 with P0/Q0 from the start values
            if d % 4 == 1:
                x, y = Fraction(h1) - Fraction(k1, 2), Fraction(k1, 2)
            else:
                x, y = Fraction(h1), Fraction(k1)
            return x, y, int(n)
        P = a * Q - P
        Q = (d - P * P) // Q
    raise EndoRingError("continued fraction did not reach a unit")


class RealUnits:
    """Units of O0 = O meet K0 for an order O of the CM field."""

    def __init__(self, K: CMField, order_contains):
        self.K = K
        D0 = K.real_disc
        d, s = squarefree_part(D0)
        self.d, self.s = d, s
        x, y, n = fundamental_unit(d)
        # sqrt d = (2 w + c1) / s with w = pi + pibar
        c1 = K.real_poly[1]
        sqrt_d = K.scale(K.add(K.scale(K.real_generator, 2), K.scalar(c1)), Fraction(1, s))
        eps = K.add(K.scalar(x), K.scale(sqrt_d, y))
        self.eps_max = eps
        self.norm_eps_max = n
        # smallest power lying in the order
        cur, j = eps, 1
        while not order_contains(cur):
            cur = K.mul(cur, eps)
            j += 1
            if j > UNIT_POWER_BOUND:
                raise EndoRingError("unit index bound exceeded")
        self.eps = cur
        self.power = j
        self.norm_eps = n**j

    def totally_positive_generator(self) -> Elt:
        """Generator of the totally positive units of O0."""
        K = self.K
        if self.norm_eps == -1:
            return K.mul(self.eps, self.eps)
        return self.eps if K.is_totally_positive(self.eps) else K.neg(self.eps)

    def positive_twists(self, rho0: Elt) -> list[Elt]:
        """Totally positive rho0 * u, u a unit of O0, up to squares of units."""
        K = self.K
        cands = []
        for u in (K.one, self.eps):
            for s in (1, -1):
                r = K.scale(K.mul(rho0, u), s)
                if K.is_totally_positive(r):
                    cands.append(r)
        return cands
