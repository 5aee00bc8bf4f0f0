"""Weil polynomials of abelian surfaces: power sums, screens, invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from ..errors import InputError


def power_sums_from_coeffs(coeffs: list[int], count: int) -> list[int]:
    """Newton power sums p_0..p_count of the roots of a monic polynomial.

    ``coeffs`` are low to high with leading coefficient 1.
    """
    n = len(coeffs) - 1
    # e_k with the sign convention x^n - e1 x^{n-1} + e2 x^{n-2} ...
    e = [(-1) ** k * coeffs[n - k] for k in range(n + 1)]
    p = [n]
    for k in range(1, count + 1):
        s = (-1) ** (k - 1) * k * e[k] if k <= n else 0
        for i in range(1, min(k, n + 1)):
            s += (-1) ** (i - 1) * e[i] * p[k - i]
        p.append(s)
    return p


def coeffs_from_power_sums(p: list[int], n: int) -> list[int]:
    """Monic degree-n polynomial (low to high) with the given power sums."""
    e = [Fraction(1)]
    for k in range(1, n + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * p[i]
        e.append(s / k)
    out = [(-1) ** k * e[k] for k in range(n + 1)]
    if any(c.denominator != 1 for c in out):
        raise ValueError("power sums do not define an integral polynomial")
    return [int(c) for c in reversed(out)]


@dataclass(frozen=True)
class FrobPoly:
    """chi(t) = t^4 + c1 t^3 + c2 t^2 + c1 q t + q^2."""

    q: int
    c1: int
    c2: int

    def __post_init__(self):
        if self.q < 2:
            raise InputError("q must be at least 2")

    @property
    def coeffs(self) -> list[int]:
        """Coefficients low to high."""
        q = self.q
        return [q * q, self.c1 * q, self.c2, self.c1, 1]

    def __call__(self, t: int) -> int:
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def roots(self) -> np.ndarray:
        return np.roots(list(reversed([float(c) for c in self.coeffs])))

    def satisfies_weil(self, rtol: float = 1e-6) -> bool:
        import mpmath

        mpmath.mp.dps = 40
        rts = mpmath.polyroots(list(reversed(self.coeffs)), maxsteps=200, extraprec=200)
        target = mpmath.sqrt(self.q)
        return all(abs(abs(r) - target) <= rtol * target for r in rts)

    def power_sums(self, count: int) -> list[int]:
        return power_sums_from_coeffs(self.coeffs, count)

    def charpoly_of_power(self, n: int) -> list[int]:
        """Characteristic polynomial of pi^n (low to high)."""
        p = self.power_sums(4 * n)
        return coeffs_from_power_sums([p[n * j] for j in range(5)], 4)

    def jacobian_order(self, k: int = 1) -> int:
        """#Jac(F_{q^k}) = chi_{pi^k}(1)."""
        return sum(self.charpoly_of_power(k))

    def curve_count(self, k: int = 1) -> int:
        """#C(F_{q^k}) = q^k + 1 - s_k."""
        return self.q**k + 1 - self.power_sums(k)[k]

    def discriminant(self) -> int:
        t = sympy.Symbol("t")
        return int(sympy.discriminant(sympy.Poly(list(reversed(self.coeffs)), t)))

    def is_irreducible(self) -> bool:
        t = sympy.Symbol("t")
        return sympy.Poly(list(reversed(self.coeffs)), t).is_irreducible

    def to_json(self) -> dict:
        return {"q": str(self.q), "c1": str(self.c1), "c2": str(self.c2),
                "coefficients": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, d: dict) -> "FrobPoly":
        return cls(int(d["q"]), int(d["c1"]), int(d["c2"]))

    @classmethod
    def from_coeffs(cls, coeffs, q: int) -> "FrobPoly":
        c = [int(x) for x in coeffs]
        if len(c) != 5 or c[4] != 1 or c[0] != q * q or c[1] != c[3] * q:
            raise InputError("polynomial does not have the shape of a genus-2 Weil polynomial")
        return cls(q, c[3], c[2])


def _prime_base(q: int) -> int:
    from ..arith.integers import factor_integer

    fac = factor_integer(q)
    if len(fac) != 1:
        raise InputError("q is not a prime power")
    return next(iter(fac))


def classify_variety(chi: FrobPoly) -> dict:
    """Ordinarity and the absolute-simplicity screen."""
    p = _prime_base(chi.q)
    ordinary = chi.c2 % p != 0
    simple = chi.is_irreducible()
    if simple:
        t = sympy.Symbol("t")
        for n in (2, 3, 4, 6, 12):
            poly = sympy.Poly(list(reversed(chi.charpoly_of_power(n))), t)
            if not poly.is_irreducible:
                simple = False
                break
    return {"ordinary": bool(ordinary), "likely_absolutely_simple": bool(simple)}
