"""CM types, the reflex field and the composite of type norms N_{Phi^r} o N_Phi.

Write the complex roots of chi as pi_1, pi_2, conj(pi_1), conj(pi_2) and
fix Phi = {pi -> pi_1, pi -> pi_2}.  For a primitive quartic type the
composite map K -> K is

    x  ->  x^2 * x' * conj(x')  =  x * N_{K/Q}(x) / conj(x),

(x' the other conjugate), both for cyclic and for dihedral Galois closure.
On ideals this gives p -> (N(p) p conj(p)^{-1}, N(p)^2).  A biquadratic K
has only non-primitive types.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ..arith.integers import is_square
from ..errors import NotPrimitiveError
from .field import PRECISION_DIGITS, CMField, Elt
from .ideals import FracIdeal, PrimeIdeal
from .polarized import PolarizedIdeal


def galois_type(K: CMField) -> str:
    """'V4', 'C4' or 'D4' for the Galois group of the normal closure."""
    D0 = K.real_disc
    a = K.real_generator
    delta = K.sub(K.mul(a, a), K.scalar(4 * K.q))  # K = K0(sqrt delta)
    n = K.norm(delta)  # = N_{K0/Q}(delta)^2
    from .polarized import _rational_sqrt

    d1 = _rational_sqrt(n)
    d1 = int(d1) if d1 is not None else None
    # N_{K0/Q}(delta) has the sign of the product of two negative numbers
    if d1 is None:
        raise ValueError("unexpected non-square norm")
    if is_square(d1):
        return "V4"
    if is_square(d1 * D0):
        return "C4"
    return "D4"


def composite_exponents(K: CMField) -> tuple[int, int, int, int]:
    """Exponents e with N_{Phi^r}(N_Phi(x)) = prod sigma_i(x)^{e_i} over (x, x', conj x, conj x')."""
    t = galois_type(K)
    if t == "V4":
        raise NotPrimitiveError("biquadratic CM field: the CM type is not primitive")
    return (2, 1, 0, 1)


@dataclass
class ReflexContext:
    K: CMField
    galois: str
    exponents: tuple[int, int, int, int]
    precision: int = PRECISION_DIGITS

    @classmethod
    def from_field(cls, K: CMField) -> "ReflexContext":
        return cls(K, galois_type(K), composite_exponents(K))

    def type_norm_numeric(self, x: Elt):
        """N_Phi(x) = phi_1(x) phi_2(x) as a complex number."""
        with mpmath.workdps(self.precision):
            return self.K.embed(x, 0) * self.K.embed(x, 1)

    def reflex_minpoly(self) -> list[int]:
        """Integer minimal polynomial data of N_Phi(pi) (rounded, verified by degree)."""
        K = self.K
        with mpmath.workdps(self.precision):
            r = K.complex_roots
            vals = [r[0] * r[1], r[2] * r[3], r[0] * r[3], r[2] * r[1]]
            poly = [mpmath.mpf(1)]
            for v in vals:
                poly = [a - v * b for a, b in zip(poly + [0], [0] + poly)]
            coeffs = [int(mpmath.nint(mpmath.re(c))) for c in poly]
            for c, e in zip(coeffs, poly):
                if abs(mpmath.re(e) - c) > mpmath.mpf(10) ** (-self.precision // 3) * max(1, abs(c)):
                    raise ArithmeticError("reflex polynomial not recognised")
        return list(reversed(coeffs))

    def composite_element(self, x: Elt) -> Elt:
        """N_{Phi^r}(N_Phi(x)) = x N(x) / conj(x), exactly."""
        K = self.K
        return K.scale(K.div(x, K.conj(x)), K.norm(x))

    def action(self, P: FracIdeal) -> PolarizedIdeal:
        """Polarized image (N(P) P conj(P)^{-1}, N(P)^2) of an invertible ideal."""
        K = self.K
        n = P.norm
        b = (P * P.conj().inverse()).scale_rational(n)
        return PolarizedIdeal(b, K.scalar(n * n))

    def action_reduced(self, P: FracIdeal) -> PolarizedIdeal:
        """The class of the image, represented as (P conj(P)^{-1}, 1)."""
        K = self.K
        return PolarizedIdeal(P * P.conj().inverse(), K.one)


def polarized_prime(P: PrimeIdeal) -> PolarizedIdeal:
    """(P, ell) when P conj(P) = ell O (direct use of a prime)."""
    K = P.K
    x = PolarizedIdeal(P, K.scalar(P.ell))
    x.validate()
    return x


def has_direct_polarization(P: PrimeIdeal) -> bool:
    prod = P * P.conj()
    return prod.lattice == P.order.lattice.scale(Fraction(P.ell))
