"""Polarized ideals (a, rho) with a conj(a) = rho O and rho totally positive.

For such a pair the form q(x) = Tr(x conj(x) / rho) on a is integral on
x conj(x) / rho in the totally positive part of O meet K0, hence q >= 4 with
equality exactly when x conj(x) = rho.  So the class is trivial iff the
minimum is 4, and the minimal vectors give a canonical representative.
"""

from __future__ import annotations

from fractions import Fraction

from ..arith.lattice import minimal_vectors
from ..errors import InputError
from .field import CMField, Elt
from .ideals import FracIdeal, gram, lll_basis
from .orders import Order
from .realquad import RealUnits


class PolarizedIdeal:
    __slots__ = ("a", "rho", "_key")

    def __init__(self, a: FracIdeal, rho: Elt, check: bool = False):
        self.a = a
        self.rho = tuple(Fraction(x) for x in rho)
        self._key = None
        if check:
            self.validate()

    @property
    def K(self) -> CMField:
        return self.a.K

    @property
    def order(self) -> Order:
        return self.a.order

    def validate(self):
        K = self.K
        if not K.is_totally_positive(self.rho):
            raise InputError("rho is not totally positive")
        lhs = (self.a * self.a.conj()).lattice
        rhs = self.order.lattice
        rhs = FracIdeal(self.order, rhs).scale(self.rho).lattice
        if lhs != rhs:
            raise InputError("a conj(a) != rho O")
        return True

    @classmethod
    def unit(cls, O: Order) -> "PolarizedIdeal":
        return cls(FracIdeal.unit(O), O.K.one)

    def __mul__(self, other: "PolarizedIdeal") -> "PolarizedIdeal":
        return PolarizedIdeal(self.a * other.a, self.K.mul(self.rho, other.rho))

    def inverse(self) -> "PolarizedIdeal":
        K = self.K
        rinv = K.inv(self.rho)
        return PolarizedIdeal(self.a.conj().scale(rinv), rinv)

    def scale(self, mu: Elt) -> "PolarizedIdeal":
        K = self.K
        return PolarizedIdeal(self.a.scale(mu), K.mul(self.rho, K.mul(mu, K.conj(mu))))

    def lift(self, bigger: Order) -> "PolarizedIdeal":
        return PolarizedIdeal(self.a.lift(bigger), self.rho)

    def form(self):
        K = self.K
        return gram(K, self.a.basis, K.inv(self.rho))

    def reduce(self) -> "PolarizedIdeal":
        """Equivalent pair obtained by dividing by a short vector of the form."""
        K = self.K
        v = lll_basis(K, self.a.basis, K.inv(self.rho))[0]
        return self.scale(K.inv(v))

    def power(self, e: int) -> "PolarizedIdeal":
        if e < 0:
            return self.inverse().power(-e)
        out = PolarizedIdeal.unit(self.order)
        base = self.reduce()
        while e:
            if e & 1:
                out = (out * base).reduce()
            e >>= 1
            if e:
                base = (base * base).reduce()
        return out

    def _minimal(self):
        K = self.K
        basis = self.a.basis
        m, vecs = minimal_vectors(self.form())
        elts = []
        for v in vecs:
            x = K.zero
            for c, b in zip(v, basis):
                if c:
                    x = K.add(x, K.scale(b, c))
            elts.append(x)
        return m, elts

    def trivial_generator(self) -> Elt | None:
        """mu with a = mu O and mu conj(mu) = rho, or None."""
        m, elts = self._minimal()
        if m != 4:
            return None
        K = self.K
        mu = elts[0]
        if K.mul(mu, K.conj(mu)) != self.rho:
            raise InputError("minimum 4 without a norm-rho vector")
        return mu

    def is_trivial(self) -> bool:
        return self.trivial_generator() is not None

    @property
    def key(self):
        """Canonical class invariant: equal keys iff equal polarized classes."""
        if self._key is None:
            K = self.K
            _, elts = self._minimal()
            best = None
            for v in elts:
                vinv = K.inv(v)
                b = self.a.scale(vinv)
                r = K.mul(self.rho, K.mul(vinv, K.conj(vinv)))
                k = (b.lattice.den, b.lattice.H, r)
                if best is None or k < best:
                    best = k
            self._key = best
        return self._key

    def same_class(self, other: "PolarizedIdeal") -> bool:
        return self.key == other.key

    def to_json(self) -> dict:
        x, y = self.K.real_coords(self.rho)
        return {"ideal": self.a.to_json(), "rho": [str(x), str(y)]}


def pic_principal_generator(I: FracIdeal, units: RealUnits | None = None) -> Elt | None:
    """A generator of I if I is principal, else None.

    Requires I conj(I) = r O for a rational r (the case for products of
    primes with p conj(p) = ell O); other ideals raise InputError.
    """
    O = I.order
    K = O.K
    B = I * I.conj()
    n = I.norm
    r = _rational_sqrt(n)
    if r is None or B.lattice != O.lattice.scale(r):
        raise InputError("I conj(I) has no rational generator")
    units = units or RealUnits(K, O.contains)
    rho0 = K.scalar(r)
    # reduce first so the form has small entries
    P = PolarizedIdeal(I, rho0)
    v = lll_basis(K, I.basis, K.inv(rho0))[0]
    vinv = K.inv(v)
    for rho in units.positive_twists(K.scalar(1)):
        cand = PolarizedIdeal(I.scale(vinv), K.mul(rho, K.mul(P.rho, K.mul(vinv, K.conj(vinv)))))
        mu = cand.trivial_generator()
        if mu is not None:
            return K.mul(mu, v)
    return None


def _rational_sqrt(x: Fraction) -> Fraction | None:
    import math

    x = Fraction(x)
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def is_principal(I: FracIdeal, units: RealUnits | None = None) -> Elt | None:
    return pic_principal_generator(I, units)
