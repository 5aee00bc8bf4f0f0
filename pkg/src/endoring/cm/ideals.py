"""Fractional ideals of orders in the CM field."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from ..arith import fpoly
from ..arith.fields import GF
from ..arith.lattice import Lattice, lcm_list, lll_gram, to_common_denominator, vec_mat
from ..errors import InputError, NonInvertibleIdealError
from .field import CMField, Elt
from .orders import Order, colon_lattice, elements_of, lattice_of


class FracIdeal:
    """An O-submodule of K of full rank, stored as a canonical lattice."""

    def __init__(self, order: Order, lattice: Lattice):
        self.order = order
        self.lattice = lattice

    @property
    def K(self) -> CMField:
        return self.order.K

    @classmethod
    def from_generators(cls, order: Order, gens: list[Elt]) -> "FracIdeal":
        """The O-module generated by gens."""
        K = order.K
        elts = [K.mul(g, b) for g in gens for b in order.basis]
        return cls(order, lattice_of(K, elts))

    @classmethod
    def unit(cls, order: Order) -> "FracIdeal":
        return cls(order, order.lattice)

    @classmethod
    def principal(cls, order: Order, mu: Elt) -> "FracIdeal":
        return cls.from_generators(order, [mu])

    def __eq__(self, other):
        return isinstance(other, FracIdeal) and self.order == other.order and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"FracIdeal(norm={self.norm}, {self.lattice})"

    @cached_property
    def basis(self) -> list[Elt]:
        return elements_of(self.lattice)

    @cached_property
    def norm(self) -> Fraction:
        """[O : I] extended multiplicatively to fractional ideals."""
        return self.lattice.covolume() / self.order.lattice.covolume()

    def contains(self, x: Elt) -> bool:
        return self.lattice.contains_vector(x)

    def is_integral(self) -> bool:
        return self.order.lattice.contains(self.lattice)

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        K = self.K
        return FracIdeal(self.order, lattice_of(K, [K.mul(a, b) for a in self.basis for b in other.basis]))

    def scale(self, mu: Elt) -> "FracIdeal":
        K = self.K
        return FracIdeal(self.order, lattice_of(K, [K.mul(mu, b) for b in self.basis]))

    def scale_rational(self, c) -> "FracIdeal":
        return FracIdeal(self.order, self.lattice.scale(Fraction(c)))

    def conj(self) -> "FracIdeal":
        K = self.K
        return FracIdeal(self.order, lattice_of(K, [K.conj(b) for b in self.basis]))

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        return FracIdeal(self.order, self.lattice + other.lattice)

    def intersect(self, other: "FracIdeal") -> "FracIdeal":
        return FracIdeal(self.order, self.lattice.intersect(other.lattice))

    def colon(self, other: "FracIdeal") -> "FracIdeal":
        """(self : other) = {x : x other in self}."""
        return FracIdeal(self.order, colon_lattice(self.K, self.lattice, other.lattice))

    def inverse(self, check: bool = True) -> "FracIdeal":
        inv = FracIdeal.unit(self.order).colon(self)
        if check and (self * inv).lattice != self.order.lattice:
            raise NonInvertibleIdealError("ideal is not invertible in its order")
        return inv

    def is_invertible(self) -> bool:
        inv = FracIdeal.unit(self.order).colon(self)
        return (self * inv).lattice == self.order.lattice

    def power(self, e: int) -> "FracIdeal":
        if e < 0:
            return self.inverse().power(-e)
        out = FracIdeal.unit(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def lift(self, bigger: Order) -> "FracIdeal":
        """I O' for an overorder O'."""
        K = self.K
        return FracIdeal(bigger, lattice_of(K, [K.mul(a, b) for a in self.basis for b in bigger.basis]))

    def to_json(self) -> dict:
        return {"den": str(self.lattice.den), "hnf": [[str(x) for x in r] for r in self.lattice.H]}


# ---------------------------------------------------------------- Gram forms


def trace_matrix(K: CMField, rho_inv: Elt | None = None) -> list[list[Fraction]]:
    """T[i][j] = Tr(pi^i conj(pi^j) / rho) (rho = 1 by default)."""
    key = ("trace_matrix", rho_inv)
    cache = K.__dict__.setdefault("_trace_cache", {})
    if key in cache:
        return cache[key]
    pows = [K.power(K.pi, i) for i in range(4)]
    cpows = [K.conj(p) for p in pows]
    T = []
    for i in range(4):
        row = []
        for j in range(4):
            x = K.mul(pows[i], cpows[j])
            if rho_inv is not None:
                x = K.mul(x, rho_inv)
            row.append(K.trace(x))
        T.append(row)
    if len(cache) > 256:
        cache.clear()
    cache[key] = T
    return T


def gram(K: CMField, basis: list[Elt], rho_inv: Elt | None = None) -> list[list[Fraction]]:
    T = trace_matrix(K, rho_inv)
    BT = [[sum((b[k] * T[k][j] for k in range(4)), Fraction(0)) for j in range(4)] for b in basis]
    return [[sum((BT[i][k] * basis[j][k] for k in range(4)), Fraction(0)) for j in range(len(basis))]
            for i in range(len(basis))]


def lll_basis(K: CMField, basis: list[Elt], rho_inv: Elt | None = None) -> list[Elt]:
    """LLL-reduce a lattice basis for the form Tr(x conj(x) / rho)."""
    G = gram(K, basis, rho_inv)
    M, den = to_common_denominator(G)
    U, _ = lll_gram(M)
    out = []
    for row in U:
        x = K.zero
        for c, b in zip(row, basis):
            if c:
                x = K.add(x, K.scale(b, c))
        out.append(x)
    return out


def short_element(I: FracIdeal) -> Elt:
    """A short nonzero element of I for the Minkowski form Tr(x conj(x))."""
    return lll_basis(I.K, I.basis)[0]


def ideal_reduce(I: FracIdeal, inverse: FracIdeal | None = None) -> tuple[FracIdeal, Elt]:
    """Integral ideal alpha I of small norm in the class of I, and alpha.

    alpha is a short element of I^{-1}; passing the inverse avoids a colon computation.
    """
    J = inverse if inverse is not None else I.inverse()
    alpha = short_element(J)
    return I.scale(alpha), alpha


# ------------------------------------------------------------------ primes


def prime_factors_mod(chi_coeffs: list[int], ell: int) -> list[tuple[list[int], int]]:
    F = GF(ell)
    return [(fpoly.to_ints(g), e) for g, e in fpoly.factor(fpoly.from_ints(chi_coeffs, F))]


class PrimeIdeal(FracIdeal):
    """Prime ideal ell O + g(pi) O with g an irreducible factor of chi mod ell."""

    def __init__(self, order: Order, lattice: Lattice, ell: int, factor: tuple[int, ...]):
        super().__init__(order, lattice)
        self.ell = ell
        self.factor = tuple(factor)

    @property
    def residue_degree(self) -> int:
        return len(self.factor) - 1

    @property
    def prime_norm(self) -> int:
        return self.ell**self.residue_degree

    def __repr__(self):
        return f"PrimeIdeal(ell={self.ell}, factor={list(self.factor)})"

    def sort_key(self):
        return (self.prime_norm, self.ell, self.factor)

    def to_json(self) -> dict:
        return {"ell": str(self.ell), "factor": [str(c) for c in self.factor]}

    def conj_prime(self, primes: list["PrimeIdeal"]) -> "PrimeIdeal":
        c = self.conj()
        for P in primes:
            if P.lattice == c.lattice:
                return P
        raise InputError("conjugate prime not in the list")


def primes_above(O: Order, ell: int, nu: int | None = None) -> list[PrimeIdeal]:
    """Kummer-Dedekind primes of O above ell (ell coprime to nu)."""
    K = O.K
    if nu is not None and nu % ell == 0:
        raise InputError(f"{ell} divides the discriminant of Z[pi, pibar]")
    if K.q % ell == 0:
        raise InputError("primes above the characteristic are excluded")
    out = []
    for g, e in prime_factors_mod(K.coeffs, ell):
        if e != 1:
            raise InputError(f"{ell} is ramified or divides the conductor")
        gpi = K.from_poly(g)
        gens = [K.scale(b, ell) for b in O.basis] + [K.mul(gpi, b) for b in O.basis]
        out.append(PrimeIdeal(O, lattice_of(K, gens), ell, tuple(g)))
    out.sort(key=PrimeIdeal.sort_key)
    return out


def prime_from_json(O: Order, d: dict) -> PrimeIdeal:
    ell = int(d["ell"])
    factor = tuple(int(c) for c in d["factor"])
    for P in primes_above(O, ell):
        if P.factor == factor:
            return P
    raise InputError("no prime with this factor")


def lift_prime(P: PrimeIdeal, bigger: Order) -> PrimeIdeal:
    L = P.lift(bigger)
    return PrimeIdeal(bigger, L.lattice, P.ell, P.factor)


def valuation(I: FracIdeal, P: PrimeIdeal, P_inv: FracIdeal | None = None, cap: int = 10**4) -> int:
    """Exponent of P in an integral ideal I (P invertible, coprime to the conductor)."""
    P_inv = P_inv or P.inverse()
    v = 0
    cur = I
    while cur.lattice != I.order.lattice and P.lattice.contains(cur.lattice):
        cur = cur * P_inv
        v += 1
        if v > cap:
            raise InputError("valuation did not terminate")
    return v


def element_coefficients(K: CMField, x: Elt) -> tuple[list[int], int]:
    """(integer coefficients, denominator) of x on the power basis."""
    den = lcm_list(Fraction(c).denominator for c in x)
    return [int(Fraction(c) * den) for c in x], den


def apply_matrix(v, M):
    return vec_mat(v, M)
