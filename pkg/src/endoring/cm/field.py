"""The quartic CM field K = Q[t]/(chi) generated by Frobenius.

Elements are 4-tuples of Fractions on the power basis 1, pi, pi^2, pi^3.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath

from ..arith.lattice import mat_inv
from ..errors import InputError
from ..genus2.frobenius import FrobPoly

Elt = tuple  # tuple[Fraction, Fraction, Fraction, Fraction]

PRECISION_DIGITS = 60


def _elt(v) -> Elt:
    return tuple(Fraction(x) for x in v)


class CMField:
    """K = Q(pi) with pi a root of a quartic ordinary Weil polynomial."""

    degree = 4

    def __init__(self, chi: FrobPoly):
        if not chi.is_irreducible():
            raise InputError("chi is reducible; K = Q[t]/(chi) is not a field")
        self.chi = chi
        self.q = chi.q
        self.coeffs = chi.coeffs
        c = self.coeffs
        # t^k reduced to degree < 4, for k = 0..6
        red = [[int(i == k) for i in range(4)] for k in range(4)]
        cur = [-x for x in c[:4]]
        red.append(cur)
        for _ in range(2):
            top = cur[3]
            cur = [0] + cur[:3]
            cur = [cur[i] - top * c[i] for i in range(4)]
            red.append(cur)
        self._red = red
        self.one = _elt((1, 0, 0, 0))
        self.zero = _elt((0, 0, 0, 0))
        self.pi = _elt((0, 1, 0, 0))

    def __eq__(self, other):
        return isinstance(other, CMField) and self.chi == other.chi

    def __hash__(self):
        return hash(("CMField", self.chi))

    def __repr__(self):
        return f"CMField(q={self.q}, chi={self.coeffs})"

    # ----------------------------------------------------------- arithmetic

    def elt(self, v: Sequence) -> Elt:
        return _elt(v)

    def scalar(self, a) -> Elt:
        return _elt((a, 0, 0, 0))

    def add(self, a: Elt, b: Elt) -> Elt:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Elt, b: Elt) -> Elt:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Elt) -> Elt:
        return tuple(-x for x in a)

    def scale(self, a: Elt, c) -> Elt:
        c = Fraction(c)
        return tuple(x * c for x in a)

    def mul(self, a: Elt, b: Elt) -> Elt:
        prod = [Fraction(0)] * 7
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:4])
        for k in range(4, 7):
            if prod[k]:
                r = self._red[k]
                for i in range(4):
                    out[i] += prod[k] * r[i]
        return tuple(out)

    def power(self, a: Elt, e: int) -> Elt:
        if e < 0:
            return self.power(self.inv(a), -e)
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def mult_matrix(self, a: Elt) -> list[list[Fraction]]:
        """Rows are a * pi^i; a row vector y maps to y M = coords of a*y."""
        rows = [a]
        for _ in range(3):
            rows.append(self.mul(rows[-1], self.pi))
        return [list(r) for r in rows]

    def norm(self, a: Elt) -> Fraction:
        from ..arith.lattice import det_int, to_common_denominator

        M, den = to_common_denominator(self.mult_matrix(a))
        return Fraction(det_int(M), den**4)

    def trace(self, a: Elt) -> Fraction:
        M = self.mult_matrix(a)
        return sum((M[i][i] for i in range(4)), Fraction(0))

    def inv(self, a: Elt) -> Elt:
        if not any(a):
            raise ZeroDivisionError("inverse of zero in K")
        Minv = mat_inv(self.mult_matrix(a))
        return tuple(Minv[0])

    def div(self, a: Elt, b: Elt) -> Elt:
        return self.mul(a, self.inv(b))

    def from_poly(self, coeffs: Sequence) -> Elt:
        """Element sum coeffs[i] pi^i for any number of coefficients."""
        acc = self.zero
        p = self.one
        for c in coeffs:
            if c:
                acc = self.add(acc, self.scale(p, c))
            p = self.mul(p, self.pi)
        return acc

    # ----------------------------------------------------------- conjugation

    @cached_property
    def pibar(self) -> Elt:
        c1, c2, q = self.coeffs[3], self.coeffs[2], self.q
        # q/pi from chi(pi) = 0
        return _elt((Fraction(-c1 * q, q), Fraction(-c2, q), Fraction(-c1, q), Fraction(-1, q)))

    @cached_property
    def conj_matrix(self) -> list[list[Fraction]]:
        """Rows are conj(pi^i); conj(y) = y C for coordinate rows y."""
        rows = [self.one]
        for _ in range(3):
            rows.append(self.mul(rows[-1], self.pibar))
        return [list(r) for r in rows]

    def conj(self, a: Elt) -> Elt:
        C = self.conj_matrix
        return tuple(sum((a[i] * C[i][j] for i in range(4)), Fraction(0)) for j in range(4))

    def is_real(self, a: Elt) -> bool:
        return self.conj(a) == tuple(a)

    @cached_property
    def real_generator(self) -> Elt:
        """pi + pibar, a generator of K0 with minimal polynomial t^2 + c1 t + c2 - 2q."""
        return self.add(self.pi, self.pibar)

    @cached_property
    def real_poly(self) -> tuple[int, int, int]:
        c1, c2 = self.coeffs[3], self.coeffs[2]
        return (c2 - 2 * self.q, c1, 1)

    @cached_property
    def real_disc(self) -> int:
        c0, c1, _ = self.real_poly
        return c1 * c1 - 4 * c0

    def real_coords(self, a: Elt) -> tuple[Fraction, Fraction]:
        """(x, y) with a = x + y (pi + pibar) for a in K0."""
        if not self.is_real(a):
            raise InputError("element is not in the real subfield")
        w = self.real_generator
        # solve a = x + y w using two independent coordinates
        for j in range(1, 4):
            if w[j]:
                y = a[j] / w[j]
                x = a[0] - y * w[0]
                if self.add(self.scalar(x), self.scale(w, y)) == tuple(a):
                    return x, y
        raise InputError("real coordinates not found")

    def from_real_coords(self, x, y) -> Elt:
        return self.add(self.scalar(x), self.scale(self.real_generator, y))

    # ----------------------------------------------------------- embeddings

    @cached_property
    def complex_roots(self) -> list:
        """Roots of chi, ordered as (pi_1, pi_2, conj pi_1, conj pi_2) with Im > 0 first."""
        with mpmath.workdps(PRECISION_DIGITS):
            rts = mpmath.polyroots(list(reversed(self.coeffs)), maxsteps=200, extraprec=200)
            upper = sorted([r for r in rts if mpmath.im(r) > 0], key=lambda r: (float(mpmath.re(r))))
            if len(upper) != 2:
                raise InputError("chi is not totally imaginary")
            return upper + [mpmath.conj(r) for r in upper]

    def embed(self, a: Elt, i: int):
        r = self.complex_roots[i]
        with mpmath.workdps(PRECISION_DIGITS):
            acc = mpmath.mpf(0)
            for c in reversed(a):
                acc = acc * r + mpmath.mpf(c.numerator) / c.denominator
            return acc

    def real_embeddings(self, a: Elt) -> tuple:
        """The two real embeddings of an element of K0."""
        return (mpmath.re(self.embed(a, 0)), mpmath.re(self.embed(a, 1)))

    def is_totally_positive(self, a: Elt) -> bool:
        if not self.is_real(a) or not any(a):
            return False
        x, y = self.real_coords(a)
        # sign of x + y w at both roots w of the real polynomial, exactly
        c0, c1, _ = self.real_poly
        n = x * x - c1 * x * y + c0 * y * y  # N_{K0/Q}(x + y w)
        tr = 2 * x - c1 * y
        return n > 0 and tr > 0

    def to_json(self) -> dict:
        return {"q": str(self.q), "chi": [str(c) for c in self.coeffs]}
