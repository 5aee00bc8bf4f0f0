"""Jacobian arithmetic in Mumford representation (Cantor's algorithm)."""

from __future__ import annotations

import random

from ..arith import fpoly as P
from ..arith.fields import GF, FqElem
from ..errors import InputError
from .curve import Curve


class JacPoint:
    """Reduced divisor class (u, v): u monic, deg v < deg u <= 2, u | v^2 - f."""

    __slots__ = ("J", "u", "v", "_key")

    def __init__(self, J: "Jacobian", u: list, v: list):
        self.J = J
        self.u = u
        self.v = v
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = (tuple(c.v for c in self.u), tuple(c.v for c in self.v))
        return self._key

    def __eq__(self, other):
        return isinstance(other, JacPoint) and self.J is other.J and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __add__(self, other):
        return self.J.add(self, other)

    def __neg__(self):
        return self.J.neg(self)

    def __sub__(self, other):
        return self.J.add(self, self.J.neg(other))

    def __mul__(self, n: int):
        return self.J.mul(self, n)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return len(self.u) == 1

    def frobenius(self, times: int = 1) -> "JacPoint":
        return self.J.frobenius(self, times)

    def __repr__(self):
        return f"JacPoint(u={[c for c in self.u]}, v={[c for c in self.v]})"

    def to_json(self) -> dict:
        return {"u": [[str(x) for x in c.v] for c in self.u],
                "v": [[str(x) for x in c.v] for c in self.v], "k": self.J.F.k}


class Jacobian:
    """Jac(C)(F_{q^k}) for a degree-5 model of C."""

    def __init__(self, curve: Curve, k: int = 1, field: GF | None = None):
        if curve.degree != 5:
            curve = curve.odd_degree_model()
        self.C = curve
        self.F = field if field is not None else GF(curve.q, k)
        if self.F.p != curve.q:
            raise InputError("field characteristic does not match the curve")
        self.f = P.from_ints(curve.f, self.F)
        self.zero = JacPoint(self, [self.F.one], [])
        # Frobenius on coordinates: x -> x^q is linear over F_p
        k = self.F.k
        self._frob_images = [self.F.gen ** (curve.q * i) for i in range(k)] if k > 1 else None

    @property
    def k(self) -> int:
        return self.F.k

    # ------------------------------------------------------------ group law

    def neg(self, D: JacPoint) -> JacPoint:
        return JacPoint(self, D.u, P.neg(D.v))

    def add(self, D1: JacPoint, D2: JacPoint) -> JacPoint:
        if D1.is_zero():
            return D2
        if D2.is_zero():
            return D1
        u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
        d1, e1, e2 = P.xgcd(u1, u2)
        if len(d1) == 1:
            d = d1
            s1, s2, s3 = e1, e2, []
        else:
            d, c1, c2 = P.xgcd(d1, P.add(v1, v2))
            s1, s2, s3 = P.mul(c1, e1), P.mul(c1, e2), c2
        if len(d) == 1:
            u = P.mul(u1, u2)
            num = P.add(P.mul(P.mul(s1, u1), v2), P.mul(P.mul(s2, u2), v1))
            if s3:
                num = P.add(num, P.mul(s3, P.add(P.mul(v1, v2), self.f)))
            v = P.mod(num, u)
        else:
            u = P.divmod_(P.mul(u1, u2), P.mul(d, d))[0]
            num = P.add(P.mul(P.mul(s1, u1), v2), P.mul(P.mul(s2, u2), v1))
            if s3:
                num = P.add(num, P.mul(s3, P.add(P.mul(v1, v2), self.f)))
            v = P.mod(P.divmod_(num, d)[0], u)
        return self._reduce(u, v)

    def _reduce(self, u, v) -> JacPoint:
        while len(u) > 3:
            u = P.divmod_(P.sub(self.f, P.mul(v, v)), u)[0]
            v = P.mod(P.neg(v), u)
        u = P.monic(u)
        v = P.mod(v, u)
        return JacPoint(self, u, v)

    def double(self, D: JacPoint) -> JacPoint:
        return self.add(D, D)

    def mul(self, D: JacPoint, n: int) -> JacPoint:
        if n < 0:
            return self.mul(self.neg(D), -n)
        if n == 0 or D.is_zero():
            return self.zero
        # signed binary (NAF)
        naf = []
        while n:
            if n & 1:
                z = 2 - (n % 4)
                n -= z
            else:
                z = 0
            naf.append(z)
            n >>= 1
        negD = self.neg(D)
        R = self.zero
        for z in reversed(naf):
            R = self.add(R, R)
            if z == 1:
                R = self.add(R, D)
            elif z == -1:
                R = self.add(R, negD)
        return R

    def frobenius_elem(self, c: FqElem, times: int = 1) -> FqElem:
        if self._frob_images is None:
            return c
        for _ in range(times % self.F.k):
            acc = self.F.zero
            for i, a in enumerate(c.v):
                if a:
                    acc = acc + self._frob_images[i] * a
            c = acc
        return c

    def frobenius(self, D: JacPoint, times: int = 1) -> JacPoint:
        if self._frob_images is None or times % self.F.k == 0:
            return D
        return JacPoint(self, [self.frobenius_elem(c, times) for c in D.u],
                        [self.frobenius_elem(c, times) for c in D.v])

    def apply_poly_in_frobenius(self, D: JacPoint, coeffs: list[int]) -> JacPoint:
        """sum_i coeffs[i] pi^i (D)."""
        acc = self.zero
        Fi = D
        for i, c in enumerate(coeffs):
            if i:
                Fi = self.frobenius(Fi)
            if c:
                acc = self.add(acc, self.mul(Fi, c))
        return acc

    # ------------------------------------------------------------ points

    def is_valid(self, D: JacPoint) -> bool:
        if len(D.u) > 3 or (D.u and not D.u[-1] == self.F.one):
            return False
        if len(D.v) >= len(D.u):
            return False
        return not P.mod(P.sub(P.mul(D.v, D.v), self.f), D.u)

    def from_coeffs(self, u: list, v: list) -> JacPoint:
        D = JacPoint(self, P.strip([self.F(c) for c in u]), P.strip([self.F(c) for c in v]))
        if not self.is_valid(D):
            raise InputError("not a reduced Mumford pair on this curve")
        return D

    def point(self, x: FqElem, y: FqElem) -> JacPoint:
        """Divisor class [(x, y)] - [infinity]."""
        if y * y != P.evaluate(self.f, x):
            raise InputError("point is not on the curve")
        return JacPoint(self, [-x, self.F.one], P.strip([y]))

    def _element_from_index(self, i: int) -> FqElem:
        p = self.F.p
        coords = []
        for _ in range(self.F.k):
            coords.append(i % p)
            i //= p
        return FqElem(self.F, tuple(coords))

    def random_point(self, rng: random.Random) -> JacPoint:
        """Uniformly random element of Jac(F_{q^k}).

        Rejection sampling over Mumford pairs: u is drawn uniformly among monic
        polynomials of degree <= 2 and accepted with probability (#valid v)/4.
        """
        F = self.F
        Q = F.order
        while True:
            r = rng.randrange(Q * Q + Q + 1)
            if r == 0:
                if rng.randrange(4) == 0:
                    return self.zero
                continue
            if r <= Q:
                a = self._element_from_index(r - 1)
                ys = _sqrt_options(P.evaluate(self.f, a))
                if ys and rng.randrange(4) < len(ys):
                    y = ys[rng.randrange(len(ys))]
                    return JacPoint(self, [-a, F.one], P.strip([y]))
                continue
            idx = r - Q - 1
            c0 = self._element_from_index(idx % Q)
            c1 = self._element_from_index(idx // Q)
            u = [c0, c1, F.one]
            vs = self._sqrt_mod_quadratic(u)
            if vs and rng.randrange(4) < len(vs):
                v = vs[rng.randrange(len(vs))]
                return JacPoint(self, u, v)

    def _sqrt_mod_quadratic(self, u) -> list[list]:
        """All v with deg v < 2 and v^2 = f mod u (u monic quadratic)."""
        F = self.F
        c0, c1 = u[0], u[1]
        disc = c1 * c1 - c0 * 4
        s = disc.sqrt()
        if s is not None:
            inv2 = F(2).inverse()
            a, b = (-c1 + s) * inv2, (-c1 - s) * inv2
            if a == b:
                fa = P.evaluate(self.f, a)
                if fa.is_zero():
                    return []
                y0 = fa.sqrt()
                if y0 is None:
                    return []
                dfa = P.evaluate(P.derivative(self.f), a)
                out = []
                for y in (y0, -y0):
                    y1 = dfa / (y * 2)
                    out.append(P.strip([y - y1 * a, y1]))
                return out
            ya, yb = _sqrt_options(P.evaluate(self.f, a)), _sqrt_options(P.evaluate(self.f, b))
            out = []
            inv = (b - a).inverse()
            for y1 in ya:
                for y2 in yb:
                    slope = (y2 - y1) * inv
                    out.append(P.strip([y1 - slope * a, slope]))
            return out
        # u irreducible: F[x]/(u) is the quadratic extension
        w = P.mod(self.f, u)
        w = (w + [F.zero, F.zero])[:2]
        if w[0].is_zero() and w[1].is_zero():
            return [[]]
        R = _QuadAlgebra(F, c0, c1)
        root = R.sqrt(tuple(w))
        if root is None:
            return []
        neg = (-root[0], -root[1])
        return [P.strip(list(root)), P.strip(list(neg))]


def _sqrt_options(y2: FqElem) -> list[FqElem]:
    if y2.is_zero():
        return [y2]
    s = y2.sqrt()
    if s is None:
        return []
    return [s, -s]


class _QuadAlgebra:
    """F[x]/(x^2 + c1 x + c0) for irreducible u, elements as pairs."""

    def __init__(self, F: GF, c0, c1):
        self.F, self.c0, self.c1 = F, c0, c1
        self.order = F.order**2

    def mul(self, a, b):
        ac, bd = a[0] * b[0], a[1] * b[1]
        mid = a[0] * b[1] + a[1] * b[0]
        return (ac - bd * self.c0, mid - bd * self.c1)

    def pow(self, a, e):
        r = (self.F.one, self.F.zero)
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def is_one(self, a):
        return a[0] == self.F.one and a[1].is_zero()

    def sqrt(self, a):
        F = self.F
        Qm1 = self.order - 1
        if not self.is_one(self.pow(a, Qm1 // 2)):
            return None
        s, t = 0, Qm1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        rng = random.Random(F.order * 7 + 1)
        while True:
            z = (F.random(rng), F.random(rng))
            if (z[0] or z[1]) and not self.is_one(self.pow(z, Qm1 // 2)):
                break
        c = self.pow(z, t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while not self.is_one(b):
            i, b2 = 0, b
            while not self.is_one(b2):
                b2 = self.mul(b2, b2)
                i += 1
            g = self.pow(c, 1 << (m - i - 1))
            x = self.mul(x, g)
            c = self.mul(g, g)
            b = self.mul(b, c)
            m = i
        return x
