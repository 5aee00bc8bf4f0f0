"""Finite fields F_{p^k} with an explicitly stored defining polynomial."""

from __future__ import annotations

import random
from typing import Iterable, Iterator

from ..errors import InputError
from .integers import is_prime


def _polymulmod_int(a, b, mod, p):
    """Product of coefficient tuples modulo a monic polynomial over F_p."""
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d] % p
        if c:
            for j in range(k):
                prod[d - k + j] -= c * mod[j]
    return tuple(x % p for x in prod[:k])


class FqElem:
    """Element of a finite field, stored as coordinates on a power basis."""

    __slots__ = ("v", "F")

    def __init__(self, F: "GF", v: tuple):
        self.F = F
        self.v = v

    def _coerce(self, other):
        if isinstance(other, FqElem):
            return other
        if isinstance(other, int):
            return self.F(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.F.p
        if self.F.k == 1:
            return FqElem(self.F, ((self.v[0] + o.v[0]) % p,))
        return FqElem(self.F, tuple((a + b) % p for a, b in zip(self.v, o.v)))

    __radd__ = __add__

    def __neg__(self):
        p = self.F.p
        return FqElem(self.F, tuple(-a % p for a in self.v))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.F.p
        if self.F.k == 1:
            return FqElem(self.F, ((self.v[0] - o.v[0]) % p,))
        return FqElem(self.F, tuple((a - b) % p for a, b in zip(self.v, o.v)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.F.p
            return FqElem(self.F, tuple(a * other % p for a in self.v))
        if not isinstance(other, FqElem):
            return NotImplemented
        F = self.F
        if F.k == 1:
            return FqElem(F, (self.v[0] * other.v[0] % F.p,))
        return FqElem(F, _polymulmod_int(self.v, other.v, F.modulus, F.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        F = self.F
        if e < 0:
            return self.inverse() ** (-e)
        if F.k == 1:
            return FqElem(F, (pow(self.v[0], e, F.p),))
        result = F.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in finite field")
        F = self.F
        if F.k == 1:
            return FqElem(F, (pow(self.v[0], -1, F.p),))
        return self ** (F.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.F(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.F(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.v == other.v and self.F == other.F

    def __hash__(self):
        return hash((self.v, self.F.p, self.F.k))

    def __bool__(self):
        return any(self.v)

    def is_zero(self) -> bool:
        return not any(self.v)

    def frobenius(self, times: int = 1) -> "FqElem":
        if self.F.k == 1:
            return self
        return self ** (self.F.p ** (times % self.F.k))

    def is_square(self) -> bool:
        if self.is_zero() or self.F.p == 2:
            return True
        return (self ** ((self.F.order - 1) // 2)) == self.F.one

    def sqrt(self) -> "FqElem | None":
        """A square root, or None if the element is not a square."""
        F = self.F
        if self.is_zero():
            return self
        if F.p == 2:
            return self ** (F.order // 2)
        if not self.is_square():
            return None
        qm1 = F.order - 1
        s, t = 0, qm1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        if s == 1:
            return self ** ((F.order + 1) // 4)
        z = F.nonresidue()
        c = z**t
        x = self ** ((t + 1) // 2)
        b = self**t
        m = s
        while b != F.one:
            i, b2 = 0, b
            while b2 != F.one:
                b2 = b2 * b2
                i += 1
            g = c ** (1 << (m - i - 1))
            x, c = x * g, g * g
            b, m = b * c, i
        return x

    def to_int_list(self) -> list[int]:
        return list(self.v)

    def __repr__(self):
        if self.F.k == 1:
            return str(self.v[0])
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.v) if c]
        return " + ".join(terms) or "0"


def _is_irreducible_mod_p(f: tuple, p: int) -> bool:
    from . import fpoly

    F = GF(p)
    fp = [F(c) for c in f]
    return fpoly.is_irreducible(fp)


class GF:
    """The finite field F_{p^k} = F_p[z]/(modulus)."""

    def __init__(self, p: int, k: int = 1, modulus: Iterable[int] | None = None):
        if not is_prime(p):
            raise InputError(f"field characteristic {p} is not prime")
        if k < 1:
            raise InputError("extension degree must be positive")
        self.p = p
        self.k = k
        self.order = p**k
        if k == 1:
            self.modulus = (0, 1)
        elif modulus is not None:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != k + 1 or mod[-1] != 1:
                raise InputError("defining polynomial must be monic of degree k")
            if not _is_irreducible_mod_p(mod, p):
                raise InputError("defining polynomial is reducible")
            self.modulus = mod
        else:
            self.modulus = _find_irreducible(p, k)
        self._zero = FqElem(self, (0,) * k)
        self._one = FqElem(self, (1,) + (0,) * (k - 1))
        self._nonres = None

    def __eq__(self, other):
        return (
            isinstance(other, GF)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __call__(self, x) -> FqElem:
        if isinstance(x, FqElem):
            if x.F == self:
                return x
            if x.F.k == 1:
                return self(x.v[0])
            raise InputError("cannot coerce between distinct extension fields")
        if isinstance(x, int):
            return FqElem(self, (x % self.p,) + (0,) * (self.k - 1))
        coords = [int(c) % self.p for c in x]
        if len(coords) > self.k:
            raise InputError("too many coordinates for field element")
        return FqElem(self, tuple(coords) + (0,) * (self.k - len(coords)))

    @property
    def zero(self) -> FqElem:
        return self._zero

    @property
    def one(self) -> FqElem:
        return self._one

    @property
    def gen(self) -> FqElem:
        if self.k == 1:
            return self.one
        return self((0, 1))

    def random(self, rng: random.Random) -> FqElem:
        return FqElem(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def nonresidue(self) -> FqElem:
        if self._nonres is None:
            rng = random.Random(self.order)
            while True:
                z = self.random(rng)
                if z and not z.is_square():
                    self._nonres = z
                    break
        return self._nonres

    def elements(self) -> Iterator[FqElem]:
        if self.order > 10**6:
            raise InputError("field too large to enumerate")
        import itertools

        for coords in itertools.product(range(self.p), repeat=self.k):
            yield FqElem(self, tuple(reversed(coords)))

    def to_json(self) -> dict:
        return {"p": str(self.p), "k": self.k, "modulus": [str(c) for c in self.modulus]}


def _find_irreducible(p: int, k: int) -> tuple:
    """Deterministic search for a monic irreducible polynomial of degree k."""
    rng = random.Random(p * 1000003 + k)
    # sparse candidates x^k + a x + b first
    for a in range(min(p, 16)):
        for b in range(1, min(p, 16)):
            f = (b, a) + (0,) * (k - 2) + (1,)
            if _is_irreducible_mod_p(f, p):
                return f
    while True:
        f = tuple(rng.randrange(p) for _ in range(k)) + (1,)
        if f[0] and _is_irreducible_mod_p(f, p):
            return f
