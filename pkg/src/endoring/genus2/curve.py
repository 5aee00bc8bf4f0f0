"""Genus-2 curves y^2 = f(x) over prime fields and naive point counting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..arith import fpoly
from ..arith.fields import GF
from ..arith.integers import is_prime
from ..errors import InputError
from .frobenius import FrobPoly

COUNT_BUDGET = 10**8


class BudgetExceededError(InputError):
    pass


@dataclass(frozen=True)
class Curve:
    """y^2 = f(x) with f of degree 5 or 6 over F_q (q prime, q >= 5)."""

    q: int
    f: tuple[int, ...]

    def __post_init__(self):
        q = self.q
        if not is_prime(q):
            raise InputError("only prime fields are supported")
        if q < 5:
            raise InputError("characteristic 2 and 3 are excluded")
        f = [int(c) % q for c in self.f]
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 not in (5, 6):
            raise InputError("f must have degree 5 or 6")
        object.__setattr__(self, "f", tuple(f))
        F = GF(q)
        fp = fpoly.from_ints(f, F)
        if len(fpoly.gcd(fp, fpoly.derivative(fp))) > 1:
            raise InputError("f is not squarefree")

    @property
    def p(self) -> int:
        return self.q

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    def to_json(self) -> dict:
        return {"q": str(self.q), "f": [str(c) for c in self.f]}

    @classmethod
    def from_json(cls, d: dict) -> "Curve":
        return cls(int(d["q"]), tuple(int(c) for c in d["f"]))

    def twist(self, d: int) -> "Curve":
        return Curve(self.q, tuple(c * d % self.q for c in self.f))

    def substitute(self, a: int, b: int, c: int, d: int) -> "Curve":
        """y^2 = f((ax+b)/(cx+d)) (cx+d)^6."""
        q = self.q
        if (a * d - b * c) % q == 0:
            raise InputError("substitution is not invertible")
        out = [0] * 7
        for i, coef in enumerate(self.f):
            # coef (ax+b)^i (cx+d)^(6-i)
            term = [coef]
            for _ in range(i):
                term = _mul_int(term, [b, a], q)
            for _ in range(6 - i):
                term = _mul_int(term, [d, c], q)
            for j, t in enumerate(term):
                out[j] = (out[j] + t) % q
        return Curve(q, tuple(out))

    def odd_degree_model(self) -> "Curve":
        """An isomorphic degree-5 model (moves a rational Weierstrass point to infinity)."""
        if self.degree == 5:
            return self
        F = GF(self.q)
        rts = fpoly.roots(fpoly.from_ints(self.f, F))
        if not rts:
            raise InputError("degree-6 model without rational Weierstrass point")
        r = rts[0].v[0]
        # x = r + 1/z: f(r + 1/z) z^6 has degree 5 in z
        return self.substitute(r, 1, 1, 0)


def _mul_int(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return out


def _legendre_table(q: int) -> np.ndarray:
    """chi[x] in {-1, 0, 1} for x in [0, q)."""
    chi = -np.ones(q, dtype=np.int8)
    xs = np.arange(1, q, dtype=np.int64)
    chi[(xs * xs) % q] = 1
    chi[0] = 0
    return chi


def _nonresidue(q: int) -> int:
    for n in range(2, q):
        if pow(n, (q - 1) // 2, q) == q - 1:
            return n
    raise InputError("no quadratic non-residue")


def count_points_curve(C: Curve, k: int = 1, budget: int = COUNT_BUDGET) -> int:
    """#C(F_{q^k}) for k in {1, 2} by enumeration, including points at infinity."""
    q = C.q
    if k not in (1, 2):
        raise InputError("only k = 1, 2 are supported by enumeration")
    if q**k > budget:
        raise BudgetExceededError(f"q^{k} = {q**k} exceeds the point-count budget {budget}")
    chi = _legendre_table(q)
    f = [int(c) for c in C.f]
    lead = f[-1]
    if k == 1:
        x = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for c in reversed(f):
            acc = (acc * x + c) % q
        affine = q + int(chi[acc].sum(dtype=np.int64))
        infinity = 1 if C.degree == 5 else 1 + int(chi[lead % q])
        return affine + infinity
    # F_{q^2} = F_q(s), s^2 = n; x = a + b s
    n = _nonresidue(q)
    b = np.arange(q, dtype=np.int64)
    total = 0
    chunk = max(1, min(q, 2_000_000 // q))
    for a0 in range(0, q, chunk):
        a = np.arange(a0, min(q, a0 + chunk), dtype=np.int64)[:, None]
        re = np.zeros((a.shape[0], q), dtype=np.int64)
        im = np.zeros_like(re)
        for c in reversed(f):
            # (re + im s)(a + b s) + c
            re, im = (re * a + (im * b % q) * n + c) % q, (re * b + im * a) % q
        norm = (re * re - n * (im * im % q)) % q
        total += int(chi[norm].sum(dtype=np.int64))
    affine = q * q + total
    infinity = 1 if C.degree == 5 else 2
    return affine + infinity


def frobenius_charpoly(C: Curve, budget: int = COUNT_BUDGET) -> FrobPoly:
    q = C.q
    n1 = count_points_curve(C, 1, budget)
    n2 = count_points_curve(C, 2, budget)
    s1 = q + 1 - n1
    s2 = q * q + 1 - n2
    c1 = -s1
    if (s1 * s1 - s2) % 2:
        raise InputError("point counts are inconsistent with a genus-2 curve")
    c2 = (s1 * s1 - s2) // 2
    chi = FrobPoly(q, c1, c2)
    if not chi.satisfies_weil():
        raise InputError("reconstructed polynomial violates the Weil bound")
    return chi
