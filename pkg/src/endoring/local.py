"""Endomorphism rings locally at small primes, by kill tests on torsion.

For y in End and n coprime to q, y / n is an endomorphism exactly when y
kills Jac[n].  An element x of O_K with l^k x in Z[pi, pibar] becomes a
polynomial in pi after multiplying by q^3 (since q pibar^{-1} = pi), and
q is a unit at l, so x is in End iff q^3 l^k x (a polynomial in pi of
degree <= 3) kills Jac[l^k].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith.integers import factor_integer
from .cm.field import Elt
from .cm.orders import Order, OrderLatticeContext, orders_directly_above
from .errors import InputError
from .genus2.curve import Curve
from .genus2.frobenius import FrobPoly
from .genus2.torsion import TORSION_BUDGET, TorsionBasis, torsion_generators


@dataclass(frozen=True)
class EndoCandidate:
    """numerator(pi) / denominator with an integer polynomial numerator of degree <= 3."""

    numerator: tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise InputError("denominator must be positive")
        if len(self.numerator) > 4:
            raise InputError("numerator must have degree at most 3")

    def element(self, K) -> Elt:
        return K.scale(K.elt(list(self.numerator) + [0] * (4 - len(self.numerator))),
                       Fraction(1, self.denominator))

    def to_json(self) -> dict:
        return {"numerator": [str(c) for c in self.numerator], "denominator": str(self.denominator)}


@lru_cache(maxsize=32)
def _torsion(C: Curve, chi: FrobPoly, ell: int, k: int, seed: int, budget: int) -> TorsionBasis:
    return torsion_generators(C, chi, ell, k, seed, budget)


def kills_torsion(C: Curve, chi: FrobPoly, numerator, n: int, seed: int = 0,
                  budget: int = TORSION_BUDGET) -> bool:
    """Whether numerator(pi) is zero on Jac[n]."""
    if n < 1:
        raise InputError("n must be positive")
    if n % C.q == 0:
        raise InputError("n must be coprime to q")
    coeffs = [int(c) for c in numerator]
    for ell, k in factor_integer(n).items():
        T = _torsion(C, chi, ell, k, seed, budget)
        J = T.jacobian
        red = [c % ell**k for c in coeffs]
        for P in T.points:
            if not J.apply_poly_in_frobenius(P, red).is_zero():
                return False
    return True


def candidate_for(x: Elt, ell: int, base: Order, q: int) -> tuple[EndoCandidate, int]:
    """(q^3 l^k x as a candidate over l^k, k) with k minimal such that l^k x lies in base."""
    K = base.K
    k = 0
    y = x
    while not base.contains(y):
        y = K.scale(y, ell)
        k += 1
        if k > 64:
            raise InputError("element has a denominator prime to l")
    z = K.scale(y, q**3)
    if any(Fraction(c).denominator != 1 for c in z):
        raise InputError("q^3 Z[pi, pibar] is not inside Z[pi]")
    return EndoCandidate(tuple(int(c) for c in z), ell**k), k


def in_endomorphism_ring(C: Curve, chi: FrobPoly, x: Elt, ell: int, base: Order,
                         seed: int = 0, budget: int = TORSION_BUDGET) -> bool:
    cand, k = candidate_for(x, ell, base, chi.q)
    if k == 0:
        return True
    return kills_torsion(C, chi, cand.numerator, cand.denominator, seed, budget)


@dataclass
class LocalResult:
    ell: int
    order: Order
    index: int
    locally_maximal: bool
    tested: list[tuple[int, bool]]
    torsion_levels: list[int]

    def to_json(self) -> dict:
        return {"ell": str(self.ell), "order": self.order.to_json(), "index": str(self.index),
                "locally_maximal": self.locally_maximal,
                "tested": [{"index": str(i), "accepted": a} for i, a in self.tested],
                "torsion_levels": [str(t) for t in self.torsion_levels]}


def local_endo_ring(C: Curve, chi: FrobPoly, ell: int, ctx: OrderLatticeContext, seed: int = 0,
                    budget: int = TORSION_BUDGET) -> LocalResult:
    """The largest order above Z[pi, pibar] at l whose generators pass the kill test."""
    O = ctx.base
    tested: list[tuple[int, bool]] = []
    levels: set[int] = set()
    if ctx.index % ell:
        return LocalResult(ell, O, ctx.index, True, tested, [])
    rejected: set = set()
    while True:
        moved = False
        for A in orders_directly_above(O, ctx, primes=[ell]):
            if A.lattice in rejected:
                continue
            ok = True
            for b in A.basis:
                if O.contains(b):
                    continue
                cand, k = candidate_for(b, ell, ctx.base, chi.q)
                levels.add(k)
                if not kills_torsion(C, chi, cand.numerator, cand.denominator, seed, budget):
                    ok = False
                    break
            tested.append((ctx.index_of(A), ok))
            if ok:
                O = A
                moved = True
                break
            rejected.add(A.lattice)
        if not moved:
            break
    idx = ctx.index_of(O)
    return LocalResult(ell, O, idx, idx % ell != 0, tested, sorted(levels))
