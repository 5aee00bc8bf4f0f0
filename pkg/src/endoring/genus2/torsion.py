"""Torsion subgroups of genus-2 Jacobians and Frobenius-polynomial checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import sympy

from ..arith import fpoly
from ..arith.fields import GF
from ..arith.integers import divisors, factor_integer, valuation
from ..errors import InputError
from .abelian import EllGroup, GroupOps, fp_span_dlog
from .curve import Curve
from .frobenius import FrobPoly
from .jacobian import JacPoint, Jacobian

TORSION_BUDGET = 10**7
EXTENSION_BUDGET = 64


class TorsionBudgetError(InputError):
    pass


@lru_cache(maxsize=64)
def field(p: int, k: int) -> GF:
    return GF(p, k)


@lru_cache(maxsize=32)
def jacobian(C: Curve, k: int) -> Jacobian:
    return Jacobian(C, field=field(C.q, k))


def jacobian_ops(J: Jacobian) -> GroupOps:
    return GroupOps(zero=J.zero, add=J.add, neg=J.neg, mul=J.mul,
                    key=lambda D: D.key, is_zero=lambda D: D.is_zero())


# --------------------------------------------------------- Frobenius order


def _polymulmod(a, b, chi, m):
    n = len(chi) - 1
    prod = [0] * max(len(a) + len(b) - 1, n)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d] % m
        if c:
            for j in range(n):
                prod[d - n + j] -= c * chi[j]
    return [x % m for x in prod[:n]]


def _x_power(e, chi, m):
    n = len(chi) - 1
    result = [1] + [0] * (n - 1)
    base = _polymulmod([1], [0, 1], chi, m)
    while e:
        if e & 1:
            result = _polymulmod(result, base, chi, m)
        base = _polymulmod(base, base, chi, m)
        e >>= 1
    return result


def frobenius_order(chi: FrobPoly, ell: int, k: int = 1) -> int:
    """Multiplicative order of x in (Z/l^k)[x]/(chi).

    pi^n acts trivially on Jac[l^k] whenever x^n = 1 in this ring.
    """
    coeffs = chi.coeffs
    if chi.q % ell == 0:
        raise InputError("l must be coprime to q")
    F = field(ell, 1)
    n0 = 1
    for g, _ in fpoly.factor(fpoly.from_ints(coeffs, F)):
        d = len(g) - 1
        gi = fpoly.to_ints(g)
        order = ell**d - 1
        for r in factor_integer(order):
            while order % r == 0 and _x_power(order // r, gi, ell) == [1] + [0] * (d - 1):
                order //= r
        n0 = n0 * order // sympy.gcd(n0, order)
    n0 = int(n0)
    m = ell**k
    y = _x_power(n0, coeffs, m)
    one = [1, 0, 0, 0]
    j = 0
    while y != one:
        y = _pow_elem(y, ell, coeffs, m)
        j += 1
        if j > 64:
            raise InputError("Frobenius order computation did not stabilise")
    return n0 * ell**j


def _pow_elem(a, e, chi, m):
    result = [1, 0, 0, 0]
    while e:
        if e & 1:
            result = _polymulmod(result, a, chi, m)
        a = _polymulmod(a, a, chi, m)
        e >>= 1
    return result


# ------------------------------------------------------------ l-Sylow


def sylow_group(C: Curve, chi: FrobPoly, ell: int, n: int, rng: random.Random,
                budget: int = TORSION_BUDGET) -> tuple[Jacobian, EllGroup]:
    """Structure of the l-Sylow subgroup of Jac(F_{q^n})."""
    N = chi.jacobian_order(n)
    s = valuation(N, ell)
    if ell**s > budget:
        raise TorsionBudgetError(f"l-Sylow subgroup of order {ell}^{s} exceeds the budget")
    J = jacobian(C, n)
    ops = jacobian_ops(J)
    cof = N // ell**s
    G = EllGroup(ell, s, ops)
    G.fill(lambda: J.mul(J.random_point(rng), cof))
    return J, G


def _extension_degree(chi: FrobPoly, ell: int, k: int) -> int:
    n = frobenius_order(chi, ell, k)
    if n > EXTENSION_BUDGET:
        raise TorsionBudgetError(f"Jac[{ell}^{k}] is defined over an extension of degree {n}")
    return n


@dataclass
class TorsionBasis:
    ell: int
    level: int
    jacobian: Jacobian
    points: list[JacPoint]
    frobenius_matrix: list[list[int]] | None

    @property
    def extension_degree(self) -> int:
        return self.jacobian.k


def _frobenius_matrix(J: Jacobian, pts: list[JacPoint], ell: int) -> list[list[int]]:
    ops = jacobian_ops(J)
    D = fp_span_dlog(pts, ell, ops)
    M = []
    for P in pts:
        c = D.dlog(J.frobenius(P))
        if c is None:
            raise InputError("Frobenius image left the torsion span")
        M.append([x % ell for x in c])
    return M


def charpoly_mod(M: list[list[int]], ell: int) -> list[int]:
    """Characteristic polynomial of an integer matrix mod l (low to high)."""
    t = sympy.Symbol("t")
    cp = sympy.Matrix(M).charpoly(t).all_coeffs()
    return [int(c) % ell for c in reversed(cp)]


def weierstrass_two_torsion(C: Curve) -> TorsionBasis:
    """Jac[2] from differences of Weierstrass points over their field of definition."""
    base = jacobian(C, 1)
    degs = [len(g) - 1 for g, _ in fpoly.factor(base.f)]
    L = 1
    for d in degs:
        L = L * d // int(sympy.gcd(L, d))
    J = jacobian(C, L)
    roots = fpoly.roots(J.f)
    if len(roots) != 5:
        raise InputError("expected five finite Weierstrass points")
    pts = [JacPoint(J, [-e, J.F.one], []) for e in roots[:4]]
    return TorsionBasis(2, 1, J, pts, _frobenius_matrix(J, pts, 2))


def torsion_basis(C: Curve, ell: int, chi: FrobPoly, seed: int = 0,
                  budget: int = TORSION_BUDGET) -> TorsionBasis:
    """Basis of Jac[l] over its field of definition with the Frobenius matrix."""
    if ell == C.q:
        raise InputError("l must differ from the characteristic")
    if ell == 2:
        return weierstrass_two_torsion(C)
    rng = random.Random(seed)
    nmax = _extension_degree(chi, ell, 1)
    for n in divisors(factor_integer(nmax)):
        N = chi.jacobian_order(n)
        if valuation(N, ell) < 4:
            continue
        J, G = sylow_group(C, chi, ell, n, rng, budget)
        if len(G.exps) == 4:
            pts = G.torsion_generators(1)
            return TorsionBasis(ell, 1, J, pts, _frobenius_matrix(J, pts, ell))
    raise InputError("full l-torsion not found over the predicted extension")


def torsion_generators(C: Curve, chi: FrobPoly, ell: int, k: int, seed: int = 0,
                       budget: int = TORSION_BUDGET) -> TorsionBasis:
    """Generators of Jac[l^k] (as a group) over a field containing it."""
    if ell == 2 and k == 1:
        return weierstrass_two_torsion(C)
    rng = random.Random(seed)
    nmax = _extension_degree(chi, ell, k)
    for n in divisors(factor_integer(nmax)):
        N = chi.jacobian_order(n)
        if valuation(N, ell) < 4 * k:
            continue
        J, G = sylow_group(C, chi, ell, n, rng, budget)
        if len(G.exps) == 4 and all(e >= k for e in G.exps):
            return TorsionBasis(ell, k, J, G.torsion_generators(k), None)
    raise InputError("full l^k-torsion not found over the predicted extension")


def generates_torsion(J: Jacobian, pts: list[JacPoint], ell: int, k: int) -> bool:
    """Whether pts generate Jac[l^k]: they are killed by l^k and their
    l^{k-1}-multiples span Jac[l]."""
    from .abelian import is_independent_mod_ell

    ops = jacobian_ops(J)
    if any(not J.mul(P, ell**k).is_zero() for P in pts):
        return False
    low = [J.mul(P, ell ** (k - 1)) for P in pts]
    basis = []
    for P in low:
        if is_independent_mod_ell(basis + [P], ell, ops):
            basis.append(P)
    return len(basis) == 4


# ------------------------------------------------------ charpoly checks


def charpoly_trials(C: Curve, coeffs: list[int], trials: int, seed: int = 0):
    """Per-trial outcomes of the kill test for a candidate Weil polynomial.

    Each trial draws D over F_q and E over F_{q^2} and checks
    chi(1) D = 0 and chi(pi)(E) = 0. Yields one bool per trial.
    """
    coeffs = [int(c) for c in coeffs]
    rng = random.Random(seed)
    J1 = jacobian(C, 1)
    J2 = jacobian(C, 2)
    n1 = sum(coeffs)
    for _ in range(trials):
        D = J1.random_point(rng)
        ok = J1.mul(D, n1).is_zero()
        if ok:
            E = J2.random_point(rng)
            ok = J2.apply_poly_in_frobenius(E, coeffs).is_zero()
        yield ok


def verify_charpoly(C: Curve, chi: FrobPoly | list[int], trials: int = 20, seed: int = 0) -> bool:
    """Whether chi passes the kill test on `trials` random points (vacuously true at 0)."""
    coeffs = chi.coeffs if isinstance(chi, FrobPoly) else list(chi)
    return all(charpoly_trials(C, coeffs, trials, seed))
