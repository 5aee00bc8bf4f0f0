"""Oracle backed by an explicit genus-2 curve.

Isomorphism testing uses absolute Igusa invariants.  Evaluating
(l, l)-isogenies is not implemented; the kernel of the isogeny attached to a
prime (l, f(pi)) is still identified on the l-torsion.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..arith import fpoly
from ..arith.fields import GF
from ..errors import InputError
from ..genus2.curve import Curve
from ..genus2.frobenius import FrobPoly
from ..genus2.igusa import igusa_invariants
from ..genus2.jacobian import JacPoint
from ..genus2.torsion import TORSION_BUDGET, charpoly_mod, torsion_basis
from ..relations import Relation
from .base import IsogenyOracle, OracleCapabilityError, VarietyHandle


class ConcreteOracle(IsogenyOracle):
    name = "concrete"

    def __init__(self, curve: Curve, chi: FrobPoly):
        self.curve = curve
        self.chi = chi

    def handle(self, C: Curve) -> VarietyHandle:
        return VarietyHandle(self.name, igusa_invariants(C), C)

    def start(self) -> VarietyHandle:
        return self.handle(self.curve)

    def apply_isogeny(self, h, P, exponent=1):
        raise OracleCapabilityError(
            f"({P.ell}, {P.ell})-isogeny evaluation is not available in the concrete backend")

    def describe(self) -> dict:
        return {"backend": self.name, "curve": self.curve.to_json()}


class StubOracle(IsogenyOracle):
    """Answers relation queries from a fixed table.

    Used when chains were evaluated elsewhere: `answers` maps Relation keys
    to whether the chain returns to an isomorphic variety.
    """

    name = "stub"

    def __init__(self, answers: dict, default: bool | None = None):
        self.answers = dict(answers)
        self.default = default
        self.queries: list = []

    def start(self) -> VarietyHandle:
        return VarietyHandle(self.name, 0)

    def apply_isogeny(self, h, P, exponent=1):
        raise OracleCapabilityError("the stub oracle only answers whole relations")

    def relation_holds(self, h: VarietyHandle, r: Relation) -> bool:
        self.queries.append(r)
        k = r.key()
        if k in self.answers:
            return self.answers[k]
        if self.default is None:
            raise OracleCapabilityError("relation not in the stub's answer table")
        return self.default


# ------------------------------------------------------------ kernels


def _mat_poly(M, coeffs, ell):
    n = len(M)
    out = [[0] * n for _ in range(n)]
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for c in coeffs:
        for i in range(n):
            for j in range(n):
                out[i][j] = (out[i][j] + c * P[i][j]) % ell
        P = [[sum(P[i][k] * M[k][j] for k in range(n)) % ell for j in range(n)] for i in range(n)]
    return out


def _left_kernel(A, ell):
    """Basis of {c : c A = 0} over F_l."""
    n = len(A)
    # solve A^T c^T = 0 by row reduction of A^T
    rows = [[A[j][i] % ell for j in range(n)] for i in range(len(A[0]))]
    piv = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = pow(rows[r][col], -1, ell)
        rows[r] = [x * inv % ell for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[r])]
        piv.append(col)
        r += 1
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for i, pc in enumerate(piv):
            v[pc] = (-rows[i][fcol]) % ell
        basis.append(v)
    return basis


def _restricted_matrix(M, B, ell):
    """Matrix of c -> c M on the span of the rows of B, in that basis."""
    out = []
    for b in B:
        img = [sum(b[k] * M[k][j] for k in range(len(M))) % ell for j in range(len(M))]
        out.append(_solve_in_span(B, img, ell))
    return out


def _solve_in_span(B, v, ell):
    import itertools

    # spans here have dimension 2, so exhaustive search over F_l^2 is cheap
    for coeffs in itertools.product(range(ell), repeat=len(B)):
        w = [sum(c * b[j] for c, b in zip(coeffs, B)) % ell for j in range(len(v))]
        if w == [x % ell for x in v]:
            return list(coeffs)
    raise InputError("vector not in the span")


def x_order_mod(f: list[int], ell: int) -> int:
    """Multiplicative order of x in F_l[x]/(f)."""
    F = GF(ell)
    g = fpoly.from_ints(f, F)
    one = fpoly.from_ints([1], F)
    x = fpoly.from_ints([0, 1], F)
    cur = fpoly.mod(x, g)
    n = 1
    limit = ell ** (len(f) - 1)
    one = fpoly.mod(one, g)
    while fpoly.to_ints(cur) != fpoly.to_ints(one):
        cur = fpoly.mod(fpoly.mul(cur, x), g)
        n += 1
        if n > limit:
            raise InputError("x is not invertible modulo f")
    return n


@dataclass
class KernelInfo:
    ell: int
    factor: tuple[int, ...]
    coordinates: list[list[int]]
    points: list[JacPoint]
    restricted_charpoly: list[int]
    field_degree: int

    def to_json(self) -> dict:
        return {"ell": str(self.ell), "factor": [str(c) for c in self.factor],
                "coordinates": [[str(x) for x in row] for row in self.coordinates],
                "restricted_charpoly": [str(c) for c in self.restricted_charpoly],
                "field_degree": str(self.field_degree)}


def identify_kernel(C: Curve, chi: FrobPoly, ell: int, f: list[int], seed: int = 0,
                    budget: int = TORSION_BUDGET) -> KernelInfo:
    """The subgroup of Jac[l] on which Frobenius has characteristic polynomial f."""
    F = GF(ell)
    fp = fpoly.from_ints(list(f), F)
    chp = fpoly.from_ints(chi.coeffs, F)
    cof, rem = fpoly.divmod_(chp, fp)
    if fpoly.strip(rem):
        raise InputError("f does not divide chi mod l")
    if fpoly.deg(fpoly.gcd(fp, cof)) > 0:
        raise InputError("f is not coprime to chi / f mod l")
    T = torsion_basis(C, ell, chi, seed, budget)
    M = T.frobenius_matrix
    coords = _left_kernel(_mat_poly(M, [c % ell for c in f], ell), ell)
    if len(coords) != len(f) - 1:
        raise InputError("kernel dimension differs from deg f")
    J = T.jacobian
    pts = []
    for c in coords:
        D = J.zero
        for a, t in zip(c, T.points):
            if a:
                D = J.add(D, J.mul(t, a))
        pts.append(D)
    R = _restricted_matrix(M, coords, ell)
    cp = charpoly_mod(R, ell)
    if cp != [c % ell for c in f]:
        raise InputError("restricted Frobenius has the wrong characteristic polynomial")
    return KernelInfo(ell, tuple(f), coords, pts, cp, x_order_mod(list(f), ell))


def kernel_field_degree(info: KernelInfo) -> int:
    """Smallest k with every kernel point fixed by pi^k, found directly."""
    k = 1
    while True:
        if all(P.frobenius(k) == P for P in info.points):
            return k
        k += 1
