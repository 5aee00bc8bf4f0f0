"""Orders of the CM field as canonical lattices, and the lattice of orders
between Z[pi, pibar] and the maximal order."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ..arith.integers import factor_integer
from ..arith.lattice import Lattice, det_int, lcm_list, mat_inv, to_common_denominator
from ..errors import InputError, NotAnOrderError
from .field import CMField, Elt

SMALL_PRIME_BOUND = 10**4
LINE_SCAN_BUDGET = 200_000


def lattice_of(K: CMField, elts) -> Lattice:
    return Lattice.from_rational_rows([list(e) for e in elts])


def elements_of(L: Lattice) -> list[Elt]:
    return [tuple(r) for r in L.basis()]


class Order:
    """A full-rank subring of K containing 1, stored as a canonical HNF lattice."""

    def __init__(self, K: CMField, lattice: Lattice, check: bool = True):
        self.K = K
        self.lattice = lattice
        if check:
            if not lattice.contains_vector(K.one):
                raise NotAnOrderError("lattice does not contain 1")
            if not is_multiplicatively_closed(K, lattice):
                raise NotAnOrderError("lattice is not closed under multiplication")

    def __eq__(self, other):
        return isinstance(other, Order) and self.K == other.K and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"Order({self.lattice})"

    @cached_property
    def basis(self) -> list[Elt]:
        return elements_of(self.lattice)

    def contains(self, x: Elt) -> bool:
        return self.lattice.contains_vector(x)

    def contains_order(self, other: "Order") -> bool:
        return self.lattice.contains(other.lattice)

    def coordinates(self, x: Elt) -> list[Fraction]:
        return self.lattice.coordinates(x)

    @cached_property
    def structure_constants(self) -> list[list[list[int]]]:
        """T[i][j] = coordinates of b_i b_j on the basis (integers)."""
        K, B = self.K, self.basis
        Binv = mat_inv([list(b) for b in B])
        T = []
        for i in range(4):
            row = []
            for j in range(4):
                prod = K.mul(B[i], B[j])
                c = [sum((prod[k] * Binv[k][m] for k in range(4)), Fraction(0)) for m in range(4)]
                if any(x.denominator != 1 for x in c):
                    raise NotAnOrderError("structure constants are not integral")
                row.append([int(x) for x in c])
            T.append(row)
        return T

    @cached_property
    def discriminant(self) -> int:
        K, B = self.K, self.basis
        G = [[K.trace(K.mul(a, b)) for b in B] for a in B]
        M, den = to_common_denominator(G)
        d = Fraction(det_int(M), den**4)
        if d.denominator != 1:
            raise NotAnOrderError("non-integral discriminant")
        return int(d)

    def index_in(self, other: "Order") -> int:
        r = self.lattice.index_in(other.lattice)
        if r.denominator != 1:
            raise InputError("not a suborder")
        return int(r)

    def is_conjugation_stable(self) -> bool:
        return all(self.contains(self.K.conj(b)) for b in self.basis)

    def conductor_like(self, maximal: "Order") -> int:
        """Exponent of O_K/O: smallest m with m O_K in O."""
        m = 1
        for b in maximal.basis:
            c = self.coordinates(b)
            m = m * lcm_list(x.denominator for x in c) // math.gcd(m, lcm_list(x.denominator for x in c))
        return m

    def to_json(self) -> dict:
        return {"den": str(self.lattice.den), "hnf": [[str(x) for x in r] for r in self.lattice.H]}

    @classmethod
    def from_json(cls, K: CMField, d: dict) -> "Order":
        H = [[int(x) for x in r] for r in d["hnf"]]
        return cls(K, Lattice(H, int(d["den"])))


def is_multiplicatively_closed(K: CMField, L: Lattice) -> bool:
    B = elements_of(L)
    for i in range(4):
        for j in range(i, 4):
            if not L.contains_vector(K.mul(B[i], B[j])):
                return False
    return True


def products_lattice(K: CMField, A: Lattice, B: Lattice) -> Lattice:
    ea, eb = elements_of(A), elements_of(B)
    return lattice_of(K, [K.mul(x, y) for x in ea for y in eb])


def ring_closure(K: CMField, L: Lattice, conj_stable: bool = False) -> Lattice:
    """Smallest (optionally conjugation-stable) ring containing 1 and L."""
    cur = lattice_of(K, elements_of(L) + [K.one])
    while True:
        gens = elements_of(cur)
        if conj_stable:
            gens = gens + [K.conj(g) for g in gens]
        new = lattice_of(K, gens + [K.mul(a, b) for a, b in itertools.combinations_with_replacement(gens, 2)])
        if new == cur:
            return cur
        cur = new


# ------------------------------------------------------------ constructions


def build_zpipibar(K: CMField) -> Order:
    """Z[pi, pibar] = Z[pi] + Z[pibar] as a lattice."""
    gens = [K.power(K.pi, i) for i in range(4)] + [K.power(K.pibar, i) for i in range(1, 4)]
    return Order(K, lattice_of(K, gens))


def order_z_pi(K: CMField) -> Order:
    return Order(K, lattice_of(K, [K.power(K.pi, i) for i in range(4)]))


def factor_base_discriminant(K: CMField, O: Order) -> dict[int, int]:
    """Factor disc(O), splitting off the real-quadratic discriminant first.

    For O = Z[pi, pibar] one has disc = D0^2 * N(a^2 - 4q), a = pi + pibar,
    which keeps the integers handed to Pollard rho small.
    """
    d = abs(O.discriminant)
    fac: dict[int, int] = {}
    parts = []
    D0 = abs(K.real_disc)
    while D0 > 1 and d % D0 == 0:
        parts.append(D0)
        d //= D0
        if len(parts) >= 2:
            break
    parts.append(d)
    for part in parts:
        for p, e in factor_integer(part).items():
            fac[p] = fac.get(p, 0) + e
    return dict(sorted(fac.items()))


def _p_radical(O: Order, p: int) -> Lattice:
    """{x in O : x^(p^j) in pO} with p^j >= 4, as a lattice."""
    T = O.structure_constants
    j = 1
    while p**j < 4:
        j += 1

    def mul(a, b):
        out = [0] * 4
        for i in range(4):
            if a[i]:
                for k in range(4):
                    if b[k]:
                        t = a[i] * b[k]
                        row = T[i][k]
                        for m in range(4):
                            out[m] += t * row[m]
        return [x % p for x in out]

    def powv(a, e):
        r = [x % p for x in O.coordinates(O.K.one)]
        r = [int(x) for x in r]
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    # Frobenius power is F_p-linear on O/pO
    F = [powv([int(i == k) for k in range(4)], p**j) for i in range(4)]
    ker = _kernel_mod_p(F, p)
    B = O.basis
    K = O.K
    gens = [K.scale(b, p) for b in B]
    for v in ker:
        x = K.zero
        for c, b in zip(v, B):
            if c:
                x = K.add(x, K.scale(b, c))
        gens.append(x)
    return lattice_of(K, gens)


def _kernel_mod_p(rows, p):
    """Left kernel {v : v M = 0 mod p} of a square matrix given by rows."""
    n = len(rows)
    # augment [M | I] and row-reduce on the M part
    A = [list(map(lambda x: x % p, rows[i])) + [int(i == j) for j in range(n)] for i in range(n)]
    m = len(rows[0])
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if A[i][col] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][col], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(n):
            if i != r and A[i][col]:
                c = A[i][col]
                A[i] = [(x - c * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return [row[m:] for row in A[r:]]


def multiplier_ring(K: CMField, I: Lattice) -> Lattice:
    """(I : I) = {x in K : x I in I}."""
    return colon_lattice(K, I, I)


def colon_lattice(K: CMField, A: Lattice, B: Lattice) -> Lattice:
    """(A : B) = {x in K : x B in A} = intersection of b^{-1} A over a basis of B."""
    out = None
    for b in elements_of(B):
        binv = K.inv(b)
        L = lattice_of(K, [K.mul(binv, a) for a in elements_of(A)])
        out = L if out is None else out.intersect(L)
    return out


def maximal_order(K: CMField, start: Order | None = None,
                  disc_factors: dict[int, int] | None = None) -> Order:
    """Round-2 p-maximalization at every p with p^2 | disc(start)."""
    O = start if start is not None else build_zpipibar(K)
    if disc_factors is None:
        disc_factors = factor_base_discriminant(K, O)
    for p, e in disc_factors.items():
        if e < 2:
            continue
        while True:
            I = _p_radical(O, p)
            R = multiplier_ring(K, I)
            if R == O.lattice:
                break
            O = Order(K, R, check=False)
    return Order(K, O.lattice)


# ------------------------------------------------------------ order lattice


@dataclass
class OrderLatticeContext:
    K: CMField
    base: Order
    maximal: Order
    index_factorization: dict[int, int]
    small_prime_bound: int = SMALL_PRIME_BOUND
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def index(self) -> int:
        v = 1
        for p, e in self.index_factorization.items():
            v *= p**e
        return v

    @classmethod
    def from_field(cls, K: CMField, small_prime_bound: int = SMALL_PRIME_BOUND) -> "OrderLatticeContext":
        base = build_zpipibar(K)
        fac = factor_base_discriminant(K, base)
        OK = maximal_order(K, base, fac)
        v = base.index_in(OK)
        ifac = factor_integer(v)
        return cls(K, base, OK, ifac, small_prime_bound)

    def index_of(self, O: Order) -> int:
        """[O_K : O]."""
        return O.index_in(self.maximal)

    def order_plus_multiple(self, m: int) -> Order:
        """Z[pi, pibar] + m O_K."""
        L = self.base.lattice + self.maximal.lattice.scale(m)
        return Order(self.K, L)

    def to_json(self) -> dict:
        return {"v": str(self.index),
                "factors": {str(p): e for p, e in self.index_factorization.items()}}


def distance(O1: Order, O2: Order) -> int:
    """[O1 + O2 : O1 meet O2]."""
    s = O1.lattice + O2.lattice
    i = O1.lattice.intersect(O2.lattice)
    r = i.index_in(s)
    return int(r)


def _lines(ell: int, d: int):
    """Projective representatives of nonzero vectors of F_ell^d."""
    for lead in range(d):
        for tail in itertools.product(range(ell), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + tail


def orders_directly_above(O: Order, ctx: OrderLatticeContext, primes=None) -> list[Order]:
    """Minimal conjugation-stable orders strictly between O and O_K."""
    K = ctx.K
    idx = ctx.index_of(O)
    if idx == 1:
        return []
    found: dict[Lattice, Order] = {}
    for ell in factor_integer(idx):
        if primes is not None and ell not in primes:
            continue
        # M = ((1/ell) O meet O_K) / O is an F_ell-space
        M = O.lattice.scale(Fraction(1, ell)).intersect(ctx.maximal.lattice)
        d = 0
        r = int(O.lattice.index_in(M))
        while r % ell == 0 and r > 1:
            r //= ell
            d += 1
        if d == 0:
            continue
        if ell > ctx.small_prime_bound and d > 1:
            raise InputError(f"prime {ell} above the small-prime bound divides the index to a higher power")
        # generators of M over O: vectors of M's basis not in O, reduced to an F_ell basis
        gens = _quotient_basis(K, M, O.lattice, ell)
        count = (ell**d - 1) // (ell - 1)
        if count > LINE_SCAN_BUDGET:
            raise InputError(f"too many subgroups to scan at {ell}")
        for coeffs in _lines(ell, d):
            x = K.zero
            for c, g in zip(coeffs, gens):
                if c:
                    x = K.add(x, K.scale(g, c))
            L = ring_closure(K, lattice_of(K, O.basis + [x]), conj_stable=True)
            if L not in found:
                found[L] = Order(K, L, check=False)
    cands = list(found.values())
    minimal = [A for A in cands if not any(B is not A and A.lattice.contains(B.lattice) for B in cands)]
    return sorted(minimal, key=lambda A: (ctx.index_of(A), A.lattice.H))


def _quotient_basis(K: CMField, M: Lattice, O: Lattice, ell: int) -> list[Elt]:
    """Elements of M whose classes form an F_ell-basis of M/O (M/O elementary abelian)."""
    out: list[Elt] = []
    cur = O
    for b in elements_of(M):
        if not cur.contains_vector(b):
            out.append(b)
            cur = lattice_of(K, elements_of(cur) + [b])
    return out


def all_orders(ctx: OrderLatticeContext, start: Order | None = None) -> list[Order]:
    """Every conjugation-stable order between start (default Z[pi, pibar]) and O_K."""
    start = start or ctx.base
    seen = {start.lattice: start}
    frontier = [start]
    while frontier:
        nxt = []
        for O in frontier:
            for A in orders_directly_above(O, ctx):
                if A.lattice not in seen:
                    seen[A.lattice] = A
                    nxt.append(A)
        frontier = nxt
    return sorted(seen.values(), key=lambda A: (-ctx.index_of(A), A.lattice.H))


def intersect_orders(A: Order, B: Order) -> Order:
    return Order(A.K, A.lattice.intersect(B.lattice), check=False)


def join_orders(A: Order, B: Order) -> Order:
    """Smallest order containing both."""
    return Order(A.K, ring_closure(A.K, A.lattice + B.lattice), check=False)
