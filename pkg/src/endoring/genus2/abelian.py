"""Structure of finite abelian l-groups from random samples.

The group is accessed only through callables, so the same code serves
Jacobians over finite fields and the toy groups used in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable

from ..arith.lattice import int_mat_inv, smith_form
from ..errors import EndoRingError


class GroupBudgetError(EndoRingError):
    pass


@dataclass
class GroupOps:
    zero: Any
    add: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    mul: Callable[[Any, int], Any]
    key: Callable[[Any], Any]
    is_zero: Callable[[Any], bool]


def order_exponent(x, ell: int, ops: GroupOps, cap: int = 256) -> int:
    """e with ell^e x = 0 minimal (x assumed to have l-power order)."""
    e = 0
    while not ops.is_zero(x):
        x = ops.mul(x, ell)
        e += 1
        if e > cap:
            raise EndoRingError("element does not have l-power order")
    return e


class SubgroupDlog:
    """Discrete logarithms in H = (+) <b_i>, b_i of order ell^{n_i}, by baby-step giant-step."""

    def __init__(self, basis: list, exps: list[int], ell: int, ops: GroupOps):
        self.basis = basis
        self.exps = exps
        self.ell = ell
        self.ops = ops
        sizes = [ell**n for n in exps]
        total = 1
        for s in sizes:
            total *= s
        # baby part: a prefix of the basis with size about sqrt(|H|)
        split, acc = 0, 1
        while split < len(sizes) and acc * acc < total:
            acc *= sizes[split]
            split += 1
        self.split = split
        self.baby: dict = {}
        for coeffs, elt in self._combos(range(split)):
            self.baby[ops.key(elt)] = coeffs
        self.giant = list(self._combos(range(split, len(basis))))

    def _combos(self, idx):
        idx = list(idx)
        ops = self.ops
        out = [((), ops.zero)]
        for i in idx:
            new = []
            b = self.basis[i]
            for coeffs, elt in out:
                cur = elt
                for c in range(self.ell ** self.exps[i]):
                    new.append((coeffs + (c,), cur))
                    cur = ops.add(cur, b)
            out = new
        return out

    def dlog(self, y):
        """Coefficient vector c with sum c_i b_i = y, or None if y not in H."""
        ops = self.ops
        for gc, g in self.giant:
            z = ops.add(y, ops.neg(g)) if gc else y
            hit = self.baby.get(ops.key(z))
            if hit is not None:
                return list(hit) + list(gc)
        return None


class EllGroup:
    """Incrementally computed basis of an abelian l-group of known order l^s."""

    def __init__(self, ell: int, s: int, ops: GroupOps):
        self.ell = ell
        self.s = s
        self.ops = ops
        self.basis: list = []
        self.exps: list[int] = []
        self._dlog: SubgroupDlog | None = None

    @property
    def log_order(self) -> int:
        return sum(self.exps)

    def complete(self) -> bool:
        return self.log_order >= self.s

    def dlog(self, y):
        if self._dlog is None:
            self._dlog = SubgroupDlog(self.basis, self.exps, self.ell, self.ops)
        return self._dlog.dlog(y)

    def add_element(self, g) -> bool:
        """Enlarge the basis by g; returns whether the subgroup grew."""
        ops, ell = self.ops, self.ell
        e = order_exponent(g, ell, ops)
        y = g
        coeffs = None
        h = 0
        while h <= e:
            coeffs = self.dlog(y)
            if coeffs is not None:
                break
            y = ops.mul(y, ell)
            h += 1
        if h == 0:
            return False
        r = len(self.basis)
        M = [[0] * (r + 1) for _ in range(r + 1)]
        for i in range(r):
            M[i][i] = ell ** self.exps[i]
        for i in range(r):
            M[r][i] = -coeffs[i]
        M[r][r] = ell**h
        U, D, V = smith_form(M)
        Vinv = int_mat_inv(V)
        gens = self.basis + [g]
        orders = [ell**n for n in self.exps] + [ell**e]
        new_basis, new_exps = [], []
        for i in range(r + 1):
            d = D[i][i]
            if d == 1:
                continue
            n = 0
            while d % ell == 0:
                d //= ell
                n += 1
            if d != 1:
                raise EndoRingError("non l-power invariant factor")
            elt = ops.zero
            for j in range(r + 1):
                c = Vinv[i][j] % orders[j]
                if c:
                    elt = ops.add(elt, ops.mul(gens[j], c))
            new_basis.append(elt)
            new_exps.append(n)
        self.basis, self.exps = new_basis, new_exps
        self._dlog = None
        return True

    def fill(self, sampler: Callable[[], Any], max_samples: int | None = None):
        if max_samples is None:
            max_samples = 40 + 8 * self.s
        for _ in range(max_samples):
            if self.complete():
                return self
            self.add_element(sampler())
        if not self.complete():
            raise GroupBudgetError("sampling did not generate the full l-group")
        return self

    def torsion_generators(self, k: int) -> list:
        """Generators of G[l^k]."""
        out = []
        for b, n in zip(self.basis, self.exps):
            out.append(self.ops.mul(b, self.ell ** max(n - k, 0)))
        return out


def fp_span_dlog(points: list, ell: int, ops: GroupOps):
    """Dlog helper for an F_l-independent family of l-torsion points."""
    return SubgroupDlog(points, [1] * len(points), ell, ops)


def is_independent_mod_ell(points: list, ell: int, ops: GroupOps) -> bool:
    """Whether l-torsion points are F_l-linearly independent (brute force on the span)."""
    seen = set()
    for coeffs in itertools.product(range(ell), repeat=len(points)):
        elt = ops.zero
        for c, P in zip(coeffs, points):
            if c:
                elt = ops.add(elt, ops.mul(P, c))
        key = ops.key(elt)
        if key in seen:
            return False
        seen.add(key)
    return True
