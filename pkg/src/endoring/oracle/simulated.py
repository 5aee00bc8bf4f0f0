"""Simulated worlds: a Weil polynomial with a planted endomorphism ring.

A variety is modelled by its polarized class in C(End); the isogeny of a
prime multiplies that class by the prime's image.  This is the free action
of the polarized class group on the isogeny class, taken as given.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property

from ..arith.integers import primes_up_to
from ..cm.classgroup import ClassGroupBudgetError, generated_subgroup
from ..cm.field import CMField
from ..cm.ideals import PrimeIdeal
from ..cm.orders import Order, OrderLatticeContext, all_orders
from ..cm.polarized import PolarizedIdeal
from ..cm.reflex import galois_type
from ..errors import EndoRingError, InputError
from ..genus2.frobenius import FrobPoly
from ..relations import (ClassImages, class_images, relation_lattices_equal, relation_mode,
                         sampling_primes)
from .base import IsogenyOracle, VarietyHandle

DISC_BOUND = 10**8
TABLE_LIMIT = 20_000
SUPPORT_SIZE = 10


@dataclass
class SimulatedWorld:
    chi: FrobPoly
    planted_index: int
    seed: int = 0
    support_size: int = SUPPORT_SIZE
    _tables: dict = field(default_factory=dict, repr=False)

    @cached_property
    def K(self) -> CMField:
        return CMField(self.chi)

    @cached_property
    def ctx(self) -> OrderLatticeContext:
        return OrderLatticeContext.from_field(self.K)

    @cached_property
    def orders(self) -> list[Order]:
        return all_orders(self.ctx)

    @property
    def planted(self) -> Order:
        return self.orders[self.planted_index]

    @property
    def mode(self) -> str:
        return relation_mode(self.K)

    @cached_property
    def support(self) -> list[PrimeIdeal]:
        """Primes over which relation lattices are compared."""
        return sampling_primes(self.ctx, self.support_size).primes

    def images(self, O: Order) -> ClassImages:
        return class_images(O, self.mode)

    def class_table(self, O: Order) -> dict:
        """All classes of C(O) reachable from images of the support primes."""
        k = O.lattice
        if k not in self._tables:
            im = self.images(O)
            self._tables[k] = generated_subgroup([im.image(P) for P in self.support], TABLE_LIMIT)
        return self._tables[k]

    def same_relation_lattice(self, A: Order, B: Order) -> bool:
        """Whether exactly the same relations over the support hold in A and in B."""
        return relation_lattices_equal(A, B, self.support, self.mode, TABLE_LIMIT)

    def equivalent_orders(self, O: Order) -> list[Order]:
        """Orders of the lattice with the same relation lattice as O."""
        return [A for A in self.orders if self.same_relation_lattice(A, O)]

    @cached_property
    def unique(self) -> bool:
        """Whether the planted order is pinned down by its relation lattice."""
        return len(self.equivalent_orders(self.planted)) == 1

    # ------------------------------------------------------------ generation

    @classmethod
    def generate(cls, seed: int, q_range: tuple[int, int] = (11, 31), disc_bound: int = DISC_BOUND,
                 require_nontrivial: bool = True, max_tries: int = 100_000) -> "SimulatedWorld":
        """A random ordinary primitive Weil polynomial and a uniformly planted order."""
        rng = random.Random(seed)
        qs = [p for p in primes_up_to(q_range[1]) if p >= q_range[0]]
        for _ in range(max_tries):
            q = rng.choice(qs)
            B = int(4 * math.sqrt(q))
            c1 = rng.randint(-B, B)
            c2 = rng.randint(-6 * q, 6 * q)
            try:
                chi = FrobPoly(q, c1, c2)
            except (ValueError, EndoRingError):
                continue
            if c2 % q == 0 or not chi.satisfies_weil() or not chi.is_irreducible():
                continue
            D0 = c1 * c1 - 4 * (c2 - 2 * q)
            if D0 <= 0 or math.isqrt(D0) ** 2 == D0:
                continue
            K = CMField(chi)
            try:
                if galois_type(K) == "V4":
                    continue
            except (ValueError, EndoRingError):
                continue
            world = cls(chi, 0, seed)
            world.__dict__["K"] = K
            if abs(world.ctx.base.discriminant) > disc_bound:
                continue
            if require_nontrivial and world.ctx.index == 1:
                continue
            try:
                orders = world.orders
                world.planted_index = rng.randrange(len(orders))
                world.class_table(world.planted)
            except (InputError, ClassGroupBudgetError):
                continue
            return world
        raise EndoRingError("no suitable world found")

    # ------------------------------------------------------------ serialization

    def digest(self, O: Order) -> str:
        keys = sorted(repr(k) for k in self.class_table(O))
        return hashlib.sha256("\n".join(keys).encode()).hexdigest()

    def to_json(self, with_tables: bool = False) -> dict:
        d = {"chi": self.chi.to_json(), "seed": str(self.seed),
             "planted": self.planted.to_json(), "planted_index": str(self.planted_index),
             "support_size": str(self.support_size)}
        if with_tables:
            d["orders"] = [{"order": O.to_json(), "index": str(self.ctx.index_of(O)),
                            "classes": str(len(self.class_table(O))), "digest": self.digest(O)}
                           for O in self.orders]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SimulatedWorld":
        w = cls(FrobPoly.from_json(d["chi"]), int(d["planted_index"]), int(d.get("seed", 0)),
                int(d.get("support_size", SUPPORT_SIZE)))
        if "planted" in d and w.planted.to_json() != d["planted"]:
            raise InputError("planted order does not match the world's order lattice")
        return w

    def dumps(self, with_tables: bool = False) -> str:
        return json.dumps(self.to_json(with_tables), sort_keys=True)


class SimulatedOracle(IsogenyOracle):
    name = "simulated"

    def __init__(self, world: SimulatedWorld, start_class: PolarizedIdeal | None = None):
        self.world = world
        self.End = world.planted
        self.images = world.images(self.End)
        self._start = start_class or PolarizedIdeal.unit(self.End)
        self.queries = 0

    def handle(self, x: PolarizedIdeal) -> VarietyHandle:
        x = x.reduce()
        return VarietyHandle(self.name, x.key, x)

    def start(self) -> VarietyHandle:
        return self.handle(self._start)

    def apply_isogeny(self, h: VarietyHandle, P: PrimeIdeal, exponent: int = 1) -> VarietyHandle:
        if self.world.ctx.index % P.ell == 0 or P.ell == self.world.chi.q:
            raise InputError("isogeny degree must be coprime to the index and to q")
        self.queries += 1
        if exponent % self.images.class_order(P) == 0:
            return h
        return self.handle(h.payload * self.images.power(P, exponent))

    def describe(self) -> dict:
        return {"backend": self.name, "world": self.world.to_json()}
