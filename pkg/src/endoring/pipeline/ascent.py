"""Order tests, lattice ascent and the combination with local computations."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from ..cm.orders import Order, OrderLatticeContext, join_orders, orders_directly_above
from ..errors import InputError
from ..genus2.curve import Curve
from ..genus2.frobenius import FrobPoly, classify_variety
from ..genus2.torsion import TorsionBudgetError
from ..local import LocalResult, local_endo_ring
from ..oracle.base import IsogenyOracle, OracleCapabilityError, VarietyHandle
from ..cm.classgroup import ClassGroupBudgetError
from ..relations import (Relation, generate_relation, generate_relation_bsgs, relation_lattice_basis,
                         relation_mode, sample_relation_bsgs, sampling_primes)
from .config import RunConfig

log = logging.getLogger(__name__)


@dataclass
class TestRecord:
    order: Order
    index: int
    result: bool
    relations: list[tuple[Relation, bool]]
    repetitions: int

    @property
    def separating(self) -> Relation | None:
        for r, ok in self.relations:
            if not ok:
                return r
        return None

    def to_json(self) -> dict:
        return {"order": self.order.to_json(), "index": str(self.index), "result": self.result,
                "repetitions": str(self.repetitions),
                "relations": [{"relation": r.to_json(), "holds_in_variety": ok} for r, ok in self.relations]}


def relation_stream(O: Order, ctx: OrderLatticeContext, config: RunConfig, targets=None):
    """Endless supply of relations holding in O, reproducible from the config seed."""
    seed = config.derive_seed("relations", O.lattice.den, O.lattice.H)
    rng = random.Random(seed)
    if targets:
        yield generate_relation_bsgs(O, list(targets), config.bsgs_budget)
        return
    if config.relation_method == "bsgs":
        fb = sampling_primes(ctx)
        # generators of the relation lattice first, when its class table fits in budget
        try:
            yield from relation_lattice_basis(O, fb.primes, relation_mode(ctx.K))
        except ClassGroupBudgetError:
            pass
        while True:
            yield sample_relation_bsgs(O, fb, rng)
    params = config.relation_params(seed)
    while True:
        yield generate_relation(O, ctx, params, rng)


def test_order(A: VarietyHandle, O: Order, oracle: IsogenyOracle, config: RunConfig,
               ctx: OrderLatticeContext, targets=None) -> TestRecord:
    """Whether every sampled relation of O holds in the variety."""
    n = config.repetition_count(ctx.K.q)
    rels: list[tuple[Relation, bool]] = []
    for r in relation_stream(O, ctx, config, targets):
        ok = oracle.relation_holds(A, r)
        rels.append((r, ok))
        if not ok or len(rels) >= n:
            break
    result = all(ok for _, ok in rels)
    return TestRecord(O, ctx.index_of(O), result, rels, n)


@dataclass
class AscentResult:
    order: Order
    index: int
    start: Order
    start_index: int
    transcripts: list[TestRecord] = field(default_factory=list)
    local: dict[int, LocalResult] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def rejected(self) -> list[TestRecord]:
        return [t for t in self.transcripts if not t.result]

    def to_json(self) -> dict:
        return {"order": self.order.to_json(), "index": str(self.index),
                "start_index": str(self.start_index),
                "tests": [t.to_json() for t in self.transcripts],
                "local": {str(l): r.to_json() for l, r in self.local.items()},
                "warnings": list(self.warnings)}


def ascend(A: VarietyHandle, ctx: OrderLatticeContext, oracle: IsogenyOracle, config: RunConfig,
           start: Order | None = None, primes=None, targets=None) -> AscentResult:
    """Greedy climb through the order lattice, restarting after each accepted order."""
    cur = start or ctx.base
    res = AscentResult(cur, ctx.index_of(cur), cur, ctx.index_of(cur))
    visited = {cur.lattice}
    while True:
        moved = False
        for O in orders_directly_above(cur, ctx, primes):
            if O.lattice in visited:
                continue
            visited.add(O.lattice)
            rec = test_order(A, O, oracle, config, ctx, targets)
            res.transcripts.append(rec)
            log.debug("order of index %s: %s", rec.index, rec.result)
            if rec.result:
                cur = O
                moved = True
                break
        if not moved:
            break
    res.order = cur
    res.index = ctx.index_of(cur)
    return res


def compute_endoring_simulated(world, config: RunConfig, oracle: IsogenyOracle | None = None) -> AscentResult:
    from ..oracle.simulated import SimulatedOracle

    oracle = oracle or SimulatedOracle(world)
    res = ascend(oracle.start(), world.ctx, oracle, config)
    res.warnings.append("simulated backend: local kill tests skipped, the whole lattice is ascended")
    return res


def compute_endoring_concrete(C: Curve, chi: FrobPoly, config: RunConfig, oracle: IsogenyOracle,
                              ctx: OrderLatticeContext | None = None, targets=None) -> AscentResult:
    """Local rings at small primes of the index, then ascent at the remaining primes."""
    from ..cm.field import CMField

    info = classify_variety(chi)
    ctx = ctx or OrderLatticeContext.from_field(CMField(chi), config.small_prime_bound)
    warnings = []
    if not info.get("likely_absolutely_simple", True):
        warnings.append("simplicity screen failed: the Frobenius polynomial of a power is reducible")
    small = [l for l in ctx.index_factorization if l <= config.small_prime_bound]
    large = [l for l in ctx.index_factorization if l > config.small_prime_bound]
    start = ctx.base
    local: dict[int, LocalResult] = {}
    if config.local:
        for ell in small:
            try:
                lr = local_endo_ring(C, chi, ell, ctx, config.derive_seed("local", ell), config.torsion_budget)
            except TorsionBudgetError as e:
                warnings.append(f"local computation at {ell} skipped: {e}")
                large.append(ell)
                continue
            local[ell] = lr
            start = Order(ctx.K, join_orders(start, lr.order).lattice, check=False)
    else:
        large = large + small
    if large:
        try:
            res = ascend(oracle.start(), ctx, oracle, config, start, primes=large, targets=targets)
        except OracleCapabilityError as e:
            res = AscentResult(start, ctx.index_of(start), start, ctx.index_of(start))
            warnings.append(f"partial result: the part of End at {sorted(large)} depends on the oracle ({e})")
    else:
        res = AscentResult(start, ctx.index_of(start), start, ctx.index_of(start))
    res.local = local
    res.warnings.extend(warnings)
    return res


def compute_endoring(config: RunConfig, world=None, curve: Curve | None = None, chi: FrobPoly | None = None,
                     oracle: IsogenyOracle | None = None, targets=None) -> AscentResult:
    if world is not None:
        return compute_endoring_simulated(world, config, oracle)
    if curve is None:
        raise InputError("either a simulated world or a curve is required")
    from ..genus2.curve import frobenius_charpoly
    from ..oracle.concrete import ConcreteOracle

    chi = chi or frobenius_charpoly(curve, config.count_budget)
    oracle = oracle or ConcreteOracle(curve, chi)
    return compute_endoring_concrete(curve, chi, config, oracle, targets=targets)
