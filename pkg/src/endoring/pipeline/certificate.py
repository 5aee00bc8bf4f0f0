"""Certificates pinning down End by separating relations.

A certificate for O lists orders O_i with relations holding in O_i but not
in the variety, and orders O_j with relations holding in O and in the
variety but not in O_j.  Verification replays the relations through the
oracle, rechecks each algebraic claim, and sweeps the order lattice to see
that O is the only order consistent with all of them.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from ..cm.orders import Order, OrderLatticeContext, all_orders
from ..errors import AmbiguousResultError, CertificateError, EndoRingError, InputError
from ..genus2.frobenius import FrobPoly
from ..oracle.base import IsogenyOracle, VarietyHandle
from ..cm.classgroup import ClassGroupBudgetError
from ..relations import (Relation, holds_in, relation_lattice_basis, relation_lattices_equal, relation_mode,
                         sample_relation_bsgs, sampling_primes)
from .ascent import AscentResult
from .config import RunConfig

FORMAT_VERSION = "1"
SEARCH_BUDGET = 200


@dataclass
class Separation:
    order: Order
    relation: Relation

    def to_json(self) -> dict:
        return {"order": self.order.to_json(), "relation": self.relation.to_json()}


@dataclass
class Certificate:
    chi: FrobPoly
    order: Order
    above: list[Separation]
    below: list[Separation]
    config: RunConfig
    backend: dict
    digest: str = ""
    extra: dict = field(default_factory=dict)

    def body(self) -> dict:
        return {"format": FORMAT_VERSION, "chi": self.chi.to_json(), "order": self.order.to_json(),
                "above": [s.to_json() for s in self.above], "below": [s.to_json() for s in self.below],
                "config": self.config.to_json(), "backend": self.backend}

    def compute_digest(self) -> str:
        blob = json.dumps(self.body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def seal(self) -> "Certificate":
        self.digest = self.compute_digest()
        return self

    def to_json(self) -> dict:
        d = self.body()
        d["sha256"] = self.digest
        return d

    @classmethod
    def from_json(cls, d: dict, ctx: OrderLatticeContext) -> "Certificate":
        K = ctx.K
        chi = FrobPoly.from_json(d["chi"])
        if chi != K.chi:
            raise CertificateError("certificate is for another Frobenius polynomial")

        def sep(x):
            return Separation(Order.from_json(K, x["order"]), Relation.from_json(ctx.base, x["relation"]))

        return cls(chi, Order.from_json(K, d["order"]), [sep(x) for x in d["above"]],
                   [sep(x) for x in d["below"]], RunConfig.from_json(d["config"]), d["backend"],
                   d.get("sha256", ""))


def directly_below(O: Order, orders: list[Order]) -> list[Order]:
    """Maximal orders of the list strictly contained in O."""
    inside = [A for A in orders if A != O and O.contains_order(A)]
    return [A for A in inside if not any(B != A and B.contains_order(A) for B in inside)]


def consistent(E: Order, above: list[Separation], below: list[Separation]) -> bool:
    """Whether End = E agrees with every listed separation."""
    return (all(not holds_in(s.relation, E) for s in above)
            and all(holds_in(s.relation, E) for s in below))


def _find_relation(O: Order, ctx: OrderLatticeContext, rng: random.Random, accept) -> Relation | None:
    fb = sampling_primes(ctx)
    try:
        for r in relation_lattice_basis(O, fb.primes, relation_mode(ctx.K)):
            if accept(r):
                return r
    except ClassGroupBudgetError:
        pass
    for _ in range(SEARCH_BUDGET):
        r = sample_relation_bsgs(O, fb, rng)
        if accept(r):
            return r
    return None


def make_certificate(result: AscentResult, ctx: OrderLatticeContext, A: VarietyHandle,
                     oracle: IsogenyOracle, config: RunConfig, orders: list[Order] | None = None) -> Certificate:
    """Certificate for the ascent's answer, refused if the lattice stays ambiguous."""
    O = result.order
    orders = orders if orders is not None else all_orders(ctx)
    rng = random.Random(config.derive_seed("certificate"))
    above = [Separation(t.order, t.separating) for t in result.rejected if t.separating is not None]
    below: list[Separation] = []
    mode = relation_mode(ctx.K)
    support = sampling_primes(ctx).primes

    def indistinguishable(E):
        try:
            return relation_lattices_equal(O, E, support, mode)
        except ClassGroupBudgetError:
            return False

    for Oj in directly_below(O, orders):
        if indistinguishable(Oj):
            raise AmbiguousResultError("a suborder has the same relation lattice", [O, Oj])
        r = _find_relation(O, ctx, rng, lambda r: not holds_in(r, Oj) and oracle.relation_holds(A, r))
        if r is None:
            raise AmbiguousResultError("no relation separates the order from a suborder", [O, Oj])
        below.append(Separation(Oj, r))
    # further separations for any other order that still fits
    for E in orders:
        if E == O or not consistent(E, above, below):
            continue
        if indistinguishable(E):
            raise AmbiguousResultError("another order has the same relation lattice", [O, E])
        r = _find_relation(E, ctx, rng, lambda r: not holds_in(r, O) and not oracle.relation_holds(A, r))
        if r is not None:
            above.append(Separation(E, r))
            continue
        r = _find_relation(O, ctx, rng, lambda r: not holds_in(r, E) and oracle.relation_holds(A, r))
        if r is not None:
            below.append(Separation(E, r))
            continue
        raise AmbiguousResultError("another order is consistent with every separation", [O, E])
    cert = Certificate(ctx.K.chi, O, above, below, config, oracle.describe())
    return cert.seal()


@dataclass
class VerificationReport:
    ok: bool
    failures: list[str]

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def verify_certificate(cert: Certificate, ctx: OrderLatticeContext, A: VarietyHandle,
                       oracle: IsogenyOracle, orders: list[Order] | None = None) -> VerificationReport:
    fails: list[str] = []
    if cert.digest != cert.compute_digest():
        fails.append("digest mismatch")
    O = cert.order
    try:
        if not (O.is_conjugation_stable() and O.contains_order(ctx.base) and ctx.maximal.contains_order(O)):
            fails.append("claimed order is not a conjugation-stable order over Z[pi, pibar]")
    except InputError as e:
        fails.append(f"claimed order invalid: {e}")
    for i, s in enumerate(cert.above):
        if not holds_in(s.relation, s.order):
            fails.append(f"above[{i}]: relation does not hold in its order")
        if holds_in(s.relation, O):
            fails.append(f"above[{i}]: relation holds in the claimed order")
        if oracle.relation_holds(A, s.relation):
            fails.append(f"above[{i}]: isogeny chain returns to an isomorphic variety")
    for j, s in enumerate(cert.below):
        if not holds_in(s.relation, O):
            fails.append(f"below[{j}]: relation does not hold in the claimed order")
        if holds_in(s.relation, s.order):
            fails.append(f"below[{j}]: relation holds in the smaller order")
        if not oracle.relation_holds(A, s.relation):
            fails.append(f"below[{j}]: isogeny chain does not return to an isomorphic variety")
    orders = orders if orders is not None else all_orders(ctx)
    fits = [E for E in orders if consistent(E, cert.above, cert.below)]
    if fits != [O]:
        fails.append(f"uniqueness sweep: {len(fits)} consistent orders")
    return VerificationReport(not fails, fails)


def verify_certificate_json(d: dict, ctx: OrderLatticeContext, A: VarietyHandle, oracle: IsogenyOracle,
                            orders: list[Order] | None = None) -> VerificationReport:
    """Parse and verify; a certificate that does not parse fails."""
    try:
        cert = Certificate.from_json(d, ctx)
    except (EndoRingError, KeyError, ValueError, TypeError) as e:
        return VerificationReport(False, [f"malformed certificate: {e}"])
    return verify_certificate(cert, ctx, A, oracle, orders)


def tamper_variants(cert: Certificate) -> list[dict]:
    """JSON copies of the certificate with one field changed in each."""
    out = []
    d = cert.to_json()
    for fam in ("above", "below"):
        for i, s in enumerate(d[fam]):
            for k, ent in enumerate(s["relation"]["entries"]):
                t = json.loads(json.dumps(d))
                t[fam][i]["relation"]["entries"][k]["exponent"] = str(int(ent["exponent"]) + 1)
                out.append(t)
    t = json.loads(json.dumps(d))
    t["order"]["den"] = str(int(t["order"]["den"]) * 2)
    out.append(t)
    t = json.loads(json.dumps(d))
    t["sha256"] = "0" * 64
    out.append(t)
    return out
