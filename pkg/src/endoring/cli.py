"""Command-line interface.  Every subcommand prints one JSON document.

Exit codes: 0 success, 1 domain error (non-ordinary input, exhausted
budget, failed verification), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cm.classgroup import pic_order, polarized_order
from .cm.field import CMField
from .cm.ideals import primes_above
from .cm.orders import Order, OrderLatticeContext, all_orders, orders_directly_above
from .cm.polarized import PolarizedIdeal
from .errors import EndoRingError, InputError, NotOrdinaryError
from .genus2.curve import Curve, frobenius_charpoly
from .genus2.frobenius import FrobPoly, classify_variety
from .local import local_endo_ring
from .oracle.simulated import SimulatedOracle, SimulatedWorld
from .pipeline.ascent import ascend, compute_endoring
from .pipeline.certificate import make_certificate, verify_certificate_json
from .pipeline.config import RunConfig
from .relations import (GenerationStats, class_images, generate_relation, generate_relation_bsgs,
                        relation_mode, sample_relation_bsgs, sampling_primes)

SCHEMA_PATH = Path(__file__).with_name("schema") / "output.schema.json"


class UsageError(Exception):
    pass


def _load_json(arg: str):
    """A JSON literal or the path of a JSON file."""
    s = arg.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    try:
        return json.loads(Path(arg).read_text())
    except FileNotFoundError as e:
        raise UsageError(f"no such file: {arg}") from e
    except json.JSONDecodeError as e:
        raise UsageError(f"{arg}: {e}") from e


def _curve(args) -> Curve:
    if not args.curve:
        raise UsageError("--curve is required")
    return Curve.from_json(_load_json(args.curve))


def _chi(args, require_ordinary: bool = True) -> FrobPoly:
    if getattr(args, "chi", None):
        chi = FrobPoly.from_json(_load_json(args.chi))
    elif getattr(args, "curve", None):
        chi = frobenius_charpoly(_curve(args), args.count_budget)
    else:
        raise UsageError("--chi or --curve is required")
    if require_ordinary and not classify_variety(chi)["ordinary"]:
        raise NotOrdinaryError("the Frobenius polynomial is not ordinary")
    return chi


def _world(args) -> SimulatedWorld:
    if not args.world:
        raise UsageError("--world is required")
    d = _load_json(args.world)
    # accept the whole output of simulate-world as well as the bare world
    d = d.get("result", d)
    return SimulatedWorld.from_json(d.get("world", d))


def _order(ctx: OrderLatticeContext, multiple: int | None) -> Order:
    return ctx.base if not multiple else ctx.order_plus_multiple(multiple)


def _config(args) -> RunConfig:
    kw = dict(seed=args.seed, small_prime_bound=args.small_prime_bound, backend=args.backend,
              torsion_budget=args.torsion_budget, bsgs_budget=args.bsgs_budget,
              count_budget=args.count_budget, threads=args.threads, repetitions=args.repetitions,
              relation_method=args.method, repetition_cap=args.repetition_cap)
    if args.gamma is not None:
        kw["gamma"] = args.gamma
    return RunConfig(**kw)


# ------------------------------------------------------------ subcommands


def cmd_charpoly(args, cfg):
    chi = frobenius_charpoly(_curve(args), cfg.count_budget)
    return {"chi": chi.to_json(), "coefficients": [str(c) for c in reversed(chi.coeffs[:4])]}


def cmd_classify(args, cfg):
    chi = _chi(args, require_ordinary=False)
    return {"chi": chi.to_json(), **classify_variety(chi)}


def cmd_index(args, cfg):
    chi = _chi(args)
    ctx = OrderLatticeContext.from_field(CMField(chi), cfg.small_prime_bound)
    return ctx.to_json()


def _order_entry(ctx, O):
    return {"index": str(ctx.index_of(O)), "order": O.to_json()}


def cmd_lattice(args, cfg):
    chi = _chi(args)
    ctx = OrderLatticeContext.from_field(CMField(chi), cfg.small_prime_bound)
    O = _order(ctx, args.order_multiple)
    out = {"v": ctx.to_json(), "start": _order_entry(ctx, O),
           "directly_above": [_order_entry(ctx, A) for A in orders_directly_above(O, ctx)]}
    if args.all:
        out["all"] = [_order_entry(ctx, A) for A in all_orders(ctx, O)]
    return out


def cmd_local(args, cfg):
    C = _curve(args)
    chi = _chi(args)
    ctx = OrderLatticeContext.from_field(CMField(chi), cfg.small_prime_bound)
    res = local_endo_ring(C, chi, args.ell, ctx, cfg.derive_seed("local", args.ell), cfg.torsion_budget)
    out = res.to_json()
    out["contains_order_plus_multiple"] = str(ctx.index // args.ell ** ctx.index_factorization.get(args.ell, 0))
    return out


def _primes(ctx, spec: str | None):
    """'3:0,19:1' -> the chosen primes above 3 and 19 (by position)."""
    out = []
    for part in (spec or "").split(","):
        if not part:
            continue
        ell, _, which = part.partition(":")
        Ps = primes_above(ctx.base, int(ell))
        out.append(Ps[int(which or 0)])
    return out


def cmd_relations(args, cfg):
    chi = _chi(args)
    ctx = OrderLatticeContext.from_field(CMField(chi), cfg.small_prime_bound)
    O = _order(ctx, args.order_multiple)
    import random

    rng = random.Random(cfg.derive_seed("cli-relations"))
    rels = []
    stats = GenerationStats()
    targets = _primes(ctx, args.targets)
    for _ in range(args.count):
        if targets:
            r = generate_relation_bsgs(O, targets, cfg.bsgs_budget)
        elif cfg.relation_method == "bsgs":
            r = sample_relation_bsgs(O, sampling_primes(ctx), rng)
        else:
            r = generate_relation(O, ctx, cfg.relation_params(cfg.seed), rng, stats)
        rels.append({"relation": r.to_json(), "total_norm": str(r.total_norm)})
    return {"order": _order_entry(ctx, O), "mode": relation_mode(ctx.K), "relations": rels,
            "stats": {"attempts": str(stats.attempts), "smooth": str(stats.smooth),
                      "factor_base_floored": stats.floored, "sub_base_empty": stats.sub_base_empty}}


def cmd_class_order(args, cfg):
    chi = _chi(args)
    ctx = OrderLatticeContext.from_field(CMField(chi), cfg.small_prime_bound)
    O = _order(ctx, args.order_multiple)
    (P,) = _primes(ctx, args.prime)
    im = class_images(O, relation_mode(ctx.K))
    Q = im.lift(P)
    K = ctx.K
    out = {"order": _order_entry(ctx, O), "prime": P.to_json(), "image_order": str(im.class_order(P))}
    nQ = Q * Q.conj()
    if nQ.lattice == O.lattice.scale(P.ell):
        x = PolarizedIdeal(Q, K.scalar(P.ell))
        out["polarized_order"] = str(polarized_order(x, cfg.bsgs_budget))
        out["picard_order"] = str(pic_order(Q, budget=cfg.bsgs_budget))
    return out


def cmd_ascend(args, cfg):
    w = _world(args)
    orc = SimulatedOracle(w)
    res = ascend(orc.start(), w.ctx, orc, cfg)
    return res.to_json()


def cmd_endoring(args, cfg):
    if cfg.backend == "simulated":
        res = compute_endoring(cfg, world=_world(args))
    else:
        C = _curve(args)
        chi = _chi(args)
        res = compute_endoring(cfg, curve=C, chi=chi)
    return res.to_json()


def cmd_certify(args, cfg):
    w = _world(args)
    orc = SimulatedOracle(w)
    res = compute_endoring(cfg, world=w, oracle=orc)
    cert = make_certificate(res, w.ctx, orc.start(), orc, cfg, w.orders)
    return {"certificate": cert.to_json()}


def cmd_verify(args, cfg):
    w = _world(args)
    orc = SimulatedOracle(w)
    if not args.certificate:
        raise UsageError("--certificate is required")
    d = _load_json(args.certificate)
    d = d.get("result", d)
    d = d.get("certificate", d)
    rep = verify_certificate_json(d, w.ctx, orc.start(), orc, w.orders)
    return rep.to_json()


def cmd_simulate_world(args, cfg):
    w = SimulatedWorld.generate(cfg.seed, (args.q_min, args.q_max))
    return {"world": w.to_json(with_tables=True), "unique": w.unique}


COMMANDS = {
    "charpoly": cmd_charpoly, "classify": cmd_classify, "index": cmd_index, "lattice": cmd_lattice,
    "local": cmd_local, "relations": cmd_relations, "class-order": cmd_class_order, "ascend": cmd_ascend,
    "endoring": cmd_endoring, "certify": cmd_certify, "verify": cmd_verify, "simulate-world": cmd_simulate_world,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--gamma", type=float, default=None)
    common.add_argument("--repetitions", type=int, default=None)
    common.add_argument("--repetition-cap", type=int, default=None)
    common.add_argument("--method", choices=["alg1", "bsgs"], default="alg1")
    common.add_argument("--small-prime-bound", type=int, default=RunConfig.small_prime_bound)
    common.add_argument("--backend", choices=["simulated", "concrete"], default="simulated")
    common.add_argument("--torsion-budget", type=int, default=RunConfig.torsion_budget)
    common.add_argument("--bsgs-budget", type=int, default=RunConfig.bsgs_budget)
    common.add_argument("--count-budget", type=int, default=RunConfig.count_budget)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--curve")
    common.add_argument("--chi")
    common.add_argument("--world")

    p = _Parser(prog="endoring", description="Endomorphism rings of ordinary abelian surfaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("lattice", "relations", "class-order"):
            sp.add_argument("--order-multiple", type=int, default=None,
                            help="use Z[pi, pibar] + m O_K instead of Z[pi, pibar]")
        if name == "lattice":
            sp.add_argument("--all", action="store_true")
        if name == "local":
            sp.add_argument("--ell", type=int, required=True)
        if name == "relations":
            sp.add_argument("--count", type=int, default=1)
            sp.add_argument("--targets", default=None, help="primes as ell:position, comma separated")
        if name == "class-order":
            sp.add_argument("--prime", required=True, help="ell:position")
        if name == "verify":
            sp.add_argument("--certificate")
        if name == "simulate-world":
            sp.add_argument("--q-min", type=int, default=11)
            sp.add_argument("--q-max", type=int, default=31)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        cfg = _config(args)
    except UsageError as e:
        _emit({"error": {"kind": "usage", "message": str(e)}})
        return 2
    except InputError as e:
        _emit({"error": {"kind": "usage", "message": str(e)}})
        return 2
    out = {"command": args.command, "config": cfg.to_json(), "version": __version__}
    try:
        out["result"] = COMMANDS[args.command](args, cfg)
    except UsageError as e:
        out["error"] = {"kind": "usage", "message": str(e)}
        _emit(out)
        return 2
    except EndoRingError as e:
        out["error"] = {"kind": type(e).__name__, "message": str(e)}
        _emit(out)
        return 1
    _emit(out)
    if args.command == "verify" and not out["result"]["ok"]:
        return 1
    return 0


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=1) + "\n")


if __name__ == "__main__":
    sys.exit(main())
