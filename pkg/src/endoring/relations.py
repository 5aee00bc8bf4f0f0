"""Relations between polarized classes and how to find them.

A relation is a list of (prime of Z[pi, pibar], exponent).  In an order O
each prime P is sent to a polarized class of O.  A prime with
P conj(P) = ell O goes to (P, ell).  Other primes of a primitive CM type go
to (P conj(P)^{-1}, 1), the composite of the type norms; biquadratic
fields use only primes of the first kind.  The relation
holds in O when the product of the images is trivial.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .arith.integers import primes_up_to
from .cm.classgroup import BSGS_BUDGET, ClassGroupBudgetError, generated_subgroup, polarized_order
from .cm.field import CMField
from .cm.ideals import FracIdeal, PrimeIdeal, lift_prime, lll_basis, prime_factors_mod, primes_above
from .cm.orders import Order, OrderLatticeContext
from .cm.polarized import PolarizedIdeal
from .cm.reflex import galois_type, has_direct_polarization
from .errors import InputError, RelationNotFoundError

GENUS = 2
DEFAULT_GAMMA = 1 / (2 * GENUS * math.sqrt(3))
DEFAULT_EPSILON = 0.5
FACTOR_BASE_FLOOR = 8
RETRY_BUDGET = 100_000


def relation_mode(K: CMField) -> str:
    """'reflex' for primitive types, 'direct' for biquadratic fields."""
    cache = K.__dict__.setdefault("_mode", [])
    if not cache:
        cache.append("direct" if galois_type(K) == "V4" else "reflex")
    return cache[0]


def subexp(x: float) -> float:
    """L(x) = exp(sqrt(log x log log x))."""
    lx = math.log(x)
    return math.exp(math.sqrt(lx * math.log(lx))) if lx > 1 else 1.0


@dataclass(frozen=True)
class RelationGenParams:
    gamma: float = DEFAULT_GAMMA
    epsilon: float = DEFAULT_EPSILON
    seed: int = 0
    floor: int = FACTOR_BASE_FLOOR
    retry_budget: int = RETRY_BUDGET

    def __post_init__(self):
        if self.gamma <= 0 or self.epsilon <= 0:
            raise InputError("gamma and epsilon must be positive")

    def base_bound(self, disc: int) -> float:
        return subexp(abs(disc)) ** self.gamma

    def exponent_bound(self, disc: int) -> int:
        return max(2, int(math.log(abs(disc)) ** (4 + self.epsilon)))

    def norm_cutoff(self, disc: int) -> float:
        return math.log(abs(disc)) ** (2 + self.epsilon)

    def to_json(self) -> dict:
        return {"gamma": repr(self.gamma), "epsilon": repr(self.epsilon), "seed": str(self.seed),
                "floor": str(self.floor), "retry_budget": str(self.retry_budget)}


# ------------------------------------------------------------------ relations


@dataclass(frozen=True)
class Relation:
    entries: tuple[tuple[PrimeIdeal, int], ...]
    mode: str = "reflex"

    def __post_init__(self):
        merged: dict = {}
        primes = {}
        for P, e in self.entries:
            k = (P.ell, P.factor)
            merged[k] = merged.get(k, 0) + int(e)
            primes[k] = P
        ents = tuple((primes[k], merged[k]) for k in sorted(merged, key=lambda k: (k[0] ** (len(k[1]) - 1), k))
                     if merged[k] != 0)
        object.__setattr__(self, "entries", ents)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, Relation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (self.mode, tuple(((P.ell, P.factor), e) for P, e in self.entries))

    def scale(self, m: int) -> "Relation":
        return Relation(tuple((P, e * m) for P, e in self.entries), self.mode)

    @property
    def total_norm(self) -> int:
        return relation_total_norm(self)

    def to_json(self) -> dict:
        return {"mode": self.mode,
                "entries": [{"prime": P.to_json(), "exponent": str(e)} for P, e in self.entries]}

    @classmethod
    def from_json(cls, base: Order, d: dict) -> "Relation":
        ents = []
        for item in d["entries"]:
            ell = int(item["prime"]["ell"])
            factor = tuple(int(c) for c in item["prime"]["factor"])
            P = _prime_lookup(base, ell, factor)
            ents.append((P, int(item["exponent"])))
        return cls(tuple(ents), d.get("mode", "reflex"))


def _prime_lookup(base: Order, ell: int, factor: tuple) -> PrimeIdeal:
    for P in primes_above(base, ell):
        if P.factor == factor:
            return P
    raise InputError(f"no prime above {ell} with factor {list(factor)}")


def relation_total_norm(r: Relation) -> int:
    """Sum of |e| N(P)^{g^2}."""
    return sum(abs(e) * P.prime_norm ** (GENUS * GENUS) for P, e in r.entries)


# ------------------------------------------------------------ class images


class ClassImages:
    """Images of primes of Z[pi, pibar] in the polarized class group of O.

    Orders of the images are cached, so powers cost O(log ord) products
    whatever the size of the exponent.
    """

    def __init__(self, O: Order, mode: str, budget: int = BSGS_BUDGET):
        self.order = O
        self.mode = mode
        self.budget = budget
        self._lift: dict = {}
        self._image: dict = {}
        self._ord: dict = {}
        self.unit_key = PolarizedIdeal.unit(O).key

    def lift(self, P: PrimeIdeal) -> PrimeIdeal:
        k = (P.ell, P.factor)
        if k not in self._lift:
            self._lift[k] = P if P.order == self.order else lift_prime(P, self.order)
        return self._lift[k]

    def image(self, P: PrimeIdeal) -> PolarizedIdeal:
        k = (P.ell, P.factor)
        if k not in self._image:
            Q = self.lift(P)
            K = Q.K
            if self.mode == "direct" or _splits_over_k0(Q):
                x = PolarizedIdeal(Q, K.scalar(Q.ell))
            else:
                x = PolarizedIdeal(Q * Q.conj().inverse(), K.one)
            self._image[k] = x.reduce()
        return self._image[k]

    def class_order(self, P: PrimeIdeal) -> int:
        k = (P.ell, P.factor)
        if k not in self._ord:
            self._ord[k] = polarized_order(self.image(P), self.budget)
        return self._ord[k]

    def power(self, P: PrimeIdeal, e: int) -> PolarizedIdeal:
        return self.image(P).power(e % self.class_order(P))

    def product(self, entries) -> PolarizedIdeal:
        out = PolarizedIdeal.unit(self.order)
        for P, e in entries:
            if e % self.class_order(P):
                out = (out * self.power(P, e)).reduce()
        return out

    def holds(self, entries) -> bool:
        return self.product(entries).key == self.unit_key


def _splits_over_k0(Q: PrimeIdeal) -> bool:
    """Whether Q conj(Q) = l O, so that (Q, l) is already polarized.

    The answer is the same in every order where l is prime to the index.
    """
    return (Q * Q.conj()).lattice == Q.order.lattice.scale(Q.ell)


@lru_cache(maxsize=256)
def class_images(O: Order, mode: str) -> ClassImages:
    return ClassImages(O, mode)


def holds_in(r: Relation, O: Order) -> bool:
    """Whether the product of the polarized images of r is trivial in O."""
    if not r.entries:
        return True
    return class_images(O, r.mode).holds(r.entries)


def relation_lattices_equal(A: Order, B: Order, primes: list[PrimeIdeal], mode: str,
                            limit: int = 20_000) -> bool:
    """Whether the same relations supported on `primes` hold in A and in B.

    Both equal the kernel of Z^primes -> C(A) x C(B) exactly when the
    subgroup generated by the pairs of images is no larger than either factor.
    """
    if A == B:
        return True
    ia, ib = class_images(A, mode), class_images(B, mode)
    na = len(generated_subgroup([ia.image(P) for P in primes], limit))
    nb = len(generated_subgroup([ib.image(P) for P in primes], limit))
    if na != nb:
        return False
    gens = [(ia.image(P), ib.image(P)) for P in primes]
    one = (PolarizedIdeal.unit(A), PolarizedIdeal.unit(B))
    seen = {(one[0].key, one[1].key)}
    frontier = [one]
    while frontier:
        nxt = []
        for x, y in frontier:
            for gx, gy in gens:
                u, w = (x * gx).reduce(), (y * gy).reduce()
                k = (u.key, w.key)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > na:
                        return False
                    nxt.append((u, w))
        frontier = nxt
    return True


def relation_lattice_basis(O: Order, primes: list[PrimeIdeal], mode: str,
                           limit: int = 20_000) -> list[Relation]:
    """Triangular generators of the relations on `primes` holding in O.

    The i-th generator is k_i P_i minus the discrete log of P_i^{k_i} in the
    subgroup generated by the earlier primes, with k_i minimal.
    """
    images = class_images(O, mode)
    one = PolarizedIdeal.unit(O)
    table = {one.key: (one, ())}
    out = []
    for i, P in enumerate(primes):
        g = images.image(P)
        cur, k = g, 1
        while cur.key not in table:
            cur = (cur * g).reduce()
            k += 1
            if k * len(table) > limit:
                raise ClassGroupBudgetError("subgroup larger than the enumeration limit")
        _, vec = table[cur.key]
        ents = [(Q, -e) for Q, e in zip(primes, vec)] + [(P, k)]
        out.append(Relation(tuple(ents), mode))
        if k > 1:
            grown = dict(table)
            for key, (x, vec) in table.items():
                y = x
                for j in range(1, k):
                    y = (y * g).reduce()
                    v = tuple(vec) + (0,) * (i - len(vec)) + (j,)
                    grown.setdefault(y.key, (y, v))
            table = grown
    return out


# ------------------------------------------------------------ factor bases


@dataclass
class FactorBase:
    primes: list[PrimeIdeal]
    ells: list[int]
    bound: float
    floored: bool

    def __len__(self):
        return len(self.primes)

    @property
    def max_norm(self) -> int:
        return max(P.prime_norm for P in self.primes)


def usable_primes(ctx: OrderLatticeContext, ell: int) -> list[PrimeIdeal] | None:
    """Primes of Z[pi, pibar] above ell, or None if ell cannot be used."""
    K = ctx.K
    if ell == K.q or ctx.index % ell == 0:
        return None
    facs = prime_factors_mod(K.coeffs, ell)
    if any(e != 1 for _, e in facs):
        return None
    Ps = primes_above(ctx.base, ell)
    if relation_mode(K) == "direct" and not all(has_direct_polarization(P) for P in Ps):
        return None
    return Ps


def factor_base(ctx: OrderLatticeContext, bound: float, floor: int = FACTOR_BASE_FLOOR,
                ell_limit: int = 10**5) -> FactorBase:
    """All usable primes of norm below bound, padded to at least `floor` primes."""
    cache = ctx._cache.setdefault("factor_base", {})
    key = (round(bound, 6), floor)
    if key in cache:
        return cache[key]
    primes: list[PrimeIdeal] = []
    ells: list[int] = []
    floored = False
    for ell in primes_up_to(ell_limit):
        Ps = usable_primes(ctx, ell)
        if Ps is None:
            continue
        small = [P for P in Ps if P.prime_norm < bound]
        if ell >= bound and len(primes) >= floor:
            break
        if len(primes) < floor:
            if len(small) < len(Ps):
                floored = True
            primes.extend(Ps)
            ells.append(ell)
        elif small:
            primes.extend(Ps)
            ells.append(ell)
    if not primes:
        raise InputError("empty factor base")
    fb = FactorBase(primes, ells, bound, floored)
    cache[key] = fb
    return fb


# ------------------------------------------------------------ smooth reduction


class _PairTracker:
    """Products of primes in O as reduced pairs (I, I^{-1}) with I integral."""

    def __init__(self, O: Order):
        self.O = O
        self.K = O.K
        self.unit = FracIdeal.unit(O)
        self._sq: dict = {}

    def reduce(self, I: FracIdeal, J: FracIdeal):
        """(alpha I, alpha^{-1} J) for a short alpha in J = I^{-1}."""
        K = self.K
        a = lll_basis(K, J.basis)[0]
        return I.scale(a), J.scale(K.inv(a))

    def squares(self, P: PrimeIdeal, k: int):
        """Reduced pairs for P^{2^i}, i <= k."""
        key = (P.ell, P.factor)
        lst = self._sq.setdefault(key, [])
        if not lst:
            lst.append(self.reduce(P, P.inverse()))
        while len(lst) <= k:
            I, J = lst[-1]
            lst.append(self.reduce(I * I, J * J))
        return lst

    def product(self, exps: dict) -> tuple[FracIdeal, FracIdeal]:
        I, J = self.unit, self.unit
        for P, x in exps.items():
            if x == 0:
                continue
            n = abs(x)
            sq = self.squares(P, n.bit_length() - 1)
            for i in range(n.bit_length()):
                if (n >> i) & 1:
                    A, B = sq[i]
                    if x < 0:
                        A, B = B, A
                    I, J = self.reduce(I * A, J * B)
        return I, J


@lru_cache(maxsize=64)
def _tracker(O: Order) -> _PairTracker:
    return _PairTracker(O)


def smooth_factor(J: FracIdeal, fb: FactorBase, lifted: list[PrimeIdeal], inverses: list[FracIdeal]) -> dict | None:
    """Exponents of an integral ideal over the factor base, or None if not smooth."""
    n = J.norm
    if n.denominator != 1:
        raise InputError("reduced ideal is not integral")
    n = int(n)
    rest = n
    for ell in fb.ells:
        while rest % ell == 0:
            rest //= ell
    if rest != 1:
        return None
    ys: dict = {}
    cur = J
    for P, Q, Qinv in zip(fb.primes, lifted, inverses):
        if n % P.ell:
            continue
        v = 0
        while cur.lattice != cur.order.lattice and Q.lattice.contains(cur.lattice):
            cur = cur * Qinv
            v += 1
        if v:
            ys[P] = v
    if cur.lattice != J.order.lattice:
        return None
    return ys


@dataclass
class GenerationStats:
    attempts: int = 0
    smooth: int = 0
    doubled: int = 0
    sub_base_empty: bool = False
    floored: bool = False
    extra: dict = field(default_factory=dict)


def generate_relation(O: Order, ctx: OrderLatticeContext, params: RelationGenParams = RelationGenParams(),
                      rng: random.Random | None = None, stats: GenerationStats | None = None) -> Relation:
    """One relation holding in O, found by smooth reduction of random products."""
    if not O.is_conjugation_stable():
        raise InputError("order is not conjugation-stable")
    rng = rng or random.Random(params.seed)
    stats = stats if stats is not None else GenerationStats()
    mode = relation_mode(O.K)
    disc = abs(O.discriminant)
    fb = factor_base(ctx, params.base_bound(disc), params.floor)
    stats.floored = fb.floored
    cutoff = params.norm_cutoff(disc)
    sub = [P for P in fb.primes if P.prime_norm < cutoff]
    if not sub:
        stats.sub_base_empty = True
        sub = list(fb.primes)
    X = params.exponent_bound(disc)
    tr = _tracker(O)
    lifted = [P if P.order == O else lift_prime(P, O) for P in fb.primes]
    inverses = [Q.inverse() for Q in lifted]
    images = class_images(O, mode)
    for _ in range(params.retry_budget):
        stats.attempts += 1
        xs = {P: rng.randrange(-X + 1, X) for P in sub}
        I, J = tr.product({lift: xs[P] for P, lift in zip(fb.primes, lifted) if P in xs})
        # tr.product returns pairs keyed by the lifted primes; re-reduce to an integral ideal
        I, _ = tr.reduce(I, J)
        ys = smooth_factor(I, fb, lifted, inverses)
        if ys is None:
            continue
        stats.smooth += 1
        exps = {P: xs.get(P, 0) - ys.get(P, 0) for P in fb.primes}
        r = Relation(tuple((P, e) for P, e in exps.items() if e), mode)
        if not r.entries:
            continue
        if images.holds(r.entries):
            return r
        stats.doubled += 1
        # (P conj(P)^{-1}, 1) is the square of (P, ell) for split P, so the product over
        # (mu) holds once split exponents are doubled; in the biquadratic case mu conj(mu)
        # may differ from prod ell^e by a unit, fixed by squaring
        split = Relation(tuple((P, e * 2 if _splits_over_k0(images.lift(P)) else e) for P, e in r.entries), mode)
        for cand in (split, r.scale(2), split.scale(2)):
            if images.holds(cand.entries):
                return cand
        raise RelationNotFoundError("relation from a principal ideal does not hold")
    raise RelationNotFoundError(
        f"no smooth reduction after {params.retry_budget} attempts "
        f"(factor base {len(fb)} primes); try the baby-step giant-step generator")


def norm_cap(O: Order, ctx: OrderLatticeContext, params: RelationGenParams = RelationGenParams()) -> int:
    """Upper bound for the total norm of generate_relation output."""
    disc = abs(O.discriminant)
    fb = factor_base(ctx, params.base_bound(disc), params.floor)
    X = params.exponent_bound(disc)
    y = int(math.log2(disc)) + 1
    return 4 * len(fb) * (X + y) * fb.max_norm ** (GENUS * GENUS)


# ------------------------------------------------------------ BSGS relations


def generate_relation_bsgs(O: Order, targets: list[PrimeIdeal], budget: int = BSGS_BUDGET,
                           search_limit: int = 200_000) -> Relation:
    """Smallest relation supported on the target primes.

    A single target gives (P, ord P).  For several targets the first one is
    tabulated over a full period and small exponent vectors of the others
    are searched in order of increasing size.
    """
    if not targets:
        raise InputError("no target primes")
    mode = relation_mode(O.K)
    images = class_images(O, mode)
    P0 = targets[0]
    m0 = images.class_order(P0)
    if len(targets) == 1:
        return Relation(((P0, m0),), mode)
    x0 = images.image(P0)
    table: dict = {}
    cur = PolarizedIdeal.unit(O)
    for j in range(m0):
        table.setdefault(cur.key, j)
        cur = (cur * x0).reduce()
    rest = targets[1:]
    orders = [images.class_order(P) for P in rest]
    best = Relation(((P0, m0),), mode)
    best_size = m0
    checked = 0
    for size in range(1, sum(orders) + 1):
        if size >= best_size:
            break
        for es in _compositions(size, orders):
            checked += 1
            if checked > search_limit:
                return best
            y = images.product(list(zip(rest, es)))
            j = table.get(y.inverse().reduce().key)
            if j is not None and j + size < best_size:
                best = Relation(((P0, j),) + tuple(zip(rest, es)), mode)
                best_size = j + size
    return best


def _compositions(total: int, caps: list[int]):
    """Nonnegative vectors e with sum total and e_i < caps[i]."""
    if len(caps) == 1:
        if total < caps[0]:
            yield (total,)
        return
    for first in range(min(total, caps[0] - 1) + 1):
        for tail in _compositions(total - first, caps[1:]):
            yield (first,) + tail


def sample_relation_bsgs(O: Order, fb: FactorBase, rng: random.Random, support: int = 3,
                         exponent_range: int = 64) -> Relation:
    """Random relation m x: x a small random vector on a few factor-base primes, m the order of its class."""
    mode = relation_mode(O.K)
    images = class_images(O, mode)
    k = min(support, len(fb.primes))
    chosen = rng.sample(fb.primes, k)
    xs = [(P, rng.randrange(-exponent_range, exponent_range + 1)) for P in chosen]
    z = images.product(xs)
    m = polarized_order(z, images.budget) if z.key != images.unit_key else 1
    r = Relation(tuple((P, e * m) for P, e in xs), mode)
    if not r.entries:
        P = chosen[0]
        r = Relation(((P, images.class_order(P)),), mode)
    return r


def sampling_primes(ctx: OrderLatticeContext, count: int = 10) -> FactorBase:
    """Floored factor base joined with the first `count` usable primes."""
    cache = ctx._cache.setdefault("sampling", {})
    if count not in cache:
        fb = factor_base(ctx, 2.0)
        seen = {(P.ell, P.factor) for P in fb.primes}
        extra = [P for P in relation_support_primes(ctx, count) if (P.ell, P.factor) not in seen]
        ells = sorted(set(fb.ells) | {P.ell for P in extra})
        cache[count] = FactorBase(list(fb.primes) + extra, ells, fb.bound, fb.floored)
    return cache[count]


def relation_support_primes(ctx: OrderLatticeContext, count: int) -> list[PrimeIdeal]:
    """The first `count` usable primes of Z[pi, pibar] by norm."""
    out: list[PrimeIdeal] = []
    for ell in primes_up_to(10**5):
        Ps = usable_primes(ctx, ell)
        if Ps:
            out.extend(Ps)
        if len(out) >= count:
            break
    return sorted(out, key=PrimeIdeal.sort_key)[:count]
