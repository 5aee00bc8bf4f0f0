import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from endoring.cm.field import CMField
from endoring.cm.ideals import primes_above
from endoring.cm.orders import OrderLatticeContext, all_orders, orders_directly_above
from endoring.errors import InputError
from endoring.genus2.frobenius import FrobPoly
from endoring.relations import (GenerationStats, Relation, RelationGenParams, class_images, factor_base,
                                generate_relation, generate_relation_bsgs, holds_in, norm_cap,
                                relation_lattices_equal, relation_mode, sample_relation_bsgs,
                                sampling_primes)

SMALL = [(13, -3, 4), (13, -6, 22), (17, -2, -10), (7, -2, 2)]


@pytest.fixture(scope="module", params=SMALL, ids=lambda t: "q%d_%d_%d" % t)
def small_ctx(request):
    return OrderLatticeContext.from_field(CMField(FrobPoly(*request.param)))


def naive_order(x, cap=20_000):
    cur = x.reduce()
    for n in range(1, cap):
        if cur.is_trivial():
            return n
        cur = (cur * x).reduce()
    raise AssertionError("order not found")


def naive_holds(r, O):
    """Product of the images by repeated multiplication, exponents cut by naive orders."""
    im = class_images(O, r.mode)
    out = None
    for P, e in r.entries:
        x = im.image(P)
        for _ in range(e % naive_order(x)):
            out = x if out is None else (out * x).reduce()
    return out is None or out.is_trivial()


def _r(*pairs, mode="reflex"):
    return Relation(tuple(pairs), mode)


# ------------------------------------------------------------ total norm


def test_total_norm_examples(ctx72):
    P3 = primes_above(ctx72.base, 3)
    P19 = primes_above(ctx72.base, 19)
    assert _r().total_norm == 0
    assert _r((P3[0], 92)).total_norm == 603612
    assert _r((P3[0], 62), (P19[0], 2), (P19[1], 2)).total_norm == 928066
    assert _r((P3[0], -92)).total_norm == 603612


def test_entries_canonical(ctx72):
    P3 = primes_above(ctx72.base, 3)
    P19 = primes_above(ctx72.base, 19)
    a = _r((P19[0], 1), (P3[0], 2), (P19[0], 3))
    b = _r((P3[0], 2), (P19[0], 4))
    assert a == b and a.key() == b.key()
    assert _r((P3[0], 1), (P3[0], -1)).entries == ()


def test_relation_json_roundtrip(ctx72):
    P3 = primes_above(ctx72.base, 3)
    P19 = primes_above(ctx72.base, 19)
    r = _r((P3[1], -5), (P19[2], 7))
    assert Relation.from_json(ctx72.base, r.to_json()) == r
    with pytest.raises(InputError):
        Relation.from_json(ctx72.base, {"entries": [{"prime": {"ell": "3", "factor": ["9", "9", "1"]},
                                                     "exponent": "1"}]})


def test_empty_relation_holds(small_ctx):
    for O in all_orders(small_ctx):
        assert holds_in(_r(mode=relation_mode(small_ctx.K)), O)


def test_params_validation():
    with pytest.raises(InputError):
        RelationGenParams(gamma=0)
    with pytest.raises(InputError):
        RelationGenParams(epsilon=-1)


# ------------------------------------------------------------ BSGS


def test_bsgs_order_92(ctx72):
    O47 = ctx72.order_plus_multiple(47 * 47)
    for P in primes_above(ctx72.base, 3):
        r = generate_relation_bsgs(O47, [P])
        assert r.entries == ((P, 92),)
        assert r.total_norm == 603612
        assert holds_in(r, O47)
        assert not holds_in(_r((P, 46)), O47)


def test_bsgs_exponent_is_class_order(small_ctx):
    mode = relation_mode(small_ctx.K)
    fb = sampling_primes(small_ctx)
    for O in all_orders(small_ctx):
        im = class_images(O, mode)
        for P in fb.primes:
            r = generate_relation_bsgs(O, [P])
            assert r.entries == ((P, naive_order(im.image(P))),)


def test_bsgs_multi_target(small_ctx):
    fb = sampling_primes(small_ctx)
    O = small_ctx.base
    targets = fb.primes[:3]
    r = generate_relation_bsgs(O, targets)
    assert naive_holds(r, O)
    single = generate_relation_bsgs(O, targets[:1])
    size = sum(abs(e) for _, e in r.entries)
    assert size <= sum(abs(e) for _, e in single.entries)


def test_bsgs_requires_targets(small_ctx):
    with pytest.raises(InputError):
        generate_relation_bsgs(small_ctx.base, [])


# ------------------------------------------------------------ smooth reduction


@pytest.fixture(scope="module")
def generated(small_ctx):
    """Ten smooth-reduction relations per order of the lattice."""
    out = []
    for O in all_orders(small_ctx):
        rng = random.Random(7)
        stats = GenerationStats()
        for _ in range(10):
            out.append((O, generate_relation(O, small_ctx, rng=rng, stats=stats)))
    return out


def test_generated_relations_hold(generated, small_ctx):
    # soundness against exhaustive powering; 220 relations over the four fields
    assert len(generated) >= 40
    for O, r in generated:
        assert r.entries
        assert holds_in(r, O)
        assert naive_holds(r, O)


def test_generated_relations_norm_cap(generated, small_ctx):
    for O, r in generated:
        assert r.total_norm <= norm_cap(O, small_ctx)


def test_generation_deterministic(small_ctx):
    O = small_ctx.base
    a = [generate_relation(O, small_ctx, RelationGenParams(seed=3)) for _ in range(2)]
    b = generate_relation(O, small_ctx, rng=random.Random(3))
    assert a[0] == a[1] == b


def test_generation_rejects_unstable_order(ctx72):
    from endoring.cm.orders import order_z_pi

    with pytest.raises(InputError):
        generate_relation(order_z_pi(ctx72.K), ctx72)


def test_factor_base_floor(small_ctx):
    fb = factor_base(small_ctx, 1.5)
    assert len(fb) >= 8
    assert fb.floored
    assert all(small_ctx.index % P.ell and P.ell != small_ctx.K.q for P in fb.primes)


# ------------------------------------------------------------ monotonicity


def test_monotone_lifts(small_ctx):
    fb = sampling_primes(small_ctx)
    rng = random.Random(11)
    orders = all_orders(small_ctx)
    pairs = [(A, B) for A, B in itertools.permutations(orders, 2) if B.contains_order(A)]
    checked = 0
    for A, B in pairs:
        for _ in range(10):
            r = sample_relation_bsgs(A, fb, rng)
            assert holds_in(r, A)
            assert holds_in(r, B)
            checked += 1
    assert checked == 10 * len(pairs)


def test_holds_in_maximal_not_in_suborder():
    # exhaustive check on every field: some relation separates O_K from a suborder
    found = False
    for t in SMALL:
        ctx = OrderLatticeContext.from_field(CMField(FrobPoly(*t)))
        OK, fb = ctx.maximal, sampling_primes(ctx)
        for O in orders_directly_above(ctx.base, ctx) + [ctx.base]:
            for P in fb.primes:
                r = generate_relation_bsgs(OK, [P])
                big, small = holds_in(r, OK), holds_in(r, O)
                assert (big, small) == (naive_holds(r, OK), naive_holds(r, O))
                found |= big and not small
    assert found


def test_relation_lattice_comparison(small_ctx):
    mode = relation_mode(small_ctx.K)
    fb = sampling_primes(small_ctx).primes
    orders = all_orders(small_ctx)
    for A in orders:
        assert relation_lattices_equal(A, A, fb, mode)
    for A, B in itertools.combinations(orders, 2):
        eq = relation_lattices_equal(A, B, fb, mode)
        assert eq == relation_lattices_equal(B, A, fb, mode)
        if not eq:
            continue
        # equal lattices: single-prime relations agree
        for P in fb:
            r = generate_relation_bsgs(A, [P])
            assert holds_in(r, B)


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.sampled_from(SMALL))
def test_sampled_relations_hold(seed, t):
    ctx = _ctx(t)
    orders = all_orders(ctx)
    rng = random.Random(seed)
    O = orders[rng.randrange(len(orders))]
    r = sample_relation_bsgs(O, sampling_primes(ctx), rng)
    assert holds_in(r, O)
    assert holds_in(r, ctx.maximal)


_CTX = {}


def _ctx(t):
    if t not in _CTX:
        _CTX[t] = OrderLatticeContext.from_field(CMField(FrobPoly(*t)))
    return _CTX[t]


def test_lattice_basis(small_ctx):
    from endoring.cm.classgroup import generated_subgroup
    from endoring.relations import relation_lattice_basis

    mode = relation_mode(small_ctx.K)
    fb = sampling_primes(small_ctx).primes
    for O in all_orders(small_ctx):
        basis = relation_lattice_basis(O, fb, mode)
        assert len(basis) == len(fb)
        assert all(holds_in(r, O) and naive_holds(r, O) for r in basis)
        # triangular: the diagonal exponents multiply to the size of the generated subgroup
        im = class_images(O, mode)
        diag = 1
        for P, r in zip(fb, basis):
            diag *= dict((Q.factor, e) for Q, e in r.entries if Q.ell == P.ell).get(P.factor, 1)
        assert diag == len(generated_subgroup([im.image(P) for P in fb]))
