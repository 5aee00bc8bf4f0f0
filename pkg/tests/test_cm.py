import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from endoring.arith.integers import factor_integer
from endoring.arith.lattice import Lattice, hnf
from endoring.cm.classgroup import class_order_bsgs, generated_subgroup, pic_order, polarized_order
from endoring.cm.field import CMField
from endoring.cm.ideals import FracIdeal, ideal_reduce, primes_above
from endoring.cm.orders import (Order, OrderLatticeContext, all_orders, build_zpipibar, distance,
                                maximal_order, order_z_pi, orders_directly_above)
from endoring.cm.polarized import PolarizedIdeal, is_principal
from endoring.cm.reflex import ReflexContext, galois_type, has_direct_polarization
from endoring.errors import InputError
from endoring.genus2.frobenius import FrobPoly

from oracles import is_integral_element, superring_candidates

# small fields with nontrivial index, found by scanning Weil polynomials
SMALL = [(13, -3, 4), (13, -6, 22), (17, -2, -10), (7, -2, 2)]


@pytest.fixture(scope="module", params=SMALL, ids=lambda t: "q%d_%d_%d" % t)
def small_ctx(request):
    return OrderLatticeContext.from_field(CMField(FrobPoly(*request.param)))


def _elt(K, coords, basis):
    x = K.zero
    for c, b in zip(coords, basis):
        x = K.add(x, K.scale(b, c))
    return x


# ------------------------------------------------------------ orders


def test_index_72(ctx72):
    assert ctx72.index == 2**2 * 47**2 * 379
    assert ctx72.index_factorization == {2: 2, 47: 2, 379: 1}


def test_index_71(ctx71):
    assert ctx71.index == 2 * 538259


def test_maximal_order_is_maximal(small_ctx):
    K, OK = small_ctx.K, small_ctx.maximal
    assert all(is_integral_element(K, b) for b in OK.basis)
    for p, e in factor_integer(abs(OK.discriminant)).items():
        if e < 2:
            continue
        assert not any(is_integral_element(K, x) for x in superring_candidates(K, OK.basis, p))


def test_maximal_order_idempotent(small_ctx):
    OK = small_ctx.maximal
    assert maximal_order(small_ctx.K, OK).lattice == OK.lattice


def test_discriminant_bounds(small_ctx, ctx72, ctx71):
    for ctx in (small_ctx, ctx72, ctx71):
        q = ctx.K.q
        assert abs(ctx.base.discriminant) < 4**6 * q**4
        assert ctx.index < 2**6 * q**2


def test_index_discriminant_relation(small_ctx):
    for O in all_orders(small_ctx):
        OK = small_ctx.maximal
        assert O.index_in(OK) ** 2 * OK.discriminant == O.discriminant


def test_conjugation_stability(ctx72):
    assert ctx72.base.is_conjugation_stable()
    assert ctx72.maximal.is_conjugation_stable()
    Zpi = order_z_pi(ctx72.K)
    assert Zpi != ctx72.base
    assert not Zpi.is_conjugation_stable()


def test_directly_above_72(ctx72):
    O2 = ctx72.order_plus_multiple(47 * 47 * 379)
    assert ctx72.index_of(O2) == 47 * 47 * 379
    above = orders_directly_above(O2, ctx72)
    assert sorted(ctx72.index_of(A) for A in above) == [379, 47 * 47]
    assert orders_directly_above(ctx72.maximal, ctx72) == []


def _rings_between(ctx):
    """Every conjugation-stable ring between Z[pi, pibar] and O_K, by enumerating subgroups of O_K/O."""
    K, O, OK = ctx.K, ctx.base, ctx.maximal
    Binv = [OK.coordinates(b) for b in O.basis]
    H = hnf([[int(x) for x in r] for r in Binv])
    diag = [H[i][i] for i in range(4)]

    def red(c):
        c = list(c)
        for i in range(4):
            k = c[i] // diag[i]
            if k:
                c = [a - k * h for a, h in zip(c, H[i])]
        return tuple(c)

    zero = (0, 0, 0, 0)
    elems = [red(c) for c in itertools.product(*(range(d) for d in diag))]
    subgroups = {frozenset([zero])}
    frontier = list(subgroups)
    while frontier:
        nxt = []
        for S in frontier:
            for g in elems:
                if g in S:
                    continue
                T = set(S)
                new = list(T)
                while new:
                    x = new.pop()
                    y = red(tuple(a + b for a, b in zip(x, g)))
                    for z in [red(tuple(a + b for a, b in zip(y, s))) for s in list(T)] + [y]:
                        if z not in T:
                            T.add(z)
                            new.append(z)
                T = frozenset(T)
                if T not in subgroups:
                    subgroups.add(T)
                    nxt.append(T)
        frontier = nxt
    rings = []
    for S in subgroups:
        gens = O.basis + [_elt(K, c, OK.basis) for c in S]
        L = Lattice.from_rational_rows([list(x) for x in gens])
        B = [list(map(Fraction, b)) for b in L.basis()]
        closed = all(L.contains_vector(K.mul(a, b)) for a in B for b in B)
        stable = all(L.contains_vector(K.conj(b)) for b in B)
        if closed and stable:
            rings.append(L)
    return rings


def test_order_lattice_exhaustive(small_ctx):
    rings = _rings_between(small_ctx)
    assert {O.lattice for O in all_orders(small_ctx)} == set(rings)
    base = small_ctx.base.lattice
    above = [L for L in rings if L != base and not any(M != base and M != L and L.contains(M) for M in rings)]
    assert {O.lattice for O in orders_directly_above(small_ctx.base, small_ctx)} == set(above)


def test_directly_above_is_antichain(small_ctx):
    for O in all_orders(small_ctx):
        above = orders_directly_above(O, small_ctx)
        for A, B in itertools.permutations(above, 2):
            assert not A.contains_order(B)
        for A in above:
            assert A.is_conjugation_stable()
            Order(small_ctx.K, A.lattice)  # raises unless closed and containing 1


def test_distance(small_ctx):
    orders = all_orders(small_ctx)
    for O in orders:
        assert distance(O, O) == 1
        for A in orders_directly_above(O, small_ctx):
            assert distance(O, A) == O.index_in(A)


# ------------------------------------------------------------ ideals


def test_primes_above_72(ctx72):
    OK = ctx72.maximal
    P3 = primes_above(OK, 3)
    assert [P.prime_norm for P in P3] == [9, 9]
    assert P3[0].conj().lattice == P3[1].lattice
    P19 = primes_above(OK, 19)
    assert [P.prime_norm for P in P19] == [19] * 4
    prod = FracIdeal.unit(OK)
    for P in P19:
        prod = prod * P
    assert prod.lattice == OK.lattice.scale(19)


def test_prime_above_7_principal_71(ctx71):
    OK = ctx71.maximal
    P7 = [P for P in primes_above(OK, 7) if P.residue_degree == 2]
    assert len(P7) == 2
    assert P7[0].conj().lattice == P7[1].lattice
    mu = is_principal(P7[0])
    assert mu is not None
    assert FracIdeal.principal(OK, mu).lattice == P7[0].lattice


def _random_ideal(O, rng, primes):
    I = FracIdeal.unit(O)
    for P in rng.sample(primes, 2):
        I = I * P.power(rng.randint(-2, 3))
    return I


@pytest.fixture(scope="module")
def ideal_pool(small_ctx):
    O = small_ctx.maximal
    primes = []
    for ell in (3, 5, 7, 11, 19, 23, 29, 31):
        try:
            primes += primes_above(O, ell)
        except InputError:
            pass
    return O, primes


def test_ideal_inverse_and_norm(ideal_pool):
    O, primes = ideal_pool
    rng = random.Random(0)
    for _ in range(1000):
        I = _random_ideal(O, rng, primes)
        assert (I * I.inverse()).lattice == O.lattice
    for _ in range(50):
        I, J = _random_ideal(O, rng, primes), _random_ideal(O, rng, primes)
        assert (I * J).norm == I.norm * J.norm
        assert I.conj().norm == I.norm


def test_ideal_reduce(ideal_pool, small_ctx):
    O, primes = ideal_pool
    assert ideal_reduce(FracIdeal.unit(O))[0].norm == 1
    minkowski = Fraction(math.factorial(4), 4**4) * (4 / math.pi) ** 2 * math.sqrt(abs(O.discriminant))
    rng = random.Random(1)
    for _ in range(10):
        I = _random_ideal(O, rng, primes)
        R, alpha = ideal_reduce(I)
        assert R.is_integral()
        assert R.lattice == I.scale(alpha).lattice
        # LLL guarantees a constant-factor Minkowski bound
        assert R.norm <= 2**6 * minkowski
        R2, _ = ideal_reduce(R)
        assert R2.norm <= R.norm * 2**6


def test_principal_ideal_reduces_to_order(ctx72):
    K, O = ctx72.K, ctx72.maximal
    mu = K.elt([5, 3, -1, 2])
    I = FracIdeal.principal(O, mu)
    assert is_principal(FracIdeal.unit(O)) is not None
    R, _ = ideal_reduce(I)
    assert R.lattice == O.lattice


def test_principality_62_2(ctx72):
    O2 = ctx72.order_plus_multiple(47 * 47 * 379)
    O379 = next(A for A in orders_directly_above(O2, ctx72) if ctx72.index_of(A) == 379)
    P3 = primes_above(O379, 3)
    P19 = primes_above(O379, 19)
    found = False
    for p in P3:
        for r, s in itertools.combinations(P19, 2):
            if r.conj().lattice == s.lattice:
                continue
            I = p.power(62) * (r * s).power(2)
            mu = is_principal(I)
            if mu is not None:
                assert FracIdeal.principal(O379, mu).lattice == I.lattice
                found = True
    assert found


def test_norm9_prime_order_92(ctx72):
    O47 = ctx72.order_plus_multiple(47 * 47)
    assert ctx72.index_of(O47) == 47 * 47
    for P in primes_above(O47, 3):
        assert P.prime_norm == 9
        x = PolarizedIdeal(P, ctx72.K.scalar(3), check=True)
        assert polarized_order(x) == 92
        assert is_principal(P) is None
        assert pic_order(P) == 46


# ------------------------------------------------------------ polarized classes


def _polarized_pool(ctx, O, ells=(3, 5, 7, 11, 19, 23, 29, 31)):
    """Polarized ideals of O: primes with P conj(P) = l O directly, otherwise reflex images."""
    K = ctx.K
    R = None if galois_type(K) == "V4" else ReflexContext.from_field(K)
    out = []
    for ell in ells:
        if ctx.index % ell == 0:
            continue
        try:
            Ps = primes_above(O, ell)
        except InputError:
            continue
        for P in Ps:
            if has_direct_polarization(P):
                out.append(PolarizedIdeal(P, K.scalar(ell)))
            elif R is not None:
                out.append(R.action(P))
    return out


def test_polarized_identities(small_ctx):
    O = small_ctx.maximal
    K = small_ctx.K
    one = PolarizedIdeal.unit(O)
    pool = _polarized_pool(small_ctx, O)
    assert pool
    for x in pool[:6]:
        assert x.validate()
        assert (x * one).key == x.key
        assert (x * x.inverse()).is_trivial()
        # (a, rho) (conj a, rho) has first component rho O
        y = PolarizedIdeal(x.a.conj(), x.rho)
        assert (x.a * y.a).lattice == FracIdeal.principal(O, x.rho).lattice
        assert PolarizedIdeal(x.a * y.a, K.mul(x.rho, x.rho)).is_trivial()
    rng = random.Random(2)
    for _ in range(10):
        a, b = rng.choice(pool), rng.choice(pool)
        z = a * b
        assert z.validate()
        assert z.reduce().validate()
        assert z.reduce().key == z.key


@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4))
@settings(max_examples=40)
def test_principal_pairs_are_trivial(v):
    K = CMField(FrobPoly(13, -3, 4))
    mu = K.elt(v)
    if mu == K.zero:
        return
    O = build_zpipibar(K)
    x = PolarizedIdeal(FracIdeal.principal(O, mu), K.mul(mu, K.conj(mu)), check=True)
    assert x.is_trivial()
    OK = maximal_order(K, O)
    assert x.lift(OK).is_trivial()


def test_lift_is_a_morphism(small_ctx):
    O, OK = small_ctx.base, small_ctx.maximal
    pool = _polarized_pool(small_ctx, O, (3, 5, 7, 11, 19, 23, 29, 31, 37, 41))
    assert PolarizedIdeal.unit(O).lift(OK).key == PolarizedIdeal.unit(OK).key
    for x, y in itertools.combinations(pool[:5], 2):
        assert (x * y).lift(OK).key == (x.lift(OK) * y.lift(OK)).key
        if (x * y).is_trivial():
            assert (x * y).lift(OK).is_trivial()


def test_trivial_in_maximal_not_in_suborder():
    # some class is nontrivial in a suborder but trivial once lifted to O_K
    found = False
    for params in SMALL:
        ctx = OrderLatticeContext.from_field(CMField(FrobPoly(*params)))
        for x in _polarized_pool(ctx, ctx.base, (3, 5, 7, 11, 19, 23, 29, 31, 37, 41, 43, 47)):
            n_small = _naive_order(x)
            n_big = _naive_order(x.lift(ctx.maximal))
            assert n_small % n_big == 0
            found |= n_big == 1 and n_small > 1
    assert found


def _naive_order(x, cap=5000):
    cur = x.reduce()
    for n in range(1, cap):
        if cur.is_trivial():
            return n
        cur = (cur * x).reduce()
    raise AssertionError("order not found")


def test_bsgs_matches_naive_order(small_ctx):
    O = small_ctx.base
    assert polarized_order(PolarizedIdeal.unit(O)) == 1
    pool = _polarized_pool(small_ctx, O, (3, 5, 7, 11, 19, 23, 29, 31, 37, 41, 43))
    assert pool
    for x in pool:
        assert class_order_bsgs(x) == _naive_order(x)


def test_generated_subgroup_closed(small_ctx):
    gens = _polarized_pool(small_ctx, small_ctx.maximal, (3, 5, 7, 11))
    G = generated_subgroup(gens)
    for x in list(G.values())[:20]:
        for g in gens:
            assert (x * g).reduce().key in G
    # the subgroup generated by one element has the element's order
    assert len(generated_subgroup(gens[:1])) == polarized_order(gens[0])


# ------------------------------------------------------------ reflex


def test_galois_types(ctx72, ctx71):
    assert galois_type(ctx72.K) == "D4"
    assert galois_type(ctx71.K) == "V4"


def test_reflex_type_norm_identity(ctx72):
    K = ctx72.K
    R = ReflexContext.from_field(K)
    rng = random.Random(3)
    for _ in range(20):
        x = K.elt([rng.randint(-50, 50) for _ in range(4)])
        if x == K.zero:
            continue
        v = R.type_norm_numeric(x)
        with mpmath.workdps(60):
            assert abs(v * mpmath.conj(v) - mpmath.mpf(K.norm(x).numerator) / K.norm(x).denominator) \
                <= mpmath.mpf(10) ** -30 * abs(v) ** 2


def test_reflex_action(ctx72):
    K, O = ctx72.K, ctx72.maximal
    R = ReflexContext.from_field(K)
    P = primes_above(O, 3)[0]
    img = R.action(P)
    assert img.validate()
    assert img.a.norm == Fraction(P.norm) ** 4
    mu = K.elt([2, 1, 0, 0])
    assert R.action(FracIdeal.principal(O, mu)).is_trivial()
    Q = primes_above(O, 19)[0]
    assert (R.action(P) * R.action(Q)).key == R.action(P * Q).key
