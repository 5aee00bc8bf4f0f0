import math
import random

import pytest
import sympy

from endoring.cm.field import CMField
from endoring.cm.orders import OrderLatticeContext, orders_directly_above
from endoring.errors import InputError
from endoring.genus2.curve import frobenius_charpoly
from endoring.local import EndoCandidate, candidate_for, kills_torsion, local_endo_ring

from conftest import F71, F72, Q71, Q72
from oracles import random_curve


def perm_order(q, f):
    """Order of Frobenius on the roots of f, from sympy's factorization mod q."""
    x = sympy.symbols("x")
    _, facs = sympy.Poly(list(reversed(f)), x, modulus=q).factor_list()
    return math.lcm(*(g.degree() for g, _ in facs))


def test_scalars_on_two_torsion(curve72, chi72):
    assert kills_torsion(curve72, chi72, [2], 2)
    assert kills_torsion(curve72, chi72, [0], 2)
    assert not kills_torsion(curve72, chi72, [1], 2)
    assert kills_torsion(curve72, chi72, [4, 0, 6], 2)


@pytest.mark.parametrize("which", ["72", "71"])
def test_frobenius_powers_on_two_torsion(which, curve72, chi72, curve71, chi71):
    # pi^k = 1 on Jac[2] exactly when k is a multiple of the order of Frobenius on the roots of f
    C, chi, q, f = (curve72, chi72, Q72, F72) if which == "72" else (curve71, chi71, Q71, F71)
    m = perm_order(q, f)
    for k in range(1, 7):
        num = [-1] + [0] * (k - 1) + [1]
        assert kills_torsion(C, chi, num, 2) == (k % m == 0)


def test_alpha_reduces_to_pi_cubed_plus_one(curve71, chi71):
    alpha = [417 * Q71, 1346084914086, 497115559392, 1]
    assert [c % 2 for c in alpha] == [1, 0, 0, 1]
    assert perm_order(Q71, F71) == 6
    assert kills_torsion(curve71, chi71, alpha, 2) == kills_torsion(curve71, chi71, [1, 0, 0, 1], 2)


def test_kill_test_rejects_bad_n(curve72, chi72):
    with pytest.raises(InputError):
        kills_torsion(curve72, chi72, [1], 0)
    with pytest.raises(InputError):
        kills_torsion(curve72, chi72, [1], Q72)


def test_candidate_validation():
    with pytest.raises(InputError):
        EndoCandidate((1, 2), 0)
    with pytest.raises(InputError):
        EndoCandidate((1, 2, 3, 4, 5), 2)


def test_candidate_for_alpha(ctx71):
    K = ctx71.K
    O2 = orders_directly_above(ctx71.base, ctx71, primes=[2])
    assert [ctx71.index_of(O) for O in O2] == [538259]
    x = next(b for b in O2[0].basis if not ctx71.base.contains(b))
    cand, k = candidate_for(x, 2, ctx71.base, Q71)
    assert k == 1 and cand.denominator == 2
    # numerator(pi) / 2 is q^3 x
    assert cand.element(K) == K.scale(x, Q71**3)


def test_local_at_two_72(curve72, chi72, ctx72):
    res = local_endo_ring(curve72, chi72, 2, ctx72)
    assert res.index == 47**2 * 379
    assert res.locally_maximal
    assert res.torsion_levels == [1]
    assert res.order.is_conjugation_stable()
    assert res.order.contains_order(ctx72.order_plus_multiple(47**2 * 379))


def test_local_prime_not_dividing_index(curve72, chi72, ctx72):
    res = local_endo_ring(curve72, chi72, 3, ctx72)
    assert res.order == ctx72.base and res.tested == []


def test_local_at_two_71(curve71, chi71, ctx71):
    res = local_endo_ring(curve71, chi71, 2, ctx71)
    # Frobenius has order 6 on the Weierstrass points, so pi^3 + 1 does not vanish on Jac[2]
    assert res.tested == [(538259, False)]
    assert res.index == 2 * 538259
    assert not res.locally_maximal


def test_local_small_curves():
    # on small curves the local answer never exceeds what torsion allows
    rng = random.Random(5)
    seen = 0
    while seen < 4:
        C = random_curve(rng.choice([7, 11, 13]), rng)
        chi = frobenius_charpoly(C)
        if not chi.is_irreducible():
            continue
        try:
            ctx = OrderLatticeContext.from_field(CMField(chi))
        except InputError:
            continue
        if ctx.index % 2:
            continue
        res = local_endo_ring(C, chi, 2, ctx)
        assert ctx.base.is_conjugation_stable()
        assert res.order.contains_order(ctx.base)
        assert res.order.is_conjugation_stable()
        assert ctx.index % res.index == 0
        seen += 1
