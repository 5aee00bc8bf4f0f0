import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import ZZ
from hypothesis import given, strategies as st

from endoring.arith import fpoly
from endoring.arith.fields import GF
from endoring.arith.integers import crt, factor_integer
from endoring.arith.lattice import Lattice, hnf, is_lll_reduced, lll_reduce
from endoring.cm.ideals import prime_factors_mod


def test_factor_integer_examples():
    assert factor_integer(1) == {}
    assert factor_integer(1076518) == {2: 1, 538259: 1}
    assert factor_integer(911 * 937) == {911: 1, 937: 1}
    assert factor_integer(853987) == {83: 1, 10289: 1}


def _trial_division(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@given(st.integers(min_value=1, max_value=10**9))
def test_factor_integer_matches_trial_division(n):
    assert factor_integer(n) == _trial_division(n)


@given(st.integers(min_value=2, max_value=10**30))
def test_factor_integer_recomposes(n):
    fac = factor_integer(n)
    assert math.prod(p**e for p, e in fac.items()) == n
    assert all(sympy.isprime(p) for p in fac)


def test_crt():
    x = crt([2, 3, 1], [3, 5, 7])
    assert (x % 3, x % 5, x % 7) == (2, 3, 1)


def _poly_from_factors(facs, F):
    out = [F.one]
    for g, m in facs:
        for _ in range(m):
            out = fpoly.mul(out, g)
    return out


@given(st.sampled_from([p for p in range(2, 50) if sympy.isprime(p)]),
       st.lists(st.integers(0, 10**6), min_size=2, max_size=5), st.integers(0, 100))
def test_poly_factor_recomposes(p, coeffs, seed):
    F = GF(p)
    f = fpoly.monic(fpoly.strip(fpoly.from_ints(coeffs, F))) if any(c % p for c in coeffs[1:]) else None
    if f is None or len(f) < 2:
        return
    facs = fpoly.factor(f, seed)
    assert fpoly.to_ints(_poly_from_factors(facs, F)) == fpoly.to_ints(f)
    assert all(fpoly.is_irreducible(g) for g, _ in facs)


def test_poly_factor_small_example():
    F = GF(5)
    facs = fpoly.factor(fpoly.from_ints([-1, 0, 1], F))
    assert sorted(fpoly.to_ints(g) for g, _ in facs) == [[1, 1], [4, 1]]


def _monic_irreducible_quadratics(p):
    return [[a, b, 1] for a in range(p) for b in range(p)
            if all((x * x + b * x + a) % p for x in range(p))]


def test_chi72_mod3_two_quadratics(chi72):
    facs = prime_factors_mod(chi72.coeffs, 3)
    irred = _monic_irreducible_quadratics(3)
    assert len(facs) == 2 and all(m == 1 for _, m in facs)
    assert all(list(g) in irred for g, _ in facs)
    assert facs[0][0] != facs[1][0]


def test_chi71_mod7_factorization(chi71):
    facs = prime_factors_mod(chi71.coeffs, 7)
    from sympy.polys.galoistools import gf_factor_sqf

    _, ref = gf_factor_sqf([c % 7 for c in reversed(chi71.coeffs)], 7, ZZ)
    assert sorted(tuple(int(c) for c in reversed(g)) for g in ref) == sorted(tuple(g) for g, _ in facs)
    assert sum(1 for g, _ in facs if len(g) == 3) == 2


@pytest.mark.parametrize("p,k", [(2, 1), (3, 2), (5, 2), (2, 6), (7, 2), (61, 1)])
def test_finite_field_axioms_exhaustive(p, k):
    F = GF(p, k)
    elts = list(F.elements())
    assert len(elts) == p**k
    rng = random.Random(p * k)
    for _ in range(200):
        a, b, c = (rng.choice(elts) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in elts:
        if not a.is_zero():
            assert a * a ** (F.order - 1) == a
    # the p-power Frobenius over the prime field fixes exactly p elements
    assert sum(1 for a in elts if a.frobenius() == a) == p


def test_gf_sqrt():
    F = GF(7681, 2)
    rng = random.Random(1)
    for _ in range(50):
        a = F.random(rng)
        r = (a * a).sqrt()
        assert r is not None and r * r == a * a


def test_lll_identity_and_short_vector():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert [list(map(int, v)) for v in lll_reduce(eye)] == eye
    red = lll_reduce([[1, 0], [1000, 1]])
    assert min(sum(x * x for x in v) for v in red) == 1


@given(st.lists(st.lists(st.integers(-1000, 1000), min_size=4, max_size=4), min_size=4, max_size=4))
def test_lll_first_vector_bound(rows):
    M = sympy.Matrix(rows)
    if M.det() == 0:
        return
    red = lll_reduce(rows)
    assert is_lll_reduced(red)
    # same lattice
    assert Lattice.from_rational_rows(red) == Lattice.from_rational_rows(rows)
    b1 = sum(Fraction(x) ** 2 for x in red[0])
    # lambda_1 by exhaustive search over small coefficient vectors of the reduced basis
    lam = min(sum(x * x for x in (sum(c * Fraction(r[j]) for c, r in zip(cs, red)) for j in range(4)))
              for cs in itertools.product(range(-2, 3), repeat=4) if any(cs))
    assert b1 <= 8 * lam  # 2^{(n-1)/2} squared for n = 4


def test_hnf_is_canonical():
    rows = [[2, 4, 6], [0, 3, 9], [4, 8, 13]]
    H = hnf(rows)
    assert hnf([rows[2], rows[0], rows[1]]) == H
    for i, r in enumerate(H):
        assert all(x == 0 for x in r[:i])
