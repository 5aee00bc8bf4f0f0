"""Orders of classes by baby-step giant-step on canonical polarized keys,
and small finite subgroups generated by polarized classes."""

from __future__ import annotations

from ..arith.integers import divisors, factor_integer
from ..errors import EndoRingError, InputError
from .ideals import FracIdeal
from .polarized import PolarizedIdeal, _rational_sqrt, is_principal
from .realquad import RealUnits

BSGS_BUDGET = 10**8


class ClassGroupBudgetError(EndoRingError):
    pass


def polarized_order(x: PolarizedIdeal, budget: int = BSGS_BUDGET) -> int:
    """Multiplicative order of x in the polarized class group."""
    one = PolarizedIdeal.unit(x.order)
    target = one.key
    x = x.reduce()
    baby: dict = {}
    cur = one
    s = 0
    step = 16
    while True:
        # extend the baby table to size `step`
        while s < step:
            k = cur.key
            if s > 0 and k == target:
                return s
            baby.setdefault(k, s)
            cur = (cur * x).reduce()
            s += 1
        giant = x.power(step)
        z = giant
        for i in range(1, step + 1):
            j = baby.get(z.key)
            if j is not None:
                return i * step - j
            z = (z * giant).reduce()
        if step * step > budget:
            raise ClassGroupBudgetError(f"class order exceeds the budget {budget}")
        step *= 2


def pic_order(I: FracIdeal, units: RealUnits | None = None, budget: int = BSGS_BUDGET) -> int:
    """Order of [I] in Pic(O) for I with I conj(I) = r O, r rational.

    The polarized class x = (I, r) has order m with n | m | 2n where n is
    the Picard order, so n is the least divisor d of m with I^d principal.
    """
    r = _rational_sqrt(I.norm)
    if r is None:
        raise InputError("I conj(I) has no rational generator")
    K = I.K
    x = PolarizedIdeal(I, K.scalar(r))
    x.validate()
    m = polarized_order(x, budget)
    units = units or RealUnits(K, I.order.contains)
    for d in divisors(factor_integer(m)):
        if m % d == 0 and (m // d) <= 2:
            J = x.power(d).a
            if d == m or is_principal(J, units) is not None:
                return d
    return m


def class_order_bsgs(x, units: RealUnits | None = None, budget: int = BSGS_BUDGET) -> int:
    """Order of a polarized class, or of an ideal class in Pic(O)."""
    if isinstance(x, PolarizedIdeal):
        return polarized_order(x, budget)
    if isinstance(x, FracIdeal):
        return pic_order(x, units, budget)
    raise TypeError("expected a PolarizedIdeal or FracIdeal")


def generated_subgroup(gens: list[PolarizedIdeal], limit: int = 10**5) -> dict:
    """Closure of the classes generated by gens: key -> representative."""
    if not gens:
        raise InputError("no generators")
    one = PolarizedIdeal.unit(gens[0].order)
    elems = {one.key: one}
    frontier = [one]
    gens = [g.reduce() for g in gens]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                y = (e * g).reduce()
                k = y.key
                if k not in elems:
                    elems[k] = y
                    nxt.append(y)
                    if len(elems) > limit:
                        raise ClassGroupBudgetError("subgroup larger than the enumeration limit")
        frontier = nxt
    return elems
