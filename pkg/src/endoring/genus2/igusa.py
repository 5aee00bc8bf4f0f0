"""Igusa-Clebsch invariants via transvectants of binary sextics over F_p."""

from __future__ import annotations

from math import comb, factorial

from ..errors import InputError
from .curve import Curve


def _dx(form, p):
    """d/dx of sum a_i x^i z^(n-i); returns coefficients of a degree n-1 form."""
    n = len(form) - 1
    return [(i * form[i]) % p for i in range(1, n + 1)]


def _dz(form, p):
    n = len(form) - 1
    return [((n - i) * form[i]) % p for i in range(n)]


def _mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def transvectant(f: list[int], g: list[int], k: int, p: int) -> list[int]:
    """k-th transvectant of binary forms f, g over F_p (coefficients in x-degree)."""
    m, n = len(f) - 1, len(g) - 1
    if k > min(m, n):
        raise ValueError("transvectant order exceeds form degree")
    total = [0] * (m + n - 2 * k + 1)
    for j in range(k + 1):
        a = f
        for _ in range(k - j):
            a = _dx(a, p)
        for _ in range(j):
            a = _dz(a, p)
        b = g
        for _ in range(j):
            b = _dx(b, p)
        for _ in range(k - j):
            b = _dz(b, p)
        term = _mul(a, b, p)
        c = (-1) ** j * comb(k, j)
        for i, t in enumerate(term):
            total[i] = (total[i] + c * t) % p
    scale = factorial(m - k) * factorial(n - k) * pow(factorial(m) * factorial(n), -1, p) % p
    return [x * scale % p for x in total]


def clebsch_invariants(f: list[int], p: int) -> tuple[int, int, int, int]:
    f = list(f) + [0] * (7 - len(f))
    i = transvectant(f, f, 4, p)
    delta = transvectant(i, i, 2, p)
    y1 = transvectant(f, i, 4, p)
    y2 = transvectant(i, y1, 2, p)
    y3 = transvectant(i, y2, 2, p)
    A = transvectant(f, f, 6, p)[0]
    B = transvectant(i, i, 4, p)[0]
    C = transvectant(i, delta, 4, p)[0]
    D = transvectant(y3, y1, 2, p)[0]
    return A, B, C, D


def igusa_clebsch(f: list[int], p: int) -> tuple[int, int, int, int]:
    """(I2, I4, I6, I10) of y^2 = f(x), f viewed as a binary sextic."""
    if p < 7:
        raise InputError("Igusa-Clebsch invariants need characteristic >= 7")
    A, B, C, D = clebsch_invariants(f, p)
    I2 = -120 * A
    I4 = -720 * A**2 + 6750 * B
    I6 = 8640 * A**3 - 108000 * A * B + 202500 * C
    I10 = (-62208 * A**5 + 972000 * A**3 * B + 1620000 * A**2 * C
           - 3037500 * A * B**2 - 6075000 * B * C - 4556250 * D)
    return I2 % p, I4 % p, I6 % p, I10 % p


def igusa_invariants(C: Curve) -> tuple[int, int, int, int, int]:
    """Absolute invariants (weighted-projective normalisation of (I2:I4:I6:I10))."""
    p = C.q
    I2, I4, I6, I10 = igusa_clebsch(list(C.f), p)
    if I10 == 0:
        raise InputError("I10 vanishes: the curve is singular")
    inv = pow(I10, -1, p)
    j1 = pow(I2, 5, p) * inv % p
    j2 = pow(I2, 3, p) * I4 * inv % p
    j3 = (I2 * I2 * I6 * inv if I2 else pow(I6, 5, p) * pow(inv, 3, p)) % p
    j4 = I4 * I6 * inv % p
    j5 = pow(I4, 5, p) * inv * inv % p
    return j1, j2, j3, j4, j5
