"""Integer and rational lattices: Hermite normal form, LLL, enumeration.

A full-rank rational lattice is stored canonically as ``(H, den)`` where
``H`` is an integer row-HNF (upper triangular, positive diagonal, entries
above each pivot reduced into ``[0, pivot)``) and the lattice is ``Z^n H / den``
with ``gcd(content(H), den) = 1``.  Two lattices are equal iff their
canonical forms coincide.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import PrecisionError

IntMatrix = list[list[int]]


# ----------------------------------------------------------------- helpers


def lcm_list(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def to_common_denominator(rows: Sequence[Sequence[Fraction | int]]) -> tuple[IntMatrix, int]:
    den = lcm_list(Fraction(x).denominator for r in rows for x in r)
    return [[int(Fraction(x) * den) for x in r] for r in rows], den


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    n = len(M)
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def mat_inv(M: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [r[n:] for r in A]


def mat_mul(A, B):
    return [[sum(a * b for a, b in zip(r, col)) for col in zip(*B)] for r in A]


def vec_mat(v, M):
    return [sum(a * b for a, b in zip(v, col)) for col in zip(*M)]


def solve_left(v, M) -> list[Fraction]:
    """x with x M = v for square invertible M."""
    return vec_mat(v, mat_inv(M))


# --------------------------------------------------------------------- HNF


def hnf(rows: Iterable[Sequence[int]], modulus: int | None = None) -> IntMatrix:
    """Row Hermite normal form of the lattice spanned by integer rows.

    If ``modulus`` is given it must be a multiple of the lattice determinant
    (equivalently the lattice contains ``modulus * Z^n``); entries are then
    reduced modulo it during elimination.  Zero rows are dropped.
    """
    A = [list(r) for r in rows]
    if not A:
        return []
    n = len(A[0])
    if modulus is not None:
        D = abs(modulus)
        A = [[x % D for x in r] for r in A] + [[D * int(i == j) for j in range(n)] for i in range(n)]
    out: IntMatrix = []
    r = 0
    for col in range(n):
        active = [row for row in A[r:] if any(row)]
        A = A[:r] + active
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            prow = A[r]
            pv = prow[col]
            clean = True
            for i in range(r + 1, len(A)):
                a = A[i][col]
                if a:
                    qt = a // pv
                    row = A[i]
                    if modulus is not None:
                        A[i] = [(x - qt * y) % D for x, y in zip(row, prow)]
                    else:
                        A[i] = [x - qt * y for x, y in zip(row, prow)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if r >= len(A) or A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
        pv = A[r][col]
        for i in range(r):
            qt = A[i][col] // pv
            if qt:
                A[i] = [x - qt * y for x, y in zip(A[i], A[r])]
        r += 1
    out = [row for row in A[:r]]
    return out


# ----------------------------------------------------------------- Lattice


class Lattice:
    """Full-rank lattice ``Z^n H / den`` in Q^n with canonical HNF basis."""

    __slots__ = ("H", "den", "_hash")

    def __init__(self, H: IntMatrix, den: int = 1, _canonical: bool = False):
        if not _canonical:
            H = hnf(H)
            n = len(H[0]) if H else 0
            if len(H) != n:
                raise ValueError("lattice is not of full rank")
            g = math.gcd(den, *[x for r in H for x in r])
            if g > 1:
                H = [[x // g for x in r] for r in H]
                den //= g
        self.H = tuple(tuple(r) for r in H)
        self.den = den
        self._hash = None

    @classmethod
    def from_int_rows(cls, rows, den: int = 1, modulus: int | None = None) -> "Lattice":
        H = hnf(rows, modulus)
        n = len(rows[0])
        if len(H) != n:
            raise ValueError("generators do not span a full-rank lattice")
        g = math.gcd(den, *[x for r in H for x in r])
        if g > 1:
            H = [[x // g for x in r] for r in H]
            den //= g
        return cls(H, den, _canonical=True)

    @classmethod
    def from_rational_rows(cls, rows) -> "Lattice":
        M, den = to_common_denominator(rows)
        return cls.from_int_rows(M, den)

    @property
    def dim(self) -> int:
        return len(self.H)

    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.den) for x in r] for r in self.H]

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.den == other.den and self.H == other.H

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.H, self.den))
        return self._hash

    def __repr__(self):
        return f"Lattice(H={[list(r) for r in self.H]}, den={self.den})"

    def covolume(self) -> Fraction:
        d = 1
        for i, r in enumerate(self.H):
            d *= r[i]
        return Fraction(d, self.den**self.dim)

    def contains_int_vector(self, v: Sequence[int], den: int = 1) -> bool:
        """Whether ``v/den`` lies in the lattice."""
        g = math.gcd(den, self.den)
        a, b = self.den // g, den // g
        # v/den = x H/self.den  <=>  a v = b x H
        t = [a * x for x in v]
        for j, row in enumerate(self.H):
            piv = b * row[j]
            if t[j] % piv:
                return False
            c = t[j] // piv
            if c:
                for k in range(j, len(t)):
                    t[k] -= c * b * row[k]
        return not any(t)

    def contains_vector(self, v: Sequence[Fraction | int]) -> bool:
        den = lcm_list(Fraction(x).denominator for x in v)
        return self.contains_int_vector([int(Fraction(x) * den) for x in v], den)

    def contains(self, other: "Lattice") -> bool:
        return all(self.contains_int_vector(r, other.den) for r in other.H)

    def coordinates(self, v: Sequence[Fraction | int]) -> list[Fraction]:
        """Coordinates of v on the HNF basis."""
        B = self.basis()
        return solve_left(list(v), B)

    def __add__(self, other: "Lattice") -> "Lattice":
        D = self.den * other.den // math.gcd(self.den, other.den)
        a, b = D // self.den, D // other.den
        rows = [[a * x for x in r] for r in self.H] + [[b * x for x in r] for r in other.H]
        return Lattice.from_int_rows(rows, D)

    def scale(self, c: Fraction | int) -> "Lattice":
        c = Fraction(c)
        return Lattice.from_int_rows([[x * c.numerator for x in r] for r in self.H], self.den * c.denominator)

    def dual(self) -> "Lattice":
        """{x : <x, y> in Z for all y in the lattice} for the standard pairing."""
        inv = mat_inv(self.H)  # rows of (H/den)^{-T} are den * columns of H^{-1}
        rows = [[inv[i][j] * self.den for i in range(self.dim)] for j in range(self.dim)]
        return Lattice.from_rational_rows(rows)

    def intersect(self, other: "Lattice") -> "Lattice":
        return (self.dual() + other.dual()).dual()

    def index_in(self, other: "Lattice") -> Fraction:
        """[other : self] as covolume ratio (an integer when self <= other)."""
        return self.covolume() / other.covolume()


# --------------------------------------------------------------------- LLL


def lll_gram(G: Sequence[Sequence[int]], delta: tuple[int, int] = (99, 100)):
    """Integral LLL on a positive definite integer Gram matrix.

    Returns ``(U, G')`` with ``U`` unimodular, ``G' = U G U^T`` reduced.
    Exact arithmetic throughout (no floating point).
    """
    a, b = delta
    n = len(G)
    G = [list(map(int, r)) for r in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return U, G
    d = [0] * (n + 1)
    d[0] = 1
    lam = [[0] * n for _ in range(n)]
    d[1] = G[0][0]
    if d[1] <= 0:
        raise ValueError("Gram matrix is not positive definite")

    def redi(k, l):
        dl = d[l + 1]
        if 2 * abs(lam[k][l]) > dl:
            qt = (2 * lam[k][l] + dl) // (2 * dl)
            U[k] = [x - qt * y for x, y in zip(U[k], U[l])]
            # Gram update for b_k <- b_k - qt b_l
            gkk, gkl, gll = G[k][k], G[k][l], G[l][l]
            for j in range(n):
                if j != k:
                    G[k][j] -= qt * G[l][j]
                    G[j][k] = G[k][j]
            G[k][k] = gkk - 2 * qt * gkl + qt * qt * gll
            lam[k][l] -= qt * dl
            for i in range(l):
                lam[k][i] -= qt * lam[l][i]

    def swapi(k):
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for r in G:
            r[k], r[k - 1] = r[k - 1], r[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = G[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise ValueError("Gram matrix is not positive definite")
                    d[k + 1] = u
        redi(k, k - 1)
        if b * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < a * d[k] ** 2:
            swapi(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return U, G


def gram_of(rows) -> list[list]:
    return [[sum(x * y for x, y in zip(r, s)) for s in rows] for r in rows]


def lll_reduce(basis: Sequence[Sequence[Fraction | int]], delta: tuple[int, int] = (99, 100)):
    """LLL-reduce a basis of rational vectors for the Euclidean norm."""
    M, den = to_common_denominator(basis)
    U, _ = lll_gram(gram_of(M), delta)
    red = mat_mul(U, M)
    if den == 1:
        return red
    return [[Fraction(x, den) for x in r] for r in red]


def is_lll_reduced(basis, delta: Fraction = Fraction(99, 100)) -> bool:
    """Size reduction |mu| <= 1/2 and the Lovasz condition (exact check)."""
    B = [[Fraction(x) for x in r] for r in basis]
    n = len(B)
    Bs: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = []
    for i in range(n):
        v = list(B[i])
        for j in range(i):
            mu[i][j] = sum(x * y for x, y in zip(B[i], Bs[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
        Bs.append(v)
        norms.append(sum(x * x for x in v))
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


# ------------------------------------------------------------- enumeration


def _cholesky_float(G):
    n = len(G)
    Q = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
        if Q[i][i] <= 0:
            raise PrecisionError("floating Cholesky lost positivity")
    return Q


def _quad(G, x):
    n = len(x)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def short_vectors(G, bound, max_count: int | None = None):
    """All x != 0 (one of each pair +-x) with x^T G x <= bound.

    ``G`` is a positive definite matrix with rational (or integer) entries.
    The search runs on an LLL-reduced version of the form with floating
    point pruning and an exact final check.  Returns a list of
    ``(x, value)`` sorted by value.
    """
    n = len(G)
    Gf = [[Fraction(x) for x in r] for r in G]
    den = lcm_list(x.denominator for r in Gf for x in r)
    Gi = [[int(x * den) for x in r] for r in Gf]
    U, Gr = lll_gram(Gi)
    bound = Fraction(bound)
    scale = float(bound * den)
    if scale <= 0:
        return []
    Q = _cholesky_float([[Fraction(x) / (bound * den) for x in r] for r in Gr])
    out = []
    slack = 1e-9
    x = [0] * n
    T = [0.0] * n
    Ucent = [0.0] * n
    i = n - 1
    T[i] = 1.0 + slack
    Ucent[i] = 0.0

    def bounds(i):
        z = math.sqrt(max(T[i], 0.0) / Q[i][i])
        return math.ceil(-z - Ucent[i] - 1e-12), math.floor(z - Ucent[i] + 1e-12)

    lo, hi = bounds(i)
    x[i] = lo - 1
    limits = [0] * n
    limits[i] = hi
    while True:
        x[i] += 1
        if x[i] > limits[i]:
            i += 1
            if i >= n:
                break
            continue
        if i > 0:
            t = x[i] + Ucent[i]
            T[i - 1] = T[i] - Q[i][i] * t * t
            i -= 1
            Ucent[i] = sum(Q[i][j] * x[j] for j in range(i + 1, n))
            lo, hi = bounds(i)
            x[i] = lo - 1
            limits[i] = hi
            continue
        if any(x):
            first = next(v for v in reversed(x) if v)
            if first > 0:
                val = Fraction(_quad(Gr, x), den)
                if 0 < val <= bound:
                    y = vec_mat(x, U)
                    if next(v for v in reversed(y) if v) < 0:
                        y = [-v for v in y]
                    out.append((tuple(y), val))
                    if max_count is not None and len(out) > max_count:
                        raise PrecisionError("too many short vectors")
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def minimal_vectors(G):
    """(minimum, list of minimal vectors up to sign) of a positive definite form."""
    Gf = [[Fraction(x) for x in r] for r in G]
    den = lcm_list(x.denominator for r in Gf for x in r)
    Gi = [[int(x * den) for x in r] for r in Gf]
    _, Gr = lll_gram(Gi)
    b = Fraction(min(Gr[i][i] for i in range(len(Gr))), den)
    vs = short_vectors(Gf, b)
    m = vs[0][1]
    return m, [v for v, val in vs if val == m]


# -------------------------------------------------------------- Smith form


def smith_form(M: Sequence[Sequence[int]]):
    """Diagonalise a square integer matrix: returns (U, D, V) with U M V = D.

    ``U`` and ``V`` are unimodular.  The diagonal is made non-negative but
    the divisibility chain is not enforced.
    """
    n = len(M)
    A = [list(map(int, r)) for r in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    for t in range(n):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
            if not nz:
                return U, A, V
            _, i, j = min(nz)
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
            for r in A:
                r[t], r[j] = r[j], r[t]
            for r in V:
                r[t], r[j] = r[j], r[t]
            p = A[t][t]
            done = True
            for i in range(t + 1, n):
                qt = A[i][t] // p
                if qt:
                    A[i] = [x - qt * y for x, y in zip(A[i], A[t])]
                    U[i] = [x - qt * y for x, y in zip(U[i], U[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                qt = A[t][j] // p
                if qt:
                    for r in A:
                        r[j] -= qt * r[t]
                    for r in V:
                        r[j] -= qt * r[t]
                if A[t][j]:
                    done = False
            if done:
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def int_mat_inv(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    inv = mat_inv(M)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in inv]
