"""Exact integer/rational linear algebra for lattices.

Matrices are plain row-major tuples of tuples holding ``int`` or
``Fraction`` entries; nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, NotDefinite, NotSquare, NotSymmetric
from .poly import Poly

Mat = tuple  # tuple[tuple[int | Fraction, ...], ...]
Vec = tuple  # tuple[int | Fraction, ...]


# ---------------------------------------------------------------------------
# scalar / vector helpers
# ---------------------------------------------------------------------------

def _n(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def vec(xs: Iterable) -> Vec:
    return tuple(_n(Fraction(x)) for x in xs)


def as_matrix(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise DimensionMismatch("ragged matrix")
    return out


def shape(M: Mat) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M: Mat) -> Mat:
    return tuple(zip(*M)) if M else ()


def mat_mul(A: Mat, B: Mat) -> Mat:
    if shape(A)[1] != shape(B)[0]:
        raise DimensionMismatch(f"cannot multiply {shape(A)} by {shape(B)}")
    Bt = transpose(B)
    return tuple(tuple(_n(sum(a * b for a, b in zip(row, col))) for col in Bt) for row in A)


def mat_vec(A: Mat, x: Sequence) -> Vec:
    if shape(A)[1] != len(x):
        raise DimensionMismatch("matrix/vector size mismatch")
    return tuple(_n(sum(a * b for a, b in zip(row, x))) for row in A)


def mat_add(A: Mat, B: Mat, scale=1) -> Mat:
    return tuple(tuple(_n(a + scale * b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def dot(x: Sequence, y: Sequence):
    return _n(sum(a * b for a, b in zip(x, y)))


def vadd(x: Sequence, y: Sequence, s=1) -> Vec:
    return tuple(_n(a + s * b) for a, b in zip(x, y))


def vscale(x: Sequence, s) -> Vec:
    return tuple(_n(s * a) for a in x)


def is_integral_vec(x: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in x)


def is_integral_mat(M: Mat) -> bool:
    return all(is_integral_vec(r) for r in M)


def common_denominator(entries: Iterable) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in entries), 1)


def primitive(x: Sequence) -> Vec:
    """Scale a nonzero rational vector to a primitive integer vector
    (first nonzero entry keeps its sign)."""
    d = common_denominator(x)
    ints = [int(Fraction(c) * d) for c in x]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(c // g for c in ints)


def sign_normalize(x: Sequence) -> Vec:
    for c in x:
        if c:
            return tuple(x) if c > 0 else tuple(-a for a in x)
    return tuple(x)


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def rref(M: Mat) -> tuple[list[list[Fraction]], list[int]]:
    rows = [[Fraction(c) for c in r] for r in M]
    m, n = shape(M)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def rank(M: Mat) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def det(M: Mat):
    """Determinant; fraction-free Bareiss elimination for integer input."""
    n, k = shape(M)
    if n != k:
        raise NotSquare("determinant of a non-square matrix")
    if n == 0:
        return 1
    if not is_integral_mat(M):
        d = common_denominator(c for r in M for c in r)
        return _n(Fraction(det(tuple(tuple(int(c * d) for c in r) for r in M))) / d ** n)
    A = [[int(c) for c in r] for r in M]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if A[i][i] == 0:
            p = next((j for j in range(i + 1, n) if A[j][i] != 0), None)
            if p is None:
                return 0
            A[i], A[p] = A[p], A[i]
            sign = -sign
        for j in range(i + 1, n):
            for k2 in range(i + 1, n):
                A[j][k2] = (A[j][k2] * A[i][i] - A[j][i] * A[i][k2]) // prev
        prev = A[i][i]
    return sign * A[n - 1][n - 1]


def kernel(M: Mat) -> list[Vec]:
    """Basis of the rational null space of M, each vector cleared to a
    primitive integer vector.  Empty iff M is injective."""
    if not M:
        return []
    rows, pivots = rref(M)
    n = shape(M)[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(primitive(v))
    return basis


def solve(M: Mat, b: Sequence) -> Vec:
    """Unique solution of M x = b for square nonsingular M."""
    n, k = shape(M)
    if n != k:
        raise NotSquare("solve needs a square matrix")
    aug = tuple(tuple(r) + (bi,) for r, bi in zip(M, b))
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return vec(rows[i][n] for i in range(n))


def solve_any(M: Mat, b: Sequence) -> Optional[Vec]:
    """Some solution of M x = b (free variables set to zero), or None."""
    m, n = shape(M)
    aug = tuple(tuple(r) + (bi,) for r, bi in zip(M, b))
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = rows[r][n]
    return vec(x)


def inverse(M: Mat) -> Mat:
    n, k = shape(M)
    if n != k:
        raise NotSquare("inverse of a non-square matrix")
    aug = tuple(tuple(r) + identity(n)[i] for i, r in enumerate(M))
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return as_matrix(r[n:] for r in rows[:n])


# ---------------------------------------------------------------------------
# integer row reduction
# ---------------------------------------------------------------------------

def _row_echelon_int(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Unimodular row echelon form over Z of the first ``ncols`` columns.

    Returns the transformed rows and the number of nonzero leading rows.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, m) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            done = True
            for i in range(r + 1, m):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if any(rows[i][c] for i in range(r, m)):
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
            r += 1
    return rows, r


def lattice_basis(vectors: Sequence[Sequence]) -> list[Vec]:
    """Z-basis (Hermite form) of the lattice generated by rational vectors."""
    if not vectors:
        return []
    d = common_denominator(c for v in vectors for c in v)
    ints = [[int(Fraction(c) * d) for c in v] for v in vectors]
    n = len(ints[0])
    rows, r = _row_echelon_int(ints, n)
    return [vec(Fraction(c, d) for c in row) for row in rows[:r]]


def integer_kernel(A: Mat) -> list[Vec]:
    """Saturated Z-basis of {x in Z^n : A x = 0} for rational A (m x n)."""
    m, n = shape(A)
    if m == 0:
        return [identity(n)[i] for i in range(n)]
    d = common_denominator(c for r in A for c in r)
    Ai = [[int(Fraction(c) * d) for c in r] for r in A]
    aug = [[Ai[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    rows, r = _row_echelon_int(aug, m)
    basis = [tuple(row[m:]) for row in rows[r:]]
    return lll_euclidean(basis)


def lll_euclidean(basis: list[Vec]) -> list[Vec]:
    """LLL-reduce integer vectors under the standard dot product."""
    if len(basis) <= 1:
        return [tuple(int(c) for c in b) for b in basis]
    gram = tuple(tuple(dot(a, b) for b in basis) for a in basis)
    H = lll_reduce(gram)
    return [tuple(_n(sum(h * b[k] for h, b in zip(row, basis))) for k in range(len(basis[0])))
            for row in H]


def lll_reduce(gram: Mat, delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL on a positive definite Gram matrix (Cohen's Gram variant).

    Returns the unimodular transformation H: row i of H gives the i-th
    reduced basis vector as an integer combination of the input basis.
    """
    n = len(gram)
    b = [[Fraction(c) for c in r] for r in gram]
    H = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    if n == 0:
        return H
    B[0] = b[0][0]
    if B[0] <= 0:
        raise NotDefinite("LLL needs a positive definite form")
    k, kmax = 1, 0

    def red(k: int, l: int) -> None:
        if abs(mu[k][l]) <= Fraction(1, 2):
            return
        q = round(mu[k][l])
        H[k] = [a - q * c for a, c in zip(H[k], H[l])]
        bkk = b[k][k] - 2 * q * b[k][l] + q * q * b[l][l]
        for j in range(n):
            if j != k:
                b[k][j] -= q * b[l][j]
                b[j][k] = b[k][j]
        b[k][k] = bkk
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k: int) -> None:
        H[k], H[k - 1] = H[k - 1], H[k]
        b[k], b[k - 1] = b[k - 1], b[k]
        for row in b:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m_ = mu[k][k - 1]
        BB = B[k] + m_ * m_ * B[k - 1]
        mu[k][k - 1] = m_ * B[k - 1] / BB
        old = B[k - 1]
        B[k - 1] = BB
        B[k] = old * B[k] / BB
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m_ * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (b[k][j] - sum(mu[j][i] * mu[k][i] * B[i] for i in range(j))) / B[j]
            B[k] = b[k][k] - sum(mu[k][j] ** 2 * B[j] for j in range(k))
            if B[k] <= 0:
                raise NotDefinite("LLL needs a positive definite form")
        red(k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            swap(k)
            k = max(1, k - 1)
            continue
        for l in range(k - 2, -1, -1):
            red(k, l)
        k += 1
    return H


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int
    zero: int

    @property
    def rank(self) -> int:
        return self.positive + self.negative + self.zero

    @property
    def is_hyperbolic(self) -> bool:
        return self.positive == 1 and self.zero == 0 and self.rank >= 2

    @property
    def is_negative_definite(self) -> bool:
        return self.positive == 0 and self.zero == 0 and self.rank >= 1

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.zero)


@dataclass(frozen=True)
class Lattice:
    """Free Z-module with a symmetric integer Gram matrix.

    ``cone_rep`` optionally designates the positive cone: the component of
    {x : (x, x) > 0} containing that vector.
    """

    gram: Mat
    cone_rep: Optional[Vec] = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.gram)


def make_lattice(gram: Iterable[Iterable], cone_rep: Optional[Sequence] = None) -> Lattice:
    G = as_matrix(gram)
    n, m = shape(G)
    if n != m:
        raise NotSquare(f"Gram matrix is {n}x{m}")
    if n == 0:
        raise NotSquare("a lattice needs rank >= 1")
    if not is_integral_mat(G):
        raise ValueError("Gram matrix must be integral")
    if any(G[i][j] != G[j][i] for i in range(n) for j in range(i)):
        raise NotSymmetric("Gram matrix is not symmetric")
    L = Lattice(G)
    if cone_rep is not None:
        cone_rep = vec(cone_rep)
        if len(cone_rep) != n:
            raise DimensionMismatch("cone representative has wrong length")
        if inner(L, cone_rep, cone_rep) <= 0:
            raise ValueError("cone representative must have positive square")
        L = Lattice(G, cone_rep)
    return L


def bilinear(G: Mat, x: Sequence, y: Sequence):
    return _n(sum(xi * sum(g * yj for g, yj in zip(row, y)) for xi, row in zip(x, G) if xi))


def inner(L: Lattice, x: Sequence, y: Sequence):
    if len(x) != L.rank or len(y) != L.rank:
        raise DimensionMismatch(f"vectors must have length {L.rank}")
    return bilinear(L.gram, x, y)


def gram_of(G: Mat, vectors: Sequence[Sequence]) -> Mat:
    return tuple(tuple(bilinear(G, a, b) for b in vectors) for a in vectors)


def signature(L: "Lattice | Mat", order: Optional[Sequence[int]] = None) -> Signature:
    """Exact signature by symmetric (congruence) elimination.

    ``order`` fixes the pivot search order; Sylvester's law makes the
    result independent of it.
    """
    G = L.gram if isinstance(L, Lattice) else as_matrix(L)
    n = len(G)
    idx = list(order) if order is not None else list(range(n))
    A = {(i, j): Fraction(G[i][j]) for i in range(n) for j in range(n)}
    live = list(idx)
    pos = neg = 0
    while live:
        p = next((i for i in live if A[i, i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in live for j in live if i != j and A[i, j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the new diagonal entry 2 A[i, j] + A[j, j] = 2 A[i, j]
            for k in live:
                A[i, k] = A[i, k] + A[j, k]
            for k in live:
                A[k, i] = A[i, k]
            A[i, i] = A[i, i] + A[i, j]  # already has + A[j, i] from the row step
            p = i
        d = A[p, p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        live.remove(p)
        for i in live:
            if A[i, p] == 0:
                continue
            f = A[i, p] / d
            for j in live:
                A[i, j] -= f * A[p, j]
        for i in live:
            A[p, i] = A[i, p] = Fraction(0)
    return Signature(pos, neg, n - pos - neg)


def discriminant(L: Lattice):
    return det(L.gram)


def orthogonal_complement(L: Lattice, S: Sequence[Sequence]) -> list[Vec]:
    """Saturated primitive basis of {x in L : (x, s) = 0 for all s in S}."""
    for s in S:
        if len(s) != L.rank:
            raise DimensionMismatch(f"vectors must have length {L.rank}")
    if not S:
        return [identity(L.rank)[i] for i in range(L.rank)]
    A = tuple(tuple(bilinear(L.gram, s, e) for e in identity(L.rank)) for s in S)
    return integer_kernel(A)


# ---------------------------------------------------------------------------
# short vectors (Fincke-Pohst on the negated form)
# ---------------------------------------------------------------------------

def _floor_upper(a: Fraction, R: Fraction) -> int:
    """Largest integer y with y <= a + sqrt(R)  (R >= 0)."""
    y = int(a // 1) + isqrt(int(R // 1)) + 2

    def ok(t: int) -> bool:
        return t - a <= 0 or (t - a) ** 2 <= R

    while not ok(y):
        y -= 1
    while ok(y + 1):
        y += 1
    return y


def _gso(Q: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(Q)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for k in range(n):
        for j in range(k):
            mu[k][j] = (Q[k][j] - sum(mu[j][i] * mu[k][i] * B[i] for i in range(j))) / B[j]
        B[k] = Q[k][k] - sum(mu[k][j] ** 2 * B[j] for j in range(k))
        if B[k] <= 0:
            raise NotDefinite("form is not definite")
    return mu, B


def enumerate_bounded(Q: Mat, bound) -> list[Vec]:
    """All nonzero integer y with y^T Q y <= bound for positive definite Q,
    one of each pair +-y, via exact Fincke-Pohst enumeration."""
    n = len(Q)
    Qf = [[Fraction(c) for c in r] for r in Q]
    mu, B = _gso(Qf)
    bound = Fraction(bound)
    out: list[Vec] = []
    y = [0] * n

    def rec(i: int, remaining: Fraction) -> None:
        c = sum((mu[j][i] * y[j] for j in range(i + 1, n)), Fraction(0))
        R = remaining / B[i]
        hi = _floor_upper(-c, R)
        lo = -_floor_upper(c, R)
        for t in range(lo, hi + 1):
            used = B[i] * (t + c) ** 2
            if used > remaining:
                continue
            y[i] = t
            if i == 0:
                if any(y):
                    out.append(tuple(y))
            else:
                rec(i - 1, remaining - used)
        y[i] = 0

    if n:
        rec(n - 1, bound)
    seen = set()
    uniq = []
    for v in out:
        s = sign_normalize(v)
        if s not in seen:
            seen.add(s)
            uniq.append(s)
    return uniq


def short_vectors(L: "Lattice | Mat", n: int) -> list[Vec]:
    """All x with (x, x) = n in a negative definite lattice, one of each
    +-x (first nonzero coordinate positive), sorted lexicographically."""
    G = L.gram if isinstance(L, Lattice) else as_matrix(L)
    if n >= 0:
        raise ValueError("target norm must be negative")
    sig = signature(G)
    if not sig.is_negative_definite:
        raise NotDefinite(f"lattice signature {sig.as_tuple()} is not negative definite")
    Q = tuple(tuple(-c for c in r) for r in G)
    H = lll_reduce(Q)
    Qr = tuple(tuple(bilinear(Q, a, b) for b in H) for a in H)
    found = []
    for y in enumerate_bounded(Qr, -n):
        if bilinear(Qr, y, y) == -n:
            x = tuple(sum(yi * H[i][k] for i, yi in enumerate(y)) for k in range(len(G)))
            found.append(sign_normalize(x))
    return sorted(set(found))


# ---------------------------------------------------------------------------
# characteristic polynomial (Berkowitz, division free)
# ---------------------------------------------------------------------------

def _berkowitz_int(A: list[list[int]]) -> list[int]:
    """Coefficients of det(xI - A), highest degree first."""
    n = len(A)
    poly = [1]
    for i in range(n - 1, -1, -1):
        m = n - 1 - i
        R = A[i][i + 1:]
        col = [A[k][i] for k in range(i + 1, n)]
        t = [1, -A[i][i]]
        v = col
        for _ in range(m):
            t.append(-sum(r * x for r, x in zip(R, v)))
            v = [sum(A[i + 1 + a][i + 1 + b] * v[b] for b in range(m)) for a in range(m)]
        new = []
        for j in range(m + 2):
            new.append(sum(t[j - l] * poly[l] for l in range(min(j, m) + 1) if j - l < len(t)))
        poly = new
    return poly


def char_poly(M: Mat) -> Poly:
    """Monic characteristic polynomial det(xI - M), exact."""
    n, k = shape(M)
    if n != k:
        raise NotSquare("characteristic polynomial of a non-square matrix")
    d = common_denominator(c for r in M for c in r)
    N = [[int(Fraction(c) * d) for c in r] for r in M]
    hi_first = _berkowitz_int(N)
    # det(xI - N/d) = d^-n det(d x I - N): coefficient of x^j scales by d^(j - n)
    coeffs = []
    for j in range(n + 1):
        c = hi_first[n - j]
        coeffs.append(Fraction(c, d ** (n - j)))
    return Poly(coeffs)
