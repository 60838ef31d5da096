"""Salem polynomials: reciprocity, trace polynomials, Sturm counting,
cyclotomic stripping, real-root isolation and irreducibility evidence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import NotReciprocal, NotSalem
from .poly import Poly, poly_gcd, poly_product, squarefree_part

DEFAULT_WIDTH = Fraction(1, 10 ** 12)


# ---------------------------------------------------------------------------
# reciprocity and the trace polynomial
# ---------------------------------------------------------------------------

def reciprocity(p: Poly) -> str:
    """``"reciprocal"``, ``"anti-reciprocal"`` or ``"none"``."""
    c = p.coeffs
    if not c:
        return "none"
    if c == c[::-1]:
        return "reciprocal"
    if c == tuple(-x for x in c[::-1]):
        return "anti-reciprocal"
    return "none"


def is_reciprocal(p: Poly) -> bool:
    return reciprocity(p) == "reciprocal"


def is_pm_reciprocal(p: Poly) -> bool:
    return reciprocity(p) != "none"


def _expand_trace(q: Poly, d: int) -> Poly:
    """x^d q(x + 1/x)."""
    x2p1 = Poly((1, 0, 1))
    return sum((Poly.monomial(d - j, c) * x2p1 ** j for j, c in enumerate(q.coeffs)), Poly())


def trace_poly(p: Poly) -> Poly:
    """The degree-d polynomial q with x^d q(x + 1/x) = p(x), for p reciprocal of degree 2d."""
    if not is_reciprocal(p) or p.degree % 2:
        raise NotReciprocal(f"{p} is not reciprocal of even degree")
    d = p.degree // 2
    # x^k + x^-k = V_k(y) with V_0 = 2, V_1 = y, V_{k+1} = y V_k - V_{k-1}
    y = Poly.x()
    V = [Poly((2,)), y]
    for _ in range(2, d + 1):
        V.append(y * V[-1] - V[-2])
    q = Poly((p[d],))
    for k in range(1, d + 1):
        q = q + V[k] * p[d + k]
    if _expand_trace(q, d) != p:
        raise ArithmeticError("trace polynomial round trip failed")
    return q


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------

def _positive_normalize(p: Poly) -> Poly:
    """Scale by a positive rational to coprime integer coefficients."""
    if p.is_zero():
        return p
    q = p.primitive()
    return q if (q.lc > 0) == (p.lc > 0) else -q


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [_positive_normalize(p), _positive_normalize(p.derivative())]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(_positive_normalize(-r))
    return seq


def _sign_changes(seq: Sequence[Poly], t) -> int:
    signs = [s for s in (q.sign_at(t) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, a, b) -> int:
    """Number of distinct real roots of p in (a, b]."""
    a, b = Fraction(a), Fraction(b)
    if b <= a or p.degree < 1:
        return 0
    seq = sturm_sequence(squarefree_part(p))
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every complex root has absolute value < the result."""
    m = p.monic()
    return 1 + max((abs(Fraction(c)) for c in m.coeffs[:-1]), default=Fraction(0))


def isolate_largest_root(p: Poly, above, width: Fraction = DEFAULT_WIDTH) -> Optional[tuple[Fraction, Fraction]]:
    """Enclosure [lo, hi] of the largest real root of p greater than ``above``,
    with hi - lo <= width and lo > above; None when no such root exists."""
    above = Fraction(above)
    sf = squarefree_part(p)
    seq = sturm_sequence(sf)
    lo, hi = above, max(root_bound(sf), above + 1)
    if _sign_changes(seq, lo) - _sign_changes(seq, hi) == 0:
        return None
    hi_changes = _sign_changes(seq, hi)
    while hi - lo > width or lo == above:
        mid = (lo + hi) / 2
        if _sign_changes(seq, mid) - hi_changes >= 1:
            lo = mid
        else:
            hi = mid
            hi_changes = _sign_changes(seq, hi)
    return lo, hi


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def euler_phi(n: int) -> int:
    result, m, q = n, n, 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result -= result // q
        q += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> Poly:
    p = Poly.monomial(k) - 1
    for d in range(1, k):
        if k % d == 0:
            p = p.exact_div(cyclotomic(d))
    return p


def _cyclotomic_indices(deg: int) -> list[int]:
    # phi(k) >= sqrt(k / 2), so phi(k) <= deg forces k <= 2 deg^2
    return [k for k in range(1, 2 * deg * deg + 3) if euler_phi(k) <= deg]


@dataclass(frozen=True)
class CycloStrip:
    cyclotomic_factors: tuple  # Poly, with repetition, by increasing index
    indices: tuple  # cyclotomic index k of each factor
    remainder: Poly


def strip_cyclotomic(p: Poly) -> CycloStrip:
    if not p.is_monic():
        raise ValueError("strip_cyclotomic needs a monic polynomial")
    rem = p
    factors, idx = [], []
    for k in _cyclotomic_indices(max(p.degree, 1)):
        phi = cyclotomic(k)
        if phi.degree > rem.degree:
            continue
        while rem.degree >= phi.degree:
            q, r = divmod(rem, phi)
            if not r.is_zero():
                break
            rem = q
            factors.append(phi)
            idx.append(k)
    assert poly_product(factors) * rem == p
    return CycloStrip(tuple(factors), tuple(idx), rem)


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------

def _pmod(a: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return _pmod(q, p), _pmod(a[:len(b) - 1], p)


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, p)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result, base = [1], _pdivmod(base, f, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), f, p)[1]
        base = _pdivmod(_pmul(base, base, p), f, p)[1]
        e >>= 1
    return result


def degree_pattern_mod(f: Poly, p: int) -> Optional[list[int]]:
    """Degrees of the irreducible factors of f mod p via distinct-degree
    factorization; None when f is not squarefree mod p."""
    g = _pmod([int(c) for c in f.coeffs], p)
    if len(g) != len(f.coeffs):
        return None
    dg = _pmod([i * c for i, c in enumerate(g)][1:], p)
    if len(_pgcd(g, dg, p)) > 1:
        return None
    degrees: list[int] = []
    h = [0, 1]
    i = 0
    while len(g) > 1:
        i += 1
        if 2 * i > len(g) - 1:
            degrees.append(len(g) - 1)
            break
        h = _ppowmod(h, p, g, p)
        diff = _pmod([(h[j] if j < len(h) else 0) - (1 if j == 1 else 0) for j in range(max(len(h), 2))], p)
        d = _pgcd(g, diff, p)
        if len(d) > 1:
            degrees.extend([i] * ((len(d) - 1) // i))
            g = _pdivmod(g, d, p)[0]
            h = _pdivmod(h, g, p)[1] if len(g) > 1 else h
    return sorted(degrees)


def _subset_sums(degrees: Sequence[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _primes(limit: int) -> list[int]:
    sieve = [True] * (limit + 1)
    out = []
    for n in range(2, limit + 1):
        if sieve[n]:
            out.append(n)
            for m in range(n * n, limit + 1, n):
                sieve[m] = False
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 2) if d * d <= n and n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True)
class Irreducibility:
    verdict: str  # "proven" | "evidence" | "reducible"
    factors: tuple = ()  # known factors when reducible
    primes: tuple = ()  # primes whose degree patterns were used
    possible_degrees: tuple = ()  # proper factor degrees not excluded
    reason: str = ""


def irreducibility_evidence(f: Poly, max_prime: int = 200, min_primes: int = 3) -> Irreducibility:
    if f.degree < 1 or not f.is_integral() or not f.is_monic():
        raise ValueError("irreducibility_evidence needs a monic nonconstant integer polynomial")
    n = f.degree
    if n == 1:
        return Irreducibility("proven", reason="linear")
    c0 = f[0]
    if c0 == 0:
        return Irreducibility("reducible", (Poly.x(), f.exact_div(Poly.x())), reason="root 0")
    if abs(c0) <= 10 ** 12:
        for r in _divisors(c0):
            for s in (r, -r):
                if f(s) == 0:
                    lin = Poly((-s, 1))
                    return Irreducibility("reducible", (lin, f.exact_div(lin)), reason=f"rational root {s}")
    g = poly_gcd(f, f.derivative())
    if g.degree > 0:
        return Irreducibility("reducible", (g, f.exact_div(g)), reason="repeated factor")
    strip = strip_cyclotomic(f)
    if strip.cyclotomic_factors and strip.remainder.degree > 0:
        phi = strip.cyclotomic_factors[0]
        return Irreducibility("reducible", (phi, f.exact_div(phi)),
                              reason=f"cyclotomic factor Phi_{strip.indices[0]}")
    possible = set(range(1, n))
    used: list[int] = []
    for p in _primes(max_prime):
        pattern = degree_pattern_mod(f, p)
        if pattern is None:
            continue
        used.append(p)
        possible &= _subset_sums(pattern)
        if not possible and len(used) >= min_primes:
            return Irreducibility("proven", primes=tuple(used),
                                  reason="mod-p degree patterns admit no proper factor degree")
    reason = ("degree patterns leave proper factor degrees open"
              if possible else "fewer usable primes than required")
    return Irreducibility("evidence", primes=tuple(used), possible_degrees=tuple(sorted(possible)),
                          reason=reason)


# ---------------------------------------------------------------------------
# Salem certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SalemCertificate:
    poly: Poly
    degree: int
    lambda_interval: tuple[Fraction, Fraction]
    trace_poly: Poly
    interior_root_count: int
    irreducibility: Irreducibility


def salem_certify(p: Poly, width: Fraction = DEFAULT_WIDTH) -> SalemCertificate:
    """Certify that p is a Salem polynomial; raises NotSalem naming the
    first failed criterion."""
    if p.degree < 1 or not p.is_integral():
        raise NotSalem("integer", "polynomial must have integer coefficients")
    if not p.is_monic():
        raise NotSalem("monic", f"leading coefficient {p.lc}")
    if p.degree % 2:
        raise NotSalem("even-degree", f"degree {p.degree} is odd")
    if p.degree < 4:
        raise NotSalem("degree>=4", f"degree {p.degree} leaves no conjugates on the unit circle")
    if not is_reciprocal(p):
        raise NotSalem("reciprocal", reciprocity(p))
    q = trace_poly(p)
    d = q.degree
    if poly_gcd(q, q.derivative()).degree > 0:
        raise NotSalem("squarefree", "trace polynomial has a repeated root")
    if q(2) == 0 or q(-2) == 0:
        raise NotSalem("no-root-at-2", "trace polynomial vanishes at +-2")
    big = sturm_count(q, 2, root_bound(q))
    if big != 1:
        raise NotSalem("one-root>2", f"{big} trace roots exceed 2")
    inside = sturm_count(q, -2, 2)
    if inside != d - 1:
        raise NotSalem("interior-roots", f"{inside} trace roots in (-2,2), expected {d - 1}")
    enc = isolate_largest_root(p, 1, width)
    assert enc is not None
    irr = irreducibility_evidence(p)
    if irr.verdict == "reducible":
        raise NotSalem("irreducible", irr.reason)
    return SalemCertificate(p, p.degree, enc, q, inside, irr)


def companion(p: Poly) -> tuple:
    """Companion matrix of a monic polynomial (last column carries -coeffs)."""
    if not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial")
    n = p.degree
    rows = []
    for i in range(n):
        row = [0] * n
        if i > 0:
            row[i - 1] = 1
        row[n - 1] = -p[i]
        rows.append(tuple(row))
    return tuple(rows)


PHI14 = Poly((1, 0, 0, -1, -1, 0, 0, 1, 0, 0, -1, -1, 0, 0, 1))
LEHMER = Poly((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))
