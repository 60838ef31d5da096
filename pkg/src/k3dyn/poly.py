"""Dense univariate polynomials over Q with exact coefficients.

Coefficients are stored constant term first.  Integral coefficients are kept
as ``int`` so that integer polynomials compare and serialize cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _strip(coeffs: Iterable[Number]) -> tuple:
    out = [_norm(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple = ()

    def __init__(self, coeffs: Iterable[Number] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    # construction helpers
    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, deg: int, c: Number = 1) -> "Poly":
        return cls([0] * deg + [c])

    # basic queries
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Number:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, t: Number) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return _norm(acc)

    def sign_at(self, t: Number) -> int:
        v = self(t)
        return (v > 0) - (v < 0)

    # arithmetic
    def __add__(self, other: "Poly | Number") -> "Poly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly | Number") -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Number) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other: "Poly | Number") -> "Poly":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out: list = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        dq = other.degree
        lc = Fraction(other.lc)
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            q = rem[k + dq] / lc
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        lc = Fraction(self.lc)
        return Poly(Fraction(c) / lc for c in self.coeffs)

    def primitive(self) -> "Poly":
        """Integer polynomial with coprime coefficients and positive leading term."""
        if self.is_zero():
            return self
        den = reduce(lambda a, b: a * b // gcd(a, b),
                     (Fraction(c).denominator for c in self.coeffs), 1)
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        g = reduce(gcd, ints)
        if ints[-1] < 0:
            g = -g
        return Poly(c // g for c in ints)

    def compose_neg(self) -> "Poly":
        """p(-x)."""
        return Poly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def reversed(self) -> "Poly":
        """x^deg p(1/x)."""
        return Poly(reversed(self.coeffs))

    def scale_var(self, s: Number) -> "Poly":
        """p(s x)."""
        return Poly(c * s ** i for i, c in enumerate(self.coeffs))

    def to_list(self) -> list:
        return list(self.coeffs)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(p: "Poly | Number") -> Poly:
    return p if isinstance(p, Poly) else Poly((p,))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return (p // g).monic()


def poly_product(polys: Sequence[Poly]) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly((1,)))


def from_int_list(values: Sequence[int]) -> Poly:
    return Poly(int(v) for v in values)
