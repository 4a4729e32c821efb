"""Exact rational scalars, combinatorial primitives and dense polynomials.

Every scalar is a :class:`fractions.Fraction`; nothing in this module touches
floating point.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import DuplicateAbscissa, ZeroPolynomial

RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def binomial(top: RationalLike, k: int) -> Fraction:
    """Generalized binomial top*(top-1)*...*(top-k+1)/k!; zero for k < 0."""
    if k < 0:
        return Fraction(0)
    return falling_factorial(top, k) / factorial(k)


def falling_factorial(x: RationalLike, j: int) -> Fraction:
    if j < 0:
        raise ValueError("falling factorial needs j >= 0")
    x = as_rational(x)
    out = Fraction(1)
    for m in range(j):
        term = x - m
        if not term:
            return Fraction(0)
        out *= term
    return out


@dataclass(frozen=True)
class DensePoly:
    """Univariate polynomial over the rationals; ``coeffs[i]`` multiplies x**i.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial has no coefficients and degree -1.
    """

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, value: RationalLike) -> "DensePoly":
        return cls((as_rational(value),))

    @classmethod
    def linear(cls, c0: RationalLike, c1: RationalLike) -> "DensePoly":
        return cls((as_rational(c0), as_rational(c1)))

    @classmethod
    def monomial(cls, degree: int, coeff: RationalLike = 1) -> "DensePoly":
        return cls((Fraction(0),) * degree + (as_rational(coeff),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, x)

    def __neg__(self) -> "DensePoly":
        return DensePoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "DensePoly":
        other = _coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(tuple(self.coeff(i) + other.coeff(i) for i in range(size)))

    __radd__ = __add__

    def __sub__(self, other) -> "DensePoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "DensePoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "DensePoly":
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return DensePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return DensePoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "DensePoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = DensePoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def derivative(self) -> "DensePoly":
        return DensePoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def divide_linear(self, c: RationalLike) -> Tuple["DensePoly", Fraction]:
        """Synthetic division by (x - c): returns (quotient, remainder)."""
        c = as_rational(c)
        if self.is_zero:
            return DensePoly(), Fraction(0)
        quotient = [Fraction(0)] * self.degree
        carry = Fraction(0)
        for i in range(self.degree, -1, -1):
            carry = carry * c + self.coeffs[i]
            if i:
                quotient[i - 1] = carry
        return DensePoly(tuple(quotient)), carry

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            body = "" if (mag == 1 and i) else str(mag)
            if i == 1:
                body += "x"
            elif i > 1:
                body += f"x^{i}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _coerce(value) -> DensePoly:
    if isinstance(value, DensePoly):
        return value
    return DensePoly.constant(value)


def poly_eval(p: DensePoly, x: RationalLike) -> Fraction:
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def multiplicity_at(p: DensePoly, c: RationalLike) -> int:
    """Largest m such that (x - c)**m divides p."""
    if p.is_zero:
        raise ZeroPolynomial("multiplicity of a zero of the zero polynomial is undefined")
    count = 0
    quotient, remainder = p.divide_linear(c)
    while not remainder:
        count += 1
        p = quotient
        quotient, remainder = p.divide_linear(c)
    return count


def taylor_shift(p: DensePoly, c: RationalLike) -> List[Fraction]:
    """Coefficients b_j with p(x) = sum b_j (x - c)**j, so p^(j)(c) = j! b_j."""
    out = []
    while not p.is_zero:
        p, remainder = p.divide_linear(c)
        out.append(remainder)
    return out


def newton_interpolate(points: Iterable[Tuple[int, RationalLike]]) -> DensePoly:
    """Least-degree polynomial through ``points`` by exact divided differences."""
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    seen = set()
    for x, _ in pts:
        if x in seen:
            raise DuplicateAbscissa(f"abscissa {x} appears more than once")
        seen.add(x)
    xs = [x for x, _ in pts]
    table = [y for _, y in pts]
    diffs = []
    for level in range(len(pts)):
        diffs.append(table[0])
        table = [
            (table[i + 1] - table[i]) / (xs[i + level + 1] - xs[i])
            for i in range(len(table) - 1)
        ]
    result = DensePoly()
    basis = DensePoly.constant(1)
    for i, d in enumerate(diffs):
        if d:
            result = result + basis * d
        basis = basis * DensePoly.linear(-xs[i], 1)
    return result


def coefficients_of_product(factors: Sequence[DensePoly]) -> DensePoly:
    out = DensePoly.constant(1)
    for f in factors:
        out = out * f
    return out
