"""Delta(n, c) bases and coefficient-side multiplicity detection.

A Delta(n, c) basis F_0..F_n has derivatives F_i^(j)(c) = R_j(i) for
polynomials R_j of exact degree j. For p = sum a_i F_i this gives
p^(j)(c) = sum_i a_i R_j(i), so the multiplicity of p at c is read off the
coefficients alone: it is the first j where the falling-factorial moment
sum_i a_i i^(j) is nonzero.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .errors import (
    AllZero,
    IndexOutOfRange,
    InfiniteSupport,
    InvalidParameters,
    NotPolynomialBasis,
    SupportViolation,
)
from .exactcore import (
    DensePoly,
    RationalLike,
    as_rational,
    binomial,
    falling_factorial,
    newton_interpolate,
    poly_eval,
)
from .families import FamilySpec, SymbolicUnit, norm_constant, unit, unnormalized_value, weight
from .macwilliams import krawtchouk_gf


class BasisKind(str, Enum):
    MONOMIAL = "monomial"
    KRAWTCHOUK_PRODUCT = "krawtchouk"
    LAGUERRE_RATIO = "laguerre"
    CUSTOM = "custom"


@dataclass(frozen=True)
class DeltaBasisSpec:
    kind: BasisKind
    n: int
    c: Fraction
    alpha: Fraction = Fraction(0)
    custom_r: Tuple[DensePoly, ...] = ()
    custom_polynomial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.n < 0:
            raise InvalidParameters("basis size n must be >= 0")
        kind = self.kind
        if kind is BasisKind.MONOMIAL and self.c != 1:
            raise InvalidParameters("the monomial basis is a Delta(n, 1) basis")
        if kind in (BasisKind.KRAWTCHOUK_PRODUCT, BasisKind.LAGUERRE_RATIO) and self.c != 0:
            raise InvalidParameters(f"the {kind.value} basis is a Delta(n, 0) basis")
        if kind is BasisKind.LAGUERRE_RATIO:
            a = self.alpha
            if a.denominator == 1 and -self.n <= a <= -1:
                raise InvalidParameters("laguerre ratio needs alpha not in {-1, ..., -n}")
        if kind is BasisKind.CUSTOM:
            if len(self.custom_r) != self.n + 1:
                raise InvalidParameters("a custom basis needs R_0..R_n")
            # degree grading makes R_0..R_n a basis of P^n
            for j, r in enumerate(self.custom_r):
                if r.degree != j:
                    raise InvalidParameters(f"custom R_{j} has degree {r.degree}, expected {j}")

    @classmethod
    def monomial(cls, n: int) -> "DeltaBasisSpec":
        return cls(BasisKind.MONOMIAL, n, Fraction(1))

    @classmethod
    def krawtchouk_product(cls, n: int) -> "DeltaBasisSpec":
        return cls(BasisKind.KRAWTCHOUK_PRODUCT, n, Fraction(0))

    @classmethod
    def laguerre_ratio(cls, n: int, alpha: RationalLike = 0) -> "DeltaBasisSpec":
        return cls(BasisKind.LAGUERRE_RATIO, n, Fraction(0), alpha=as_rational(alpha))

    @classmethod
    def custom(cls, n: int, c: RationalLike, r_polys: Sequence[DensePoly],
               polynomial: bool = False) -> "DeltaBasisSpec":
        return cls(BasisKind.CUSTOM, n, as_rational(c), custom_r=tuple(r_polys),
                   custom_polynomial=polynomial)


@dataclass(frozen=True)
class ExpansionVector:
    basis: DeltaBasisSpec
    a: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_rational(x) for x in self.a)
        if len(values) != self.basis.n + 1:
            raise InvalidParameters(
                f"expected {self.basis.n + 1} coefficients, got {len(values)}")
        object.__setattr__(self, "a", values)

    @classmethod
    def monomial(cls, coeffs: Sequence[RationalLike]) -> "ExpansionVector":
        return cls(DeltaBasisSpec.monomial(len(coeffs) - 1), tuple(coeffs))

    @classmethod
    def in_basis(cls, kind: BasisKind, coeffs: Sequence[RationalLike],
                 alpha: RationalLike = 0) -> "ExpansionVector":
        n = len(coeffs) - 1
        kind = BasisKind(kind)
        if kind is BasisKind.MONOMIAL:
            basis = DeltaBasisSpec.monomial(n)
        elif kind is BasisKind.KRAWTCHOUK_PRODUCT:
            basis = DeltaBasisSpec.krawtchouk_product(n)
        elif kind is BasisKind.LAGUERRE_RATIO:
            basis = DeltaBasisSpec.laguerre_ratio(n, alpha)
        else:
            raise InvalidParameters("custom bases need explicit R_j")
        return cls(basis, tuple(coeffs))

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, x in enumerate(self.a) if x)

    def is_zero(self) -> bool:
        return not any(self.a)


def r_value(basis: DeltaBasisSpec, j: int, i: int) -> Fraction:
    if not 0 <= j <= basis.n:
        raise IndexOutOfRange(f"R_{j} is not defined for a basis of size {basis.n}")
    kind = basis.kind
    if kind is BasisKind.MONOMIAL:
        return falling_factorial(i, j)
    if kind is BasisKind.KRAWTCHOUK_PRODUCT:
        return factorial(j) * krawtchouk_gf(j, basis.n, i)
    if kind is BasisKind.LAGUERRE_RATIO:
        value = binomial(i, j) / binomial(j + basis.alpha, j)
        return -value if j % 2 else value
    return poly_eval(basis.custom_r[j], i)


def derivative_vector(v: ExpansionVector) -> List[Fraction]:
    """Entry j is p^(j)(c) = sum_i a_i R_j(i)."""
    return [
        sum((x * r_value(v.basis, j, i) for i, x in enumerate(v.a) if x), Fraction(0))
        for j in range(v.n + 1)
    ]


def moment(a: Sequence[Fraction], j: int) -> Fraction:
    return sum((x * falling_factorial(i, j) for i, x in enumerate(a) if x), Fraction(0))


def multiplicity_from_coeffs(v: ExpansionVector) -> int:
    if v.is_zero():
        raise AllZero("all coefficients vanish")
    for j in range(v.n + 1):
        if moment(v.a, j):
            return j
    # Moments 0..n determine a, so a nonzero vector never gets here.
    raise AllZero("all falling-factorial moments vanish")


@dataclass(frozen=True)
class LambdaCoefficient:
    """lambda_k in exact form: lambda_k**2 = square * unit, with the given sign."""

    k: int
    square: Fraction
    sign: int
    unit: SymbolicUnit


def _check_dominates(v: ExpansionVector, fam: FamilySpec, skip: Optional[int] = None) -> None:
    outside = [i for i in sorted(v.support) if i != skip and not fam.in_support(i)]
    if outside:
        raise SupportViolation(
            f"coefficient index {outside[0]} is nonzero but outside the family support")


def lambda_expansion(v: ExpansionVector, fam: FamilySpec,
                     upto: Optional[int] = None) -> List[LambdaCoefficient]:
    """Coefficients of a_j / w(j) = sum_k lambda_k g_k(j) over the support.

    lambda_k = sum_j a_j g_k(j), reported through its square and sign. For
    infinite families the list stops at ``upto`` (default n).
    """
    _check_dominates(v, fam)
    top = fam.n if fam.is_finite else (v.n if upto is None else upto)
    u = unit(fam)
    out = []
    for k in range(top + 1):
        s = sum((x * unnormalized_value(fam, k, i) for i, x in enumerate(v.a) if x), Fraction(0))
        sign = (s > 0) - (s < 0)
        out.append(LambdaCoefficient(k, norm_constant(fam, k) * s * s, sign, u))
    return out


def interpolant(v: ExpansionVector, fam: FamilySpec) -> DensePoly:
    """A_w: the least-degree polynomial with A_w(i) = a_i / w(i) on the support."""
    if not fam.is_finite:
        raise InfiniteSupport("A_w is not a polynomial on an infinite support")
    _check_dominates(v, fam)
    points = []
    for i in range(fam.first, fam.last + 1):
        a_i = v.a[i] if 0 <= i <= v.n else Fraction(0)
        points.append((i, a_i / weight(fam, i)))
    return newton_interpolate(points)


def _laguerre_ratio_poly(i: int, alpha: Fraction) -> DensePoly:
    # L_i^(alpha)(x) = sum_m (-1)^m C(i+alpha, i-m) x^m / m!, divided by L_i^(alpha)(0)
    at_zero = binomial(i + alpha, i)
    return DensePoly(tuple(
        (-1) ** m * binomial(i + alpha, i - m) / (factorial(m) * at_zero)
        for m in range(i + 1)
    ))


def expand_explicit(v: ExpansionVector) -> DensePoly:
    basis = v.basis
    kind = basis.kind
    if kind is BasisKind.MONOMIAL:
        return DensePoly(v.a)
    out = DensePoly()
    if kind is BasisKind.KRAWTCHOUK_PRODUCT:
        one_minus = DensePoly.linear(1, -1)
        one_plus = DensePoly.linear(1, 1)
        for i, x in enumerate(v.a):
            if x:
                out = out + one_minus ** i * one_plus ** (basis.n - i) * x
        return out
    if kind is BasisKind.LAGUERRE_RATIO:
        for i, x in enumerate(v.a):
            if x:
                out = out + _laguerre_ratio_poly(i, basis.alpha) * x
        return out
    if not basis.custom_polynomial:
        raise NotPolynomialBasis("custom basis is not declared polynomial of degree <= n")
    # Taylor expansion about c from the derivative values
    shift = DensePoly.linear(-basis.c, 1)
    for j, d in enumerate(derivative_vector(v)):
        if d:
            out = out + shift ** j * (d / factorial(j))
    return out
