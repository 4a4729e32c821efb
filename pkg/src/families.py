"""Classical discrete orthogonal families on integer supports.

Orthonormal polynomials carry a square-root normalizer, so ``g_k(x)`` is never
built. Everything exposed is either a square ``g_k(x)**2 = c_k * qhat_k(x)**2``
or a product ``g_k(s) g_k(x) = c_k * qhat_k(s) * qhat_k(x)``, where ``qhat_k``
is the bracketed sum of the explicit formula and ``c_k`` the normalizing
constant. Both are rational, up to a family-wide :class:`SymbolicUnit`
(``exp(-lambda)`` for Charlier, ``(1-q)**beta`` for Meixner with non-integer
beta) which cancels in every ratio and is only evaluated by interval
arithmetic at comparison time.

The sign convention is ``g_k = sqrt(c_k) * qhat_k`` with the positive root.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Union

from .errors import InfiniteSupport, InvalidParameters, NoClosedForm, OutOfSupport
from .exactcore import RationalLike, as_rational, binomial

log = logging.getLogger(__name__)

# entries per memo table (weights, values, normalizers)
CACHE_SIZE = 65536


class FamilyKind(str, Enum):
    HAHN = "hahn"
    CHEBYSHEV = "chebyshev"
    KRAWTCHOUK = "krawtchouk"
    MEIXNER = "meixner"
    CHARLIER = "charlier"


@dataclass(frozen=True)
class SymbolicUnit:
    """A positive transcendental factor: exp(arg) or base**exponent, or 1."""

    kind: str = "one"  # "one" | "exp" | "pow"
    arg: Fraction = Fraction(0)
    base: Fraction = Fraction(1)
    exponent: Fraction = Fraction(0)

    @property
    def is_one(self) -> bool:
        return self.kind == "one"

    def enclose(self, iv):
        """Interval enclosure in the mpmath interval context ``iv``."""
        if self.kind == "one":
            return iv.mpf(1)
        if self.kind == "exp":
            return iv.exp(iv.mpf(self.arg.numerator) / self.arg.denominator)
        base = iv.mpf(self.base.numerator) / self.base.denominator
        return iv.exp(iv.log(base) * (iv.mpf(self.exponent.numerator) / self.exponent.denominator))

    def __str__(self) -> str:
        if self.kind == "exp":
            return f"exp({self.arg})"
        if self.kind == "pow":
            return f"({self.base})^({self.exponent})"
        return "1"


UNIT_ONE = SymbolicUnit()


@dataclass(frozen=True)
class ClosedForm:
    """The value constant + coefficient * unit."""

    constant: Fraction
    coefficient: Fraction
    unit: SymbolicUnit

    def enclose(self, iv):
        c = iv.mpf(self.constant.numerator) / self.constant.denominator
        k = iv.mpf(self.coefficient.numerator) / self.coefficient.denominator
        return c + k * self.unit.enclose(iv)

    def __str__(self) -> str:
        return f"{self.constant} + ({self.coefficient})*{self.unit}"


TailValue = Union[Fraction, ClosedForm]


@dataclass(frozen=True)
class FamilySpec:
    """One discrete orthogonal family; ``n is None`` means support Z_{shift,inf}.

    ``shift`` moves the support: the family's polynomials are evaluated at
    x - shift, so the chebyshev(n - 1) family shifted by one lives on Z_{1,n}.
    """

    kind: FamilyKind
    n: Optional[int] = None
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    q: Fraction = Fraction(1)
    lam: Fraction = Fraction(1)
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        for name in ("alpha", "beta", "q", "lam"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        _validate(self)

    @classmethod
    def hahn(cls, n: int, alpha: RationalLike, beta: RationalLike) -> "FamilySpec":
        return cls(FamilyKind.HAHN, n=n, alpha=as_rational(alpha), beta=as_rational(beta))

    @classmethod
    def chebyshev(cls, n: int) -> "FamilySpec":
        return cls(FamilyKind.CHEBYSHEV, n=n)

    @classmethod
    def krawtchouk(cls, n: int, q: RationalLike) -> "FamilySpec":
        return cls(FamilyKind.KRAWTCHOUK, n=n, q=as_rational(q))

    @classmethod
    def meixner(cls, beta: RationalLike, q: RationalLike) -> "FamilySpec":
        return cls(FamilyKind.MEIXNER, beta=as_rational(beta), q=as_rational(q))

    @classmethod
    def charlier(cls, lam: RationalLike) -> "FamilySpec":
        return cls(FamilyKind.CHARLIER, lam=as_rational(lam))

    def shifted(self, shift: int) -> "FamilySpec":
        return replace(self, shift=self.shift + shift)

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    @property
    def first(self) -> int:
        return self.shift

    @property
    def last(self) -> Optional[int]:
        return None if self.n is None else self.shift + self.n

    def in_support(self, x: int) -> bool:
        if x < self.shift:
            return False
        return self.n is None or x <= self.shift + self.n

    def describe(self) -> dict:
        out = {"family": self.kind.value}
        if self.n is not None:
            out["n"] = self.n
        if self.kind is FamilyKind.HAHN:
            out["alpha"] = str(self.alpha)
            out["beta"] = str(self.beta)
        elif self.kind is FamilyKind.KRAWTCHOUK:
            out["q"] = str(self.q)
        elif self.kind is FamilyKind.MEIXNER:
            out["beta"] = str(self.beta)
            out["q"] = str(self.q)
        elif self.kind is FamilyKind.CHARLIER:
            out["lambda"] = str(self.lam)
        if self.shift:
            out["shift"] = self.shift
        return out


def _validate(fam: FamilySpec) -> None:
    kind = fam.kind
    if kind in (FamilyKind.HAHN, FamilyKind.CHEBYSHEV, FamilyKind.KRAWTCHOUK):
        if fam.n is None or fam.n < 0:
            raise InvalidParameters(f"{kind.value} needs a finite n >= 0")
    elif fam.n is not None:
        raise InvalidParameters(f"{kind.value} lives on Z_(0,inf); n must be omitted")
    if kind is FamilyKind.CHEBYSHEV and (fam.alpha or fam.beta):
        raise InvalidParameters("chebyshev is hahn with alpha = beta = 0")
    if kind is FamilyKind.HAHN:
        a, b, n = fam.alpha, fam.beta, fam.n
        if not ((a > -1 and b > -1) or (a < -n and b < -n)):
            raise InvalidParameters("hahn needs alpha, beta > -1 or alpha, beta < -n")
        for t in range(n + 1):
            if _weight(fam, t) <= 0:
                raise InvalidParameters(f"hahn weight is not positive at x={t}")
        if _hahn_d_parts(fam, 0)[1] == 0:
            raise InvalidParameters("hahn normalizer is singular for these parameters")
    if kind is FamilyKind.KRAWTCHOUK and fam.q <= 0:
        raise InvalidParameters("krawtchouk needs q > 0")
    if kind is FamilyKind.MEIXNER:
        if not 0 < fam.q < 1:
            raise InvalidParameters("meixner needs 0 < q < 1")
        if fam.beta <= 0:
            raise InvalidParameters("meixner needs beta > 0")
    if kind is FamilyKind.CHARLIER and fam.lam <= 0:
        raise InvalidParameters("charlier needs lambda > 0")


def _check_degree(fam: FamilySpec, k: int) -> None:
    if k < 0 or (fam.n is not None and k > fam.n):
        raise InvalidParameters(f"degree {k} outside the range of {fam.kind.value}")


def _weight(fam: FamilySpec, t: int) -> Fraction:
    kind = fam.kind
    if kind in (FamilyKind.HAHN, FamilyKind.CHEBYSHEV):
        return binomial(t + fam.alpha, t) * binomial(fam.n - t + fam.beta, fam.n - t)
    if kind is FamilyKind.KRAWTCHOUK:
        return binomial(fam.n, t) * fam.q ** t
    if kind is FamilyKind.MEIXNER:
        return binomial(t + fam.beta - 1, t) * fam.q ** t
    return fam.lam ** t / factorial(t)


def weight(fam: FamilySpec, x: int) -> Fraction:
    if not fam.in_support(x):
        raise OutOfSupport(f"x={x} is outside the support of {fam.kind.value}")
    return _weight_cached(fam, x - fam.shift)


@lru_cache(maxsize=CACHE_SIZE)
def _weight_cached(fam: FamilySpec, t: int) -> Fraction:
    return _weight(fam, t)


def unnormalized_value(fam: FamilySpec, k: int, x: int) -> Fraction:
    """qhat_k(x): the explicit sum without its square-root normalizer.

    Defined for every integer x, the polynomial being evaluated off the
    support as well (needed at x = shift - 1).
    """
    _check_degree(fam, k)
    return _qhat(fam, k, x - fam.shift)


@lru_cache(maxsize=CACHE_SIZE)
def _qhat(fam: FamilySpec, k: int, t: int) -> Fraction:
    kind = fam.kind
    total = Fraction(0)
    if kind in (FamilyKind.HAHN, FamilyKind.CHEBYSHEV):
        a, b, n = fam.alpha, fam.beta, fam.n
        for j in range(k + 1):
            num = binomial(k, j) * binomial(k + a + b + j, j) * binomial(t, j)
            if not num:
                continue
            term = num / (binomial(j + a, j) * binomial(n, j))
            total += -term if j % 2 else term
    elif kind is FamilyKind.KRAWTCHOUK:
        n, q = fam.n, fam.q
        for j in range(k + 1):
            total += (-q) ** -j * binomial(t, j) * binomial(n - t, k - j)
    elif kind is FamilyKind.MEIXNER:
        b, q = fam.beta, fam.q
        for j in range(k + 1):
            total += binomial(t, j) * binomial(-t - b, k - j) * q ** -j
    else:
        lam = fam.lam
        for i in range(k + 1):
            total += (-lam) ** -i * binomial(k, i) * binomial(t, i) * factorial(i)
    return total


def _hahn_d_parts(fam: FamilySpec, k: int):
    a, b, n = fam.alpha, fam.beta, fam.n
    num = (2 * k + a + b + 1) * binomial(k + a, k) * binomial(n, k)
    den = (n + 1) * binomial(k + b, k) * binomial(n + k + a + b + 1, n + 1)
    return num, den


def unit(fam: FamilySpec) -> SymbolicUnit:
    """The transcendental factor every norm constant of ``fam`` carries."""
    if fam.kind is FamilyKind.CHARLIER:
        return SymbolicUnit("exp", arg=-fam.lam)
    if fam.kind is FamilyKind.MEIXNER and fam.beta.denominator != 1:
        return SymbolicUnit("pow", base=1 - fam.q, exponent=fam.beta)
    return UNIT_ONE


def norm_constant(fam: FamilySpec, k: int) -> Fraction:
    """c_k with g_k(x)**2 = c_k * qhat_k(x)**2, in units of ``unit(fam)``."""
    _check_degree(fam, k)
    return _norm_constant(fam, k)


@lru_cache(maxsize=CACHE_SIZE)
def _norm_constant(fam: FamilySpec, k: int) -> Fraction:
    kind = fam.kind
    if kind in (FamilyKind.HAHN, FamilyKind.CHEBYSHEV):
        num, den = _hahn_d_parts(fam, k)
        if not den:
            raise InvalidParameters(f"hahn normalizer d_{k} is singular")
        return num / den
    if kind is FamilyKind.KRAWTCHOUK:
        return fam.q ** k * (1 + fam.q) ** -fam.n / binomial(fam.n, k)
    if kind is FamilyKind.MEIXNER:
        c = fam.q ** k / binomial(k + fam.beta - 1, k)
        if fam.beta.denominator == 1:
            c *= (1 - fam.q) ** fam.beta.numerator
        return c
    return fam.lam ** k / factorial(k)


def g_squared(fam: FamilySpec, k: int, x: int) -> Fraction:
    return norm_constant(fam, k) * unnormalized_value(fam, k, x) ** 2


def kernel(fam: FamilySpec, s: int, x: int, lo: int, hi: int) -> Fraction:
    """sum_{j=lo}^{hi} g_j(s) g_j(x), in units of ``unit(fam)``."""
    if lo < 0 or hi < lo or (fam.n is not None and hi > fam.n):
        raise InvalidParameters(f"degree range [{lo}, {hi}] invalid for {fam.kind.value}")
    return sum(
        (_norm_constant(fam, j) * _qhat(fam, j, s - fam.shift) * _qhat(fam, j, x - fam.shift)
         for j in range(lo, hi + 1)),
        Fraction(0),
    )


def christoffel(fam: FamilySpec, s: int, r: int) -> Fraction:
    """Kernel diagonal sum_{j<=r} g_j(s)**2."""
    return kernel(fam, s, s, 0, r)


def tail_sum(fam: FamilySpec, s: int, mu: int) -> TailValue:
    """sum_{j>=mu} g_j(s)**2.

    Finite families return an exact rational. Infinite families have a closed
    form only at the start of the support; elsewhere NoClosedForm is raised
    rather than truncating the series.
    """
    if mu < 0:
        raise InvalidParameters("mu must be >= 0")
    if fam.is_finite:
        if mu > fam.n:
            return Fraction(0)
        return sum((g_squared(fam, j, s) for j in range(mu, fam.n + 1)), Fraction(0))
    if s != fam.shift:
        raise NoClosedForm(f"{fam.kind.value} tail sums are only known at s = {fam.shift}")
    if fam.kind is FamilyKind.MEIXNER:
        # (1-q)^-beta = sum_j C(j+beta-1, j) q^j
        head = sum((binomial(j + fam.beta - 1, j) * fam.q ** j for j in range(mu)), Fraction(0))
        if fam.beta.denominator == 1:
            return 1 - (1 - fam.q) ** fam.beta.numerator * head
        if not head:
            return Fraction(1)
        return ClosedForm(Fraction(1), -head, unit(fam))
    head = sum((fam.lam ** i / factorial(i) for i in range(mu)), Fraction(0))
    if not head:
        return Fraction(1)
    return ClosedForm(Fraction(1), -head, unit(fam))


def dual_orthogonality_check(fam: FamilySpec, x: int, y: int) -> Fraction:
    """w(x) * K_n(x, y); equals 1 when x == y and 0 otherwise."""
    if not fam.is_finite:
        raise InfiniteSupport("dual orthogonality needs a finite support")
    return weight(fam, x) * kernel(fam, x, y, 0, fam.n)


def gram_check(fam: FamilySpec, i: int, j: int) -> Fraction:
    """(sum_x w(x) qhat_i(x) qhat_j(x))**2 * c_i * c_j, which is delta_ij."""
    if not fam.is_finite:
        raise InfiniteSupport("the Gram matrix is only summed over finite supports")
    _check_degree(fam, i)
    _check_degree(fam, j)
    inner = sum(
        (weight(fam, x) * unnormalized_value(fam, i, x) * unnormalized_value(fam, j, x)
         for x in range(fam.first, fam.last + 1)),
        Fraction(0),
    )
    return inner ** 2 * norm_constant(fam, i) * norm_constant(fam, j)
