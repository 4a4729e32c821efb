"""Lower bounds on coefficient norms of expansions with a high-order zero.

Every check returns a :class:`BoundReport`. Rational sides are compared
exactly. Sides involving e-powers, square roots or a family's symbolic unit are
enclosed with mpmath interval arithmetic; the working precision doubles from
``start_bits`` until the enclosure separates the sides, and at ``max_bits`` the
verdict is left undecided (``holds is None``) instead of guessed.
"""
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .deltabases import ExpansionVector, multiplicity_from_coeffs
from .errors import (
    MultiplicityTooSmall,
    ParameterDomain,
    SupportViolation,
    ZeroLeadCoefficient,
)
from .exactcore import RationalLike, as_rational, binomial
from .families import (
    FamilySpec,
    christoffel,
    tail_sum,
    unit,
    weight,
)

log = logging.getLogger(__name__)

DEFAULT_START_BITS = 128
DEFAULT_MAX_BITS = 512

OZL2 = "ozl2"
CONDG2 = "condg2"
EQ1 = "eq1"
EQ2 = "eq2"
EQ3 = "eq3"
MEIXNER1 = "meixner1"
MEIXNER2 = "meixner2"
CHARLIER3 = "charlier3"
OZE = "oze"
SCHUR1 = "schur1"
SCHUR2 = "schur2"

THEOREM4 = (MEIXNER1, MEIXNER2, CHARLIER3)


@dataclass(frozen=True)
class Enclosure:
    """A real number known to lie in [lo, hi]; lo and hi are exact rationals."""

    lo: Fraction
    hi: Fraction
    bits: int

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


Value = Union[Fraction, Enclosure]


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: Value
    rhs: Value
    strict: bool
    holds: Optional[bool]
    sharp: bool
    context: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class SchurInput:
    a0: Fraction
    an: Fraction
    n: int
    nu: int

    def __post_init__(self):
        object.__setattr__(self, "a0", as_rational(self.a0))
        object.__setattr__(self, "an", as_rational(self.an))
        if self.a0 <= 0 or self.an <= 0:
            raise ParameterDomain("schur comparison needs a0 > 0 and an > 0")
        if self.n < 1:
            raise ParameterDomain("schur comparison needs n >= 1")
        if not 0 <= self.nu <= self.n:
            raise ParameterDomain("number of real roots must lie in [0, n]")


@dataclass(frozen=True)
class NormConstraint:
    """Closed-form route for max_mu_for_norm: l2_ratio, linf_ratio or kraw_weighted."""

    kind: str
    bound: Fraction
    q: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "bound", as_rational(self.bound))
        if self.q is not None:
            object.__setattr__(self, "q", as_rational(self.q))
        if self.kind not in ("l2_ratio", "linf_ratio", "kraw_weighted"):
            raise ParameterDomain(f"unknown norm constraint {self.kind!r}")
        if self.kind == "kraw_weighted" and (self.q is None or self.q <= 0):
            raise ParameterDomain("kraw_weighted needs q > 0")


# -- interval plumbing -------------------------------------------------------

_local = threading.local()


def _interval_context(bits: int) -> MPIntervalContext:
    ctx = getattr(_local, "iv", None)
    if ctx is None:
        ctx = MPIntervalContext()
        _local.iv = ctx
    ctx.prec = bits
    return ctx


def _iv_rational(iv, x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _exact_point(point) -> Optional[Fraction]:
    # degenerate interval -> exact binary rational; infinities and nan give None
    x = mpmath.mp.convert(point)
    if not mpmath.mp.isfinite(x):
        return None
    return Fraction(*libmp.to_rational(x._mpf_))


def _endpoints(value) -> Optional[Tuple[Fraction, Fraction]]:
    lo, hi = _exact_point(value.a), _exact_point(value.b)
    if lo is None or hi is None:
        return None
    return lo, hi


def _decide(lhs: Fraction, rhs_fn: Callable, strict: bool,
            start_bits: int, max_bits: int) -> Tuple[Optional[bool], Enclosure]:
    """Compare an exact lhs with an enclosed rhs, doubling precision until they separate."""
    bits = start_bits
    enclosure = None
    while True:
        ends = _endpoints(rhs_fn(_interval_context(bits)))
        if ends is not None:
            lo, hi = ends
            enclosure = Enclosure(lo, hi, bits)
            if (lhs > hi) if strict else (lhs >= hi):
                return True, enclosure
            if (lhs <= lo) if strict else (lhs < lo):
                return False, enclosure
        if bits >= max_bits:
            log.debug("comparison undecided at %d bits", bits)
            if enclosure is None:
                enclosure = Enclosure(lhs, lhs, bits)
            return None, enclosure
        bits = min(2 * bits, max_bits)
        log.debug("raising interval precision to %d bits", bits)


def _exact(lhs: Fraction, rhs: Fraction, strict: bool) -> bool:
    return lhs > rhs if strict else lhs >= rhs


def _ctx(**items) -> Dict[str, object]:
    out = {}
    for key, value in items.items():
        if isinstance(value, Fraction):
            value = f"{value.numerator}/{value.denominator}"
        elif isinstance(value, (list, tuple)):
            value = [f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else x
                     for x in value]
        out[key] = value
    return out


def _exp_ratio(iv, num: int, den: int):
    return iv.exp(iv.mpf(num) / iv.mpf(den))


def _mu_of(v: ExpansionVector) -> int:
    mu = multiplicity_from_coeffs(v)
    if mu < 1:
        raise MultiplicityTooSmall("the bounds need a zero of multiplicity >= 1")
    return mu


def _stated_mu(v: ExpansionVector, mu: Optional[int]) -> int:
    actual = multiplicity_from_coeffs(v)
    if mu is None:
        mu = actual
    if mu < 1:
        raise MultiplicityTooSmall("the bounds need mu >= 1")
    if mu > actual:
        raise MultiplicityTooSmall(f"stated mu={mu} exceeds the actual multiplicity {actual}")
    return mu


def _coeff(v: ExpansionVector, i: int) -> Fraction:
    return v.a[i] if 0 <= i <= v.n else Fraction(0)


# -- closed-form factors -----------------------------------------------------

def _factorial_ratio(n: int, m: int) -> Fraction:
    return Fraction(factorial(n - m) * factorial(n + m), factorial(n) ** 2)


def eq1_bound(n: int, mu: int) -> Fraction:
    """(n-mu)!(n+mu)!/n!^2."""
    if not 0 <= mu <= n:
        raise ParameterDomain(f"mu={mu} must lie in [0, n={n}]")
    return _factorial_ratio(n, mu)


def eq2_bound(n: int, mu: int) -> Fraction:
    if not 0 <= mu <= n:
        raise ParameterDomain(f"mu={mu} must lie in [0, n={n}]")
    return _factorial_ratio(n, (mu + 1) // 2)


def eq3_bound(n: int, mu: int, q: RationalLike) -> Fraction:
    q = as_rational(q)
    if q <= 0:
        raise ParameterDomain("q must be positive")
    if not 0 <= mu <= n:
        raise ParameterDomain(f"mu={mu} must lie in [0, n={n}]")
    head = sum((binomial(n, i) * q ** i for i in range(mu)), Fraction(0))
    # head < (1+q)^n for mu <= n, so the tail is positive
    return 1 / (1 - head / (1 + q) ** n)


# -- general theorem ---------------------------------------------------------

def ozl2_check(v: ExpansionVector, fam: FamilySpec, s: int,
               mu: Optional[int] = None) -> BoundReport:
    """w(s)^2 sum_{i in D} a_i^2 / w(i) >= a_s^2 / sum_{j>=mu} g_j(s)^2."""
    if not fam.is_finite:
        raise ParameterDomain("ozl2 is evaluated on finite supports; use theorem4_check")
    mu = _stated_mu(v, mu)
    if not fam.in_support(s):
        raise SupportViolation(f"s={s} must lie in the family support")
    outside = [i for i in sorted(v.support) if not fam.in_support(i)]
    if outside:
        raise SupportViolation(f"coefficient index {outside[0]} lies outside the family support")
    w_s = weight(fam, s)
    lhs = w_s ** 2 * sum((_coeff(v, i) ** 2 / weight(fam, i)
                          for i in range(fam.first, fam.last + 1)), Fraction(0))
    a_s = _coeff(v, s)
    tail = tail_sum(fam, s, mu)
    rhs = a_s ** 2 / tail if a_s else Fraction(0)
    return BoundReport(OZL2, lhs, rhs, strict=False, holds=_exact(lhs, rhs, False),
                       sharp=lhs == rhs,
                       context=_ctx(mu=mu, s=s, tail=tail, **fam.describe()))


def condg2_check(v: ExpansionVector, fam: FamilySpec, s: int, mu: Optional[int] = None,
                 start_bits: int = DEFAULT_START_BITS,
                 max_bits: int = DEFAULT_MAX_BITS) -> BoundReport:
    """max_{k in D} |a_k|/w(k) >= |a_s| sum_{j<=(mu-1)//2} g_j(s)^2, for s outside D."""
    mu = _stated_mu(v, mu)
    if fam.in_support(s):
        raise SupportViolation(f"s={s} must lie outside the family support")
    outside = [i for i in sorted(v.support) if i != s and not fam.in_support(i)]
    if outside:
        raise SupportViolation(f"coefficient index {outside[0]} lies outside the family support")
    r = (mu - 1) // 2
    if fam.is_finite and r > fam.n:
        raise ParameterDomain(f"degree {r} exceeds the family range {fam.n}")
    lhs = max((abs(v.a[k]) / weight(fam, k) for k in sorted(v.support) if k != s),
              default=Fraction(0))
    diag = christoffel(fam, s, r)
    scale = abs(_coeff(v, s)) * diag
    u = unit(fam)
    context = _ctx(mu=mu, s=s, r=r, kernel_diagonal=diag, unit=str(u), **fam.describe())
    if u.is_one or not scale:
        return BoundReport(CONDG2, lhs, scale, strict=False, holds=_exact(lhs, scale, False),
                           sharp=lhs == scale, context=context)
    holds, rhs = _decide(lhs, lambda iv: _iv_rational(iv, scale) * u.enclose(iv), False,
                         start_bits, max_bits)
    return BoundReport(CONDG2, lhs, rhs, strict=False, holds=holds, sharp=False, context=context)


# -- explicit corollaries ----------------------------------------------------

def _exp_chain(factor: Fraction, num: int, den: int,
               start_bits: int, max_bits: int) -> Optional[bool]:
    if num == 0:
        return factor >= 1
    holds, _ = _decide(factor, lambda iv: _exp_ratio(iv, num, den), False, start_bits, max_bits)
    return holds


def eq1_check(v: ExpansionVector, start_bits: int = DEFAULT_START_BITS,
              max_bits: int = DEFAULT_MAX_BITS) -> BoundReport:
    """sum |a_i|^2 >= (n-mu)!(n+mu)!/n!^2 |a_0|^2 >= exp(2 mu^2/(2n+1)) |a_0|^2."""
    mu = _mu_of(v)
    n = v.n
    factor = eq1_bound(n, mu)
    lhs = sum((x * x for x in v.a), Fraction(0))
    rhs = factor * v.a[0] ** 2
    chain = _exp_chain(factor, 2 * mu * mu, 2 * n + 1, start_bits, max_bits)
    return BoundReport(EQ1, lhs, rhs, strict=False, holds=_exact(lhs, rhs, False),
                       sharp=lhs == rhs,
                       context=_ctx(n=n, mu=mu, factor=factor, exp_chain_holds=chain))


def eq2_check(v: ExpansionVector, start_bits: int = DEFAULT_START_BITS,
              max_bits: int = DEFAULT_MAX_BITS) -> BoundReport:
    """1 + max_{k>=1} |a_k/a_0| >= (n-m)!(n+m)!/n!^2 with m = (mu+1)//2."""
    a0 = v.a[0]
    if not a0:
        raise ZeroLeadCoefficient("eq2 is stated relative to a_0, which is zero")
    mu = _mu_of(v)
    n = v.n
    m = (mu + 1) // 2
    lhs = 1 + max((abs(x / a0) for x in v.a[1:]), default=Fraction(0))
    rhs = eq2_bound(n, mu)
    chain = _exp_chain(rhs, 2 * m * m, 2 * n + 1, start_bits, max_bits)
    return BoundReport(EQ2, lhs, rhs, strict=False, holds=_exact(lhs, rhs, False),
                       sharp=lhs == rhs,
                       context=_ctx(n=n, mu=mu, m=m, exp_chain_holds=chain))


def eq3_check(v: ExpansionVector, q: RationalLike) -> BoundReport:
    """sum |a_i|^2 q^-i / C(n,i) >= |a_0|^2 / (1 - (1+q)^-n sum_{i<mu} C(n,i) q^i)."""
    q = as_rational(q)
    if q <= 0:
        raise ParameterDomain("eq3 needs q > 0")
    a0 = v.a[0]
    if not a0:
        raise ZeroLeadCoefficient("eq3 is stated relative to a_0, which is zero")
    mu = _mu_of(v)
    n = v.n
    lhs = sum((x * x * q ** -i / binomial(n, i) for i, x in enumerate(v.a) if x), Fraction(0))
    rhs = a0 ** 2 * eq3_bound(n, mu, q)
    return BoundReport(EQ3, lhs, rhs, strict=False, holds=_exact(lhs, rhs, False),
                       sharp=lhs == rhs, context=_ctx(n=n, mu=mu, q=q))


def theorem4_check(v: ExpansionVector, which: str, q: RationalLike,
                   start_bits: int = DEFAULT_START_BITS,
                   max_bits: int = DEFAULT_MAX_BITS) -> BoundReport:
    """Strict bounds from the infinite Meixner (q > 1) and Charlier (q > 0) families."""
    q = as_rational(q)
    if which not in THEOREM4:
        raise ParameterDomain(f"unknown bound {which!r}")
    if which in (MEIXNER1, MEIXNER2) and q <= 1:
        raise ParameterDomain(f"{which} needs q > 1")
    if which == CHARLIER3 and q <= 0:
        raise ParameterDomain("charlier3 needs q > 0")
    a0 = v.a[0]
    if not a0:
        raise ZeroLeadCoefficient(f"{which} is stated relative to a_0, which is zero")
    mu = _mu_of(v)
    context = _ctx(n=v.n, mu=mu, q=q)
    if which == MEIXNER1:
        lhs = sum((x * x * q ** i for i, x in enumerate(v.a)), Fraction(0))
        rhs = a0 ** 2 * q ** mu
    elif which == MEIXNER2:
        r = (mu - 1) // 2
        lhs = max(abs(x) * q ** i for i, x in enumerate(v.a))
        rhs = (q ** r - 1 / q) * abs(a0)
        context["r"] = r
    else:
        lhs = sum((x * x * factorial(i) / q ** i for i, x in enumerate(v.a)), Fraction(0))
        head = sum((q ** i / factorial(i) for i in range(mu)), Fraction(0))
        a0_sq = a0 ** 2

        def rhs_fn(iv):
            e = iv.exp(-_iv_rational(iv, q))
            return _iv_rational(iv, a0_sq) / (1 - e * _iv_rational(iv, head))

        holds, rhs = _decide(lhs, rhs_fn, True, start_bits, max_bits)
        context["bits"] = rhs.bits
        return BoundReport(which, lhs, rhs, strict=True, holds=holds, sharp=False,
                           context=context)
    return BoundReport(which, lhs, rhs, strict=True, holds=_exact(lhs, rhs, True),
                       sharp=lhs == rhs, context=context)


def oze_check(n: int, k: int, start_bits: int = DEFAULT_START_BITS,
              max_bits: int = DEFAULT_MAX_BITS) -> BoundReport:
    """(n-k)!(n+k)!/n!^2 >= exp(2k^2/(2n+1)) for 0 <= k <= n."""
    if not 0 <= k <= n:
        raise ParameterDomain(f"k={k} must lie in [0, n={n}]")
    lhs = _factorial_ratio(n, k)
    context = _ctx(n=n, k=k)
    if k == 0:
        return BoundReport(OZE, lhs, Fraction(1), strict=False, holds=lhs >= 1,
                           sharp=lhs == 1, context=context)
    holds, rhs = _decide(lhs, lambda iv: _exp_ratio(iv, 2 * k * k, 2 * n + 1), False,
                         start_bits, max_bits)
    context["bits"] = rhs.bits
    return BoundReport(OZE, lhs, rhs, strict=False, holds=holds, sharp=False, context=context)


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def schur_bounds(inp: SchurInput, norm_l2_sq: RationalLike, norm_l1: RationalLike,
                 start_bits: int = DEFAULT_START_BITS,
                 max_bits: int = DEFAULT_MAX_BITS) -> Tuple[BoundReport, BoundReport]:
    """Compare supplied norms with the classical real-root bounds.

    The caller supplies nu, the number of real roots; it is not verified.
    """
    l2 = as_rational(norm_l2_sq)
    l1 = as_rational(norm_l1)
    n, nu = inp.n, inp.nu
    product = inp.a0 * inp.an
    context = _ctx(a0=inp.a0, an=inp.an, n=n, nu=nu)

    num1, den1 = nu * nu - nu, 2 * n
    if num1 == 0:
        rhs1 = 2 * product
        first = BoundReport(SCHUR1, l2, rhs1, strict=False, holds=l2 >= rhs1,
                            sharp=l2 == rhs1, context=dict(context))
    else:
        holds, enc = _decide(
            l2, lambda iv: 2 * _iv_rational(iv, product) * _exp_ratio(iv, num1, den1),
            False, start_bits, max_bits)
        first = BoundReport(SCHUR1, l2, enc, strict=False, holds=holds, sharp=False,
                            context=dict(context))

    root = _exact_sqrt(product)
    num2, den2 = nu * nu, 4 * n
    if num2 == 0 and root is not None:
        second = BoundReport(SCHUR2, l1, root, strict=False, holds=l1 >= root,
                             sharp=l1 == root, context=dict(context))
    else:
        holds, enc = _decide(
            l1, lambda iv: iv.sqrt(_iv_rational(iv, product)) * _exp_ratio(iv, num2, den2),
            False, start_bits, max_bits)
        second = BoundReport(SCHUR2, l1, enc, strict=False, holds=holds, sharp=False,
                             context=dict(context))
    return first, second


def max_mu_for_norm(n: int, constraint: NormConstraint) -> int:
    """Largest mu in [0, n] whose closed-form bound (|a_0| = 1) stays within the budget."""
    if n < 0:
        raise ParameterDomain("n must be >= 0")
    if constraint.bound < 1:
        raise ParameterDomain("the norm budget must be >= 1")
    if constraint.kind == "l2_ratio":
        bound_of = lambda mu: eq1_bound(n, mu)
    elif constraint.kind == "linf_ratio":
        bound_of = lambda mu: eq2_bound(n, mu)
    else:
        bound_of = lambda mu: eq3_bound(n, mu, constraint.q)
    best = 0
    # each bound is nondecreasing in mu
    for mu in range(n + 1):
        if bound_of(mu) > constraint.bound:
            break
        best = mu
    return best


def standard_battery(v: ExpansionVector, qs: Tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1), Fraction(2)),
                     start_bits: int = DEFAULT_START_BITS,
                     max_bits: int = DEFAULT_MAX_BITS) -> List[BoundReport]:
    """Every bound applicable to ``v`` without extra inputs."""
    reports = [eq1_check(v, start_bits, max_bits)]
    if v.a[0]:
        reports.append(eq2_check(v, start_bits, max_bits))
        reports.extend(eq3_check(v, q) for q in qs)
        for q in qs:
            if q > 1:
                reports.append(theorem4_check(v, MEIXNER1, q, start_bits, max_bits))
                reports.append(theorem4_check(v, MEIXNER2, q, start_bits, max_bits))
            reports.append(theorem4_check(v, CHARLIER3, q, start_bits, max_bits))
    reports.append(ozl2_check(v, FamilySpec.chebyshev(v.n), 0))
    reports.append(ozl2_check(v, FamilySpec.krawtchouk(v.n, 1), 0))
    return reports
