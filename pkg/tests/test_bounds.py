import math
import random
from fractions import Fraction
from math import comb

import pytest

from src import bounds
from src.bounds import (
    Enclosure,
    NormConstraint,
    SchurInput,
    condg2_check,
    eq1_bound,
    eq1_check,
    eq2_bound,
    eq2_check,
    eq3_bound,
    eq3_check,
    max_mu_for_norm,
    oze_check,
    ozl2_check,
    schur_bounds,
    standard_battery,
    theorem4_check,
)
from src.deltabases import ExpansionVector
from src.errors import (
    MultiplicityTooSmall,
    ParameterDomain,
    SupportViolation,
    ZeroLeadCoefficient,
)
from src.exactcore import DensePoly
from src.families import FamilySpec, christoffel, tail_sum

SQUARE = ExpansionVector.monomial([1, -2, 1])


def _one_minus_x(n):
    return ExpansionVector.monomial([(-1) ** i * comb(n, i) for i in range(n + 1)])


def _random_with_zero(rng: random.Random):
    """Random integer polynomial times (x - 1)^m with m >= 1 and a nonzero constant term."""
    while True:
        m = rng.randint(1, 4)
        base = DensePoly(tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 4))))
        p = base * DensePoly.linear(-1, 1) ** m
        if not base.is_zero and p.coeff(0):
            return ExpansionVector.monomial(p.coeffs)


def test_eq1_sharp_for_binomial_family():
    for n in range(1, 21):
        report = eq1_check(_one_minus_x(n))
        assert report.lhs == report.rhs == Fraction(math.factorial(2 * n), math.factorial(n) ** 2)
        assert report.holds and report.sharp
        assert report.context["mu"] == n


def test_eq3_sharp_for_binomial_family():
    for q in (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
        for n in range(1, 13):
            report = eq3_check(_one_minus_x(n), q)
            assert report.lhs == report.rhs
            assert report.holds and report.sharp


def test_closed_form_factors():
    assert eq1_bound(2, 2) == 6
    assert eq2_bound(6, 3) == Fraction(28, 15)
    assert eq3_bound(2, 2, 2) == Fraction(9, 4)
    assert eq1_bound(5, 0) == 1
    with pytest.raises(ParameterDomain):
        eq1_bound(3, 4)
    with pytest.raises(ParameterDomain):
        eq3_bound(3, 1, 0)


def test_ozl2_worked_equalities():
    kraw = ozl2_check(SQUARE, FamilySpec.krawtchouk(2, 1), 0)
    assert kraw.lhs == kraw.rhs == 4
    assert kraw.holds and kraw.sharp
    cheb = ozl2_check(SQUARE, FamilySpec.chebyshev(2), 0)
    assert cheb.lhs == cheb.rhs == 6


def test_ozl2_stated_mu():
    report = ozl2_check(SQUARE, FamilySpec.chebyshev(2), 0, mu=1)
    assert report.rhs == Fraction(3, 2)
    assert report.holds and not report.sharp
    with pytest.raises(MultiplicityTooSmall):
        ozl2_check(SQUARE, FamilySpec.chebyshev(2), 0, mu=3)
    with pytest.raises(ParameterDomain):
        ozl2_check(SQUARE, FamilySpec.charlier(1), 0)


def test_condg2_on_shifted_chebyshev():
    fam = FamilySpec.chebyshev(1).shifted(1)
    report = condg2_check(SQUARE, fam, 0)
    assert report.lhs == 2
    assert report.rhs == Fraction(1, 2)
    assert report.holds
    with pytest.raises(SupportViolation):
        condg2_check(SQUARE, FamilySpec.chebyshev(2), 0)


def test_condg2_with_symbolic_unit_is_enclosed():
    fam = FamilySpec.charlier(1).shifted(1)
    report = condg2_check(SQUARE, fam, 0)
    assert isinstance(report.rhs, Enclosure)
    assert report.holds is True


def test_eq2_and_eq3_examples():
    report = eq2_check(SQUARE)
    assert report.lhs == 3
    assert report.rhs == eq2_bound(2, 2)
    assert report.holds
    assert report.context["exp_chain_holds"] is True
    assert eq3_check(SQUARE, 2).lhs == Fraction(9, 4)
    with pytest.raises(ZeroLeadCoefficient):
        eq2_check(ExpansionVector.monomial([0, 1, -1]))


def test_theorem4_examples():
    m1 = theorem4_check(SQUARE, bounds.MEIXNER1, 2)
    assert (m1.lhs, m1.rhs) == (13, 4)
    m2 = theorem4_check(SQUARE, bounds.MEIXNER2, 2)
    assert (m2.lhs, m2.rhs) == (4, Fraction(1, 2))
    c3 = theorem4_check(SQUARE, bounds.CHARLIER3, 1)
    assert c3.lhs == 7
    assert isinstance(c3.rhs, Enclosure)
    assert c3.rhs.lo < Fraction(3785, 1000) and c3.rhs.hi > Fraction(3783, 1000)
    for r in (m1, m2, c3):
        assert r.strict and r.holds and not r.sharp
    with pytest.raises(ParameterDomain):
        theorem4_check(SQUARE, bounds.MEIXNER1, 1)


def test_theorem4_strict_on_random_expansions():
    rng = random.Random(7)
    for _ in range(200):
        v = _random_with_zero(rng)
        for q in (Fraction(3, 2), Fraction(2), Fraction(3)):
            for which in (bounds.MEIXNER1, bounds.MEIXNER2):
                report = theorem4_check(v, which, q)
                assert report.holds is True and not report.sharp
        for q in (Fraction(1, 2), Fraction(1), Fraction(2)):
            report = theorem4_check(v, bounds.CHARLIER3, q, start_bits=128, max_bits=256)
            assert report.holds is True and not report.sharp


def test_oze_holds_everywhere():
    for n in range(301):
        for k in range(n + 1):
            report = oze_check(n, k, start_bits=256, max_bits=256)
            assert report.holds is True, (n, k)


def test_schur_bounds():
    # (x - 1)(x - 2) = 2 - 3x + x^2 has two real roots
    first, second = schur_bounds(SchurInput(2, 1, 2, 2), 14, 6)
    assert first.holds and second.holds
    no_roots, _ = schur_bounds(SchurInput(1, 1, 2, 0), 2, 2)
    assert no_roots.rhs == 2 and no_roots.sharp
    with pytest.raises(ParameterDomain):
        SchurInput(-1, 1, 2, 0)


def test_max_mu_for_norm():
    assert max_mu_for_norm(6, NormConstraint("linf_ratio", 2)) == 4
    assert max_mu_for_norm(2, NormConstraint("l2_ratio", 6)) == 2
    assert max_mu_for_norm(2, NormConstraint("l2_ratio", 5)) == 1
    assert max_mu_for_norm(2, NormConstraint("kraw_weighted", Fraction(9, 4), q=2)) == 2
    with pytest.raises(ParameterDomain):
        NormConstraint("kraw_weighted", 2)


def test_linf_cap_stays_under_envelope():
    for n in range(1, 41):
        cap = max_mu_for_norm(n, NormConstraint("linf_ratio", 2))
        assert cap <= math.floor(2 * math.sqrt(n * math.log(2)) + 2)


def test_standard_battery_all_hold():
    reports = standard_battery(SQUARE)
    names = {r.name for r in reports}
    assert {"eq1", "eq2", "eq3", "meixner1", "meixner2", "charlier3", "ozl2"} <= names
    assert all(r.holds is True for r in reports)


def test_undecided_is_not_a_verdict():
    report = oze_check(300, 1, start_bits=8, max_bits=8)
    assert report.holds is None
    assert report.rhs.bits == 8


def test_random_instance_soundness():
    rng = random.Random(500)
    for _ in range(500):
        v = _random_with_zero(rng)
        reports = standard_battery(v)
        if v.n >= 1:
            reports.append(condg2_check(v, FamilySpec.chebyshev(v.n - 1).shifted(1), 0))
        for r in reports:
            assert r.holds is True, (r.name, v.a)


def test_eq1_factor_is_reciprocal_chebyshev_tail():
    for n in range(26):
        fam = FamilySpec.chebyshev(n)
        for mu in range(n + 1):
            assert eq1_bound(n, mu) == 1 / tail_sum(fam, 0, mu)


def test_eq2_factor_from_shifted_kernel():
    for n in range(1, 26):
        fam = FamilySpec.chebyshev(n - 1).shifted(1)
        for mu in range(1, n + 1):
            r = (mu - 1) // 2
            assert eq2_bound(n, mu) == 1 + christoffel(fam, 0, r)


def test_closed_forms_nondecreasing_in_mu():
    for n in range(1, 16):
        for bound in (lambda mu: eq1_bound(n, mu), lambda mu: eq2_bound(n, mu),
                      lambda mu: eq3_bound(n, mu, Fraction(1, 2))):
            values = [bound(mu) for mu in range(n + 1)]
            assert values == sorted(values)


def test_interval_endpoints_are_exact_binary_rationals():
    iv = bounds._interval_context(64)
    lo, hi = bounds._endpoints(iv.mpf(1) / 3)
    assert lo < Fraction(1, 3) < hi
    assert hi - lo < Fraction(1, 2 ** 60)
    assert lo.denominator & (lo.denominator - 1) == 0
    assert bounds._endpoints(iv.mpf(5)) == (5, 5)
    assert bounds._endpoints(iv.inf) is None
