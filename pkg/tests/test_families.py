from fractions import Fraction
from math import factorial

import pytest

from src import families
from src.errors import InfiniteSupport, InvalidParameters, NoClosedForm, OutOfSupport
from src.families import (
    ClosedForm,
    FamilySpec,
    dual_orthogonality_check,
    g_squared,
    gram_check,
    kernel,
    norm_constant,
    tail_sum,
    unit,
    unnormalized_value,
    weight,
)
from src.macwilliams import krawtchouk_gf

HALF = Fraction(1, 2)


def _finite_families(n):
    yield FamilySpec.chebyshev(n)
    for q in (HALF, Fraction(1), Fraction(3)):
        yield FamilySpec.krawtchouk(n, q)
    for a in (Fraction(0), HALF, Fraction(2)):
        for b in (Fraction(0), HALF, Fraction(2)):
            yield FamilySpec.hahn(n, a, b)


def test_weights():
    assert weight(FamilySpec.krawtchouk(2, 1), 1) == 2
    assert weight(FamilySpec.chebyshev(9), 4) == 1
    assert weight(FamilySpec.charlier(1), 3) == Fraction(1, 6)
    with pytest.raises(OutOfSupport):
        weight(FamilySpec.chebyshev(2), 3)
    with pytest.raises(OutOfSupport):
        weight(FamilySpec.meixner(1, HALF), -1)


def test_parameter_validation():
    with pytest.raises(InvalidParameters):
        FamilySpec.meixner(1, Fraction(3, 2))
    with pytest.raises(InvalidParameters):
        FamilySpec.hahn(3, -2, 0)
    with pytest.raises(InvalidParameters):
        FamilySpec.krawtchouk(3, 0)
    with pytest.raises(InvalidParameters):
        FamilySpec.charlier(0)


def test_unnormalized_values():
    kraw = FamilySpec.krawtchouk(2, 1)
    assert [unnormalized_value(kraw, 1, x) for x in range(3)] == [2, 0, -2]
    assert [unnormalized_value(kraw, 2, x) for x in range(3)] == [1, -1, 1]
    assert unnormalized_value(FamilySpec.charlier(1), 2, 0) == 1
    for fam in (FamilySpec.chebyshev(4), FamilySpec.meixner(2, HALF)):
        assert unnormalized_value(fam, 0, 3) == 1


def test_krawtchouk_at_q_one_matches_generating_function():
    fam = FamilySpec.krawtchouk(5, 1)
    for k in range(6):
        for x in range(6):
            assert unnormalized_value(fam, k, x) == krawtchouk_gf(k, 5, x)


def test_norm_constants():
    assert norm_constant(FamilySpec.chebyshev(2), 1) == HALF
    assert [norm_constant(FamilySpec.krawtchouk(2, 1), k) for k in range(3)] == \
        [Fraction(1, 4), Fraction(1, 8), Fraction(1, 4)]
    for n in range(11):
        for k in range(n + 1):
            assert norm_constant(FamilySpec.hahn(n, 0, 0), k) == norm_constant(FamilySpec.chebyshev(n), k)


def test_g_squared_examples():
    assert g_squared(FamilySpec.chebyshev(2), 2, 0) == Fraction(1, 6)
    assert g_squared(FamilySpec.meixner(1, HALF), 3, 0) == Fraction(1, 16)
    for n in range(6):
        assert g_squared(FamilySpec.chebyshev(n), 0, n) == Fraction(1, n + 1)


def test_closed_forms_at_zero_and_minus_one():
    for n in range(11):
        cheb = FamilySpec.chebyshev(n)
        hahn = FamilySpec.hahn(n, HALF, 2)
        for k in range(n + 1):
            assert g_squared(cheb, k, 0) == Fraction(
                (2 * k + 1) * factorial(n) ** 2, factorial(n - k) * factorial(n + k + 1))
            assert g_squared(cheb, k, -1) == Fraction(
                (2 * k + 1) * factorial(n - k) * factorial(n + k + 1), factorial(n + 1) ** 2)
            assert g_squared(hahn, k, 0) == norm_constant(hahn, k)
        for q in (HALF, Fraction(1), Fraction(3)):
            kraw = FamilySpec.krawtchouk(n, q)
            for k in range(n + 1):
                binom = Fraction(factorial(n), factorial(k) * factorial(n - k))
                assert g_squared(kraw, k, 0) == binom * q ** k / (1 + q) ** n
    for q in (Fraction(1, 3), HALF, Fraction(3, 4)):
        meixner = FamilySpec.meixner(1, q)
        for k in range(11):
            assert g_squared(meixner, k, 0) == (1 - q) * q ** k
            assert g_squared(meixner, k, -1) == (1 - q) * q ** -k
    for lam in (HALF, Fraction(1), Fraction(3)):
        charlier = FamilySpec.charlier(lam)
        assert str(unit(charlier)) == f"exp({-lam})"
        for k in range(11):
            assert g_squared(charlier, k, 0) == lam ** k / factorial(k)


def test_meixner_unit_only_for_fractional_beta():
    assert unit(FamilySpec.meixner(2, HALF)).is_one
    u = unit(FamilySpec.meixner(HALF, HALF))
    assert u.kind == "pow" and u.base == HALF and u.exponent == HALF


def test_kernel_examples():
    assert kernel(FamilySpec.chebyshev(2), 0, 0, 0, 2) == 1
    assert kernel(FamilySpec.krawtchouk(2, 1), 0, 1, 0, 2) == 0
    fam = FamilySpec.krawtchouk(3, 2)
    assert kernel(fam, 1, 2, 0, 0) == 1 / sum(weight(fam, t) for t in range(4))
    with pytest.raises(InvalidParameters):
        kernel(fam, 0, 0, 2, 1)
    with pytest.raises(InvalidParameters):
        kernel(fam, 0, 0, 0, 4)


def test_tail_sums():
    assert tail_sum(FamilySpec.chebyshev(2), 0, 1) == Fraction(2, 3)
    assert tail_sum(FamilySpec.chebyshev(7), 0, 0) == 1
    assert tail_sum(FamilySpec.chebyshev(3), 0, 5) == 0
    assert tail_sum(FamilySpec.meixner(1, Fraction(1, 3)), 0, 2) == Fraction(1, 9)
    # beta = 2: 1 - (1-q)^2 (1 + 2q)
    assert tail_sum(FamilySpec.meixner(2, HALF), 0, 2) == 1 - Fraction(1, 4) * 2


def test_tail_sum_telescopes():
    for n in range(31):
        fam = FamilySpec.chebyshev(n)
        for mu in range(n + 1):
            assert tail_sum(fam, 0, mu) * factorial(n - mu) * factorial(n + mu) == factorial(n) ** 2


def test_infinite_tail_closed_forms():
    charlier = tail_sum(FamilySpec.charlier(1), 0, 2)
    assert isinstance(charlier, ClosedForm)
    assert charlier.constant == 1 and charlier.coefficient == -2
    assert tail_sum(FamilySpec.charlier(1), 0, 0) == 1
    meixner = tail_sum(FamilySpec.meixner(HALF, HALF), 0, 1)
    assert isinstance(meixner, ClosedForm) and meixner.coefficient == -1
    with pytest.raises(NoClosedForm):
        tail_sum(FamilySpec.charlier(1), 2, 1)


def test_shifted_family():
    fam = FamilySpec.chebyshev(1).shifted(1)
    assert not fam.in_support(0) and fam.in_support(2)
    assert weight(fam, 1) == 1
    assert g_squared(fam, 1, 0) == g_squared(FamilySpec.chebyshev(1), 1, -1)


def test_dual_orthogonality_examples():
    assert dual_orthogonality_check(FamilySpec.chebyshev(5), 3, 3) == 1
    assert dual_orthogonality_check(FamilySpec.krawtchouk(4, 2), 0, 3) == 0
    assert dual_orthogonality_check(FamilySpec.hahn(3, HALF, HALF), 1, 1) == 1
    with pytest.raises(InfiniteSupport):
        dual_orthogonality_check(FamilySpec.charlier(1), 0, 0)


@pytest.mark.parametrize("n", range(13))
def test_orthonormality_and_dual_orthogonality(n):
    for fam in _finite_families(n):
        for i in range(n + 1):
            for j in range(i, n + 1):
                assert gram_check(fam, i, j) == (1 if i == j else 0), (fam, i, j)
                assert dual_orthogonality_check(fam, i, j) == (1 if i == j else 0), (fam, i, j)


def test_hahn_negative_branch_checks_weights_pointwise():
    fam = FamilySpec.hahn(2, -4, -4)
    assert all(weight(fam, x) > 0 for x in range(3))
    for i in range(3):
        assert gram_check(fam, i, i) == 1
    with pytest.raises(InvalidParameters):
        FamilySpec.hahn(1, -3, -3)


def test_memo_tables_are_bounded():
    for table in (families._weight_cached, families._qhat, families._norm_constant):
        assert table.cache_info().maxsize == families.CACHE_SIZE
    fam = FamilySpec.charlier(Fraction(1, 2))
    for x in range(families.CACHE_SIZE // 1000):
        weight(fam, x)
    assert families._weight_cached.cache_info().currsize <= families.CACHE_SIZE
