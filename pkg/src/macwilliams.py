"""Distance distributions of binary codes and the MacWilliams transform.

The binary Krawtchouk numbers K_j^n(x) are the coefficients of z^j in
(1 - z)^x (1 + z)^(n - x). A code's distance distribution B and its dual B'
satisfy |C| B'_i = sum_j B_j K_i^n(j), and multiplying by x^i and summing gives

    |C| sum_i B'_i x^i = sum_i B_i (1 - x)^i (1 + x)^(n - i).

When B_1 = ... = B_{d-1} = 0 the terms with i >= d share the factor (1 - x)^d.
The combined form that subtracts binomial coefficients on the left is not
reproduced; the two identities above are checked separately.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import DistancePreconditionViolated, EmptyCode, IndexOutOfRange, InvalidParameters
from .exactcore import DensePoly, RationalLike, as_rational, binomial, multiplicity_at


@dataclass(frozen=True)
class DistanceDistribution:
    B: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_rational(b) for b in self.B)
        if not values:
            raise InvalidParameters("a distance distribution needs at least B_0")
        if values[0] != 1:
            raise InvalidParameters("B_0 must equal 1")
        if any(b < 0 for b in values):
            raise InvalidParameters("distance distribution entries must be nonnegative")
        object.__setattr__(self, "B", values)

    @classmethod
    def of(cls, values: Sequence[RationalLike]) -> "DistanceDistribution":
        return cls(tuple(as_rational(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.B) - 1

    @property
    def size(self) -> Fraction:
        return sum(self.B, Fraction(0))


def krawtchouk_gf(j: int, n: int, x: int) -> Fraction:
    if not (0 <= j <= n and 0 <= x <= n):
        raise IndexOutOfRange(f"K_{j}^{n}({x}) needs 0 <= j, x <= n")
    return sum(
        ((-1) ** m * binomial(x, m) * binomial(n - x, j - m) for m in range(j + 1)),
        Fraction(0),
    )


def macwilliams_transform(dist: DistanceDistribution) -> Tuple[Fraction, ...]:
    size = dist.size
    if size <= 0:
        raise EmptyCode("the code has no codewords")
    n = dist.n
    return tuple(
        sum((b * krawtchouk_gf(i, n, j) for j, b in enumerate(dist.B) if b), Fraction(0)) / size
        for i in range(n + 1)
    )


def dual_distribution(dist: DistanceDistribution) -> DistanceDistribution:
    return DistanceDistribution(macwilliams_transform(dist))


def _krawtchouk_term(n: int, i: int) -> DensePoly:
    one_minus = DensePoly.linear(1, -1)
    one_plus = DensePoly.linear(1, 1)
    return one_minus ** i * one_plus ** (n - i)


def code_polynomial(dist: DistanceDistribution) -> DensePoly:
    """sum_i B_i (1 - x)^i (1 + x)^(n - i), expanded."""
    n = dist.n
    out = DensePoly()
    for i, b in enumerate(dist.B):
        if b:
            out = out + _krawtchouk_term(n, i) * b
    return out


def vanishing_factor(dist: DistanceDistribution, d: int) -> Tuple[DensePoly, int]:
    """Split off (1 - x)^d from the terms i >= d.

    Returns (Q, mu) with sum_{i>=d} B_i (1 - x)^i (1 + x)^(n - i) = (1 - x)^d Q
    and mu the exact multiplicity of that sum at x = 1, so mu >= d.
    A code with a single codeword has no pair at distance >= d and is rejected.
    """
    n = dist.n
    if not 1 <= d <= n:
        raise InvalidParameters(f"code distance d={d} must lie in [1, {n}]")
    bad = [i for i in range(1, d) if dist.B[i]]
    if bad:
        raise DistancePreconditionViolated(f"B_{bad[0]} != 0 contradicts distance {d}")
    one_minus = DensePoly.linear(1, -1)
    one_plus = DensePoly.linear(1, 1)
    quotient = DensePoly()
    for i in range(d, n + 1):
        if dist.B[i]:
            quotient = quotient + one_minus ** (i - d) * one_plus ** (n - i) * dist.B[i]
    if quotient.is_zero:
        raise DistancePreconditionViolated(f"no codeword pair at distance >= {d}: B_{d}..B_{n} all vanish")
    mu = d + multiplicity_at(quotient, 1)
    return quotient, mu


def repetition(n: int) -> DistanceDistribution:
    if n < 1:
        raise InvalidParameters("repetition code needs n >= 1")
    return DistanceDistribution.of([1] + [0] * (n - 1) + [1])


def hamming74() -> DistanceDistribution:
    return DistanceDistribution.of([1, 0, 0, 7, 7, 0, 0, 1])


def simplex73() -> DistanceDistribution:
    return DistanceDistribution.of([1, 0, 0, 0, 7, 0, 0, 0])


NAMED = {
    "repetition3": lambda: repetition(3),
    "hamming74": hamming74,
    "simplex73": simplex73,
}
