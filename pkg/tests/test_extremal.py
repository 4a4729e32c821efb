import math
from fractions import Fraction

import pytest

from src.config import AppConfig
from src.errors import InstanceTooLarge, InvalidParameters
from src.extremal import (
    SearchProblem,
    bound_vs_search_table,
    envelope,
    exhaustive_search,
    product_witness,
    search_max_multiplicity,
    verify_witness,
)

ALPHABETS = ([-1, 1], [0, 1], [-1, 0, 1])
WITNESS = (1, -1, -1, 0, 1, 1, -1)


def _cfg(**overrides):
    return AppConfig(**overrides)


@pytest.mark.parametrize("alphabet", ALPHABETS)
@pytest.mark.parametrize("n", range(1, 9))
def test_search_matches_exhaustive(n, alphabet):
    prob = SearchProblem.of(n, alphabet)
    pruned = search_max_multiplicity(prob, config=_cfg())
    plain = exhaustive_search(prob)
    assert pruned.mu_max == plain.mu_max
    assert pruned.witness_count == plain.witness_count
    assert pruned.witnesses == plain.witnesses
    assert pruned.mu_max <= pruned.bound_used


def test_known_witness_at_degree_six():
    result = search_max_multiplicity(SearchProblem.of(6, [-1, 0, 1]), config=_cfg())
    assert result.mu_max == 3
    assert verify_witness(WITNESS, 3)
    if result.witness_count <= len(result.witnesses):
        assert tuple(Fraction(a) for a in WITNESS) in result.witnesses
    for w in result.witnesses:
        assert verify_witness(w, 3)
        assert next(a for a in w if a) > 0


def test_zero_free_alphabet_has_no_zero():
    result = search_max_multiplicity(SearchProblem.of(5, [0, 1]), config=_cfg())
    assert result.mu_max == 0


def test_rational_alphabet_scales():
    ints = search_max_multiplicity(SearchProblem.of(5, [-2, 0, 2]), config=_cfg())
    halves = search_max_multiplicity(SearchProblem.of(5, ["-1/2", 0, "1/2"]), config=_cfg())
    assert ints.mu_max == halves.mu_max
    assert ints.witness_count == halves.witness_count


def test_allow_zero_a0():
    prob = SearchProblem.of(3, [-1, 0, 1], require_a0_nonzero=False)
    result = search_max_multiplicity(prob, config=_cfg())
    assert result.mu_max == exhaustive_search(prob).mu_max
    # (1 - x)(1 - x^2)
    assert result.mu_max >= 2


def test_parallel_partitions_agree():
    prob = SearchProblem.of(6, [-1, 0, 1])
    serial = search_max_multiplicity(prob, config=_cfg())
    parallel = search_max_multiplicity(prob, config=_cfg(), workers=2)
    assert parallel.mu_max == serial.mu_max
    assert parallel.witness_count == serial.witness_count
    assert parallel.witnesses == serial.witnesses


def test_node_budget():
    with pytest.raises(InstanceTooLarge):
        search_max_multiplicity(SearchProblem.of(8, [-1, 0, 1]), config=_cfg(max_nodes=50))
    with pytest.raises(InstanceTooLarge):
        search_max_multiplicity(SearchProblem.of(30, [-1, 1]), config=_cfg(max_degree=24))


def test_problem_validation():
    with pytest.raises(InvalidParameters):
        SearchProblem.of(3, [0])
    with pytest.raises(InvalidParameters):
        SearchProblem.of(0, [-1, 1])
    assert SearchProblem.of(2, [1, 1, -1]).alphabet == (1, -1)


def test_verify_witness():
    assert verify_witness([1, -2, 1], 2)
    assert not verify_witness([1, -2, 1], 1)
    assert not verify_witness([0, 0], 0)


@pytest.mark.parametrize("m", range(1, 5))
def test_product_witness(m):
    coeffs = product_witness(m)
    assert len(coeffs) == m * (m + 1) // 2 + 1
    assert verify_witness(coeffs, m)


def test_bound_vs_search_table():
    rows = bound_vs_search_table(range(1, 7), [-1, 0, 1], config=_cfg())
    assert [r.n for r in rows] == list(range(1, 7))
    assert rows[-1].mu_star == 3
    for r in rows:
        assert r.within_cap
        assert r.envelope == pytest.approx(2 * math.sqrt(r.n * math.log(2)))
    assert envelope(4) == pytest.approx(2 * math.sqrt(4 * math.log(2)))


def test_degree_one_witness():
    result = search_max_multiplicity(SearchProblem.of(1, [-1, 0, 1]), config=_cfg())
    assert result.mu_max == 1
    assert result.witnesses == ((1, -1),)


def test_exhaustive_search_measures_at_target_point():
    prob = SearchProblem.of(3, [-1, 0, 1])
    assert prob.target_point == 1
    result = exhaustive_search(prob)
    for w in result.witnesses:
        assert verify_witness(w, result.mu_max)
