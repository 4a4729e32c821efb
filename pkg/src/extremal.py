"""Search for restricted-alphabet polynomials with a high-order zero at 1.

Coefficient vectors a_0..a_n are explored depth first in the declared alphabet
order. The multiplicity at 1 is the first j with a nonzero falling-factorial
moment sum_i a_i i^(j), and a prefix a_0..a_k is abandoned once some moment
j < best can no longer be cancelled: the remaining contribution
sum_{i>k} a_i i^(j) lies in [min(A) T, max(A) T] with T = sum_{i>k} i^(j).
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple

from .bounds import NormConstraint, max_mu_for_norm
from .config import AppConfig
from .deltabases import ExpansionVector, multiplicity_from_coeffs
from .errors import InstanceTooLarge, InvalidParameters
from .exactcore import DensePoly, RationalLike, as_rational, coefficients_of_product, multiplicity_at

log = logging.getLogger(__name__)

WITNESS_CAP = 64

Coeffs = Tuple[Fraction, ...]


@dataclass(frozen=True)
class SearchProblem:
    n: int
    alphabet: Tuple[Fraction, ...]
    require_a0_nonzero: bool = True

    def __post_init__(self):
        symbols = []
        for a in self.alphabet:
            a = as_rational(a)
            if a not in symbols:
                symbols.append(a)
        if not symbols:
            raise InvalidParameters("the alphabet is empty")
        if not any(symbols):
            raise InvalidParameters("the alphabet needs a nonzero symbol")
        if self.n < 1:
            raise InvalidParameters("search needs n >= 1")
        object.__setattr__(self, "alphabet", tuple(symbols))

    @classmethod
    def of(cls, n: int, alphabet: Sequence[RationalLike],
           require_a0_nonzero: bool = True) -> "SearchProblem":
        return cls(n, tuple(as_rational(a) for a in alphabet), require_a0_nonzero)

    @property
    def target_point(self) -> Fraction:
        return Fraction(1)

    @property
    def sign_symmetric(self) -> bool:
        return set(self.alphabet) == {-a for a in self.alphabet}

    @property
    def linf_budget(self) -> Fraction:
        """1 + max|a| / min nonzero |a|: the largest possible 1 + max_k |a_k/a_0|."""
        mags = [abs(a) for a in self.alphabet if a]
        return 1 + max(mags) / min(mags)


@dataclass(frozen=True)
class SearchResult:
    mu_max: int
    witnesses: Tuple[Coeffs, ...]
    witness_count: int
    nodes_explored: int
    bound_used: int


@dataclass
class _Partial:
    mu: int = -1
    witnesses: List[Coeffs] = None
    count: int = 0
    nodes: int = 0

    def __post_init__(self):
        if self.witnesses is None:
            self.witnesses = []

    def offer(self, coeffs: Coeffs, mu: int) -> None:
        if mu > self.mu:
            self.mu = mu
            self.witnesses = []
            self.count = 0
        if mu == self.mu:
            self.count += 1
            if len(self.witnesses) < WITNESS_CAP:
                self.witnesses.append(coeffs)


class _Searcher:
    def __init__(self, prob: SearchProblem, prune: bool, max_nodes: int):
        self.n = prob.n
        self.prune = prune
        self.max_nodes = max_nodes
        self.require_a0 = prob.require_a0_nonzero
        self.symmetric = prob.sign_symmetric
        # scale the alphabet to integers; multiplicity is scale invariant
        scale = reduce(lambda acc, a: acc * a.denominator // math.gcd(acc, a.denominator),
                       prob.alphabet, 1)
        self.symbols = [(a, int(a * scale)) for a in prob.alphabet]
        self.lo = min(s for _, s in self.symbols)
        self.hi = max(s for _, s in self.symbols)
        n = self.n
        self.ff = [[math.perm(i, j) for j in range(n + 1)] for i in range(n + 1)]
        # suffix[k][j] = sum_{i>k} i^(j)
        self.suffix = [[sum(self.ff[i][j] for i in range(k + 1, n + 1)) for j in range(n + 1)]
                       for k in range(n + 1)]
        self.moments = [0] * (n + 1)
        self.prefix: List[Fraction] = []
        self.state = _Partial()

    def _choices(self, k: int, seen_nonzero: bool):
        for value, scaled in self.symbols:
            if k == 0 and self.require_a0 and not scaled:
                continue
            if self.symmetric and not seen_nonzero and scaled < 0:
                continue
            yield value, scaled

    def _push(self, k: int, value: Fraction, scaled: int) -> None:
        self.state.nodes += 1
        if self.state.nodes > self.max_nodes:
            raise InstanceTooLarge(f"search exceeded {self.max_nodes} nodes")
        self.prefix.append(value)
        if scaled:
            row = self.ff[k]
            for j in range(k + 1):
                self.moments[j] += scaled * row[j]

    def _pop(self, k: int, scaled: int) -> None:
        self.prefix.pop()
        if scaled:
            row = self.ff[k]
            for j in range(k + 1):
                self.moments[j] -= scaled * row[j]

    def _hopeless(self, k: int) -> bool:
        tail = self.suffix[k]
        for j in range(max(self.state.mu, 0)):
            t = tail[j]
            need = -self.moments[j]
            if need < self.lo * t or need > self.hi * t:
                return True
        return False

    def _leaf(self) -> None:
        for j, m in enumerate(self.moments):
            if m:
                self.state.offer(tuple(self.prefix), j)
                return
        # all moments vanish only for the zero vector, which has no multiplicity

    def _descend(self, k: int, seen_nonzero: bool) -> None:
        for value, scaled in self._choices(k, seen_nonzero):
            self._push(k, value, scaled)
            if k == self.n:
                self._leaf()
            elif not (self.prune and self._hopeless(k)):
                self._descend(k + 1, seen_nonzero or scaled != 0)
            self._pop(k, scaled)

    def run(self, prefix: Sequence[Tuple[Fraction, int]] = ()) -> _Partial:
        seen = False
        for k, (value, scaled) in enumerate(prefix):
            self._push(k, value, scaled)
            seen = seen or scaled != 0
        k = len(prefix)
        if k == self.n + 1:
            self._leaf()
        elif not (k and self.prune and self._hopeless(k - 1)):
            self._descend(k, seen)
        return self.state


def _prefixes(prob: SearchProblem) -> List[Tuple[Tuple[Fraction, int], ...]]:
    searcher = _Searcher(prob, prune=False, max_nodes=1)
    out = []
    for first in searcher._choices(0, False):
        for second in searcher._choices(1, first[1] != 0):
            out.append((first, second))
    return out


def _search_partition(args) -> _Partial:
    prob, prune, max_nodes, prefix = args
    return _Searcher(prob, prune, max_nodes).run(prefix)


def _merge(parts: Iterable[_Partial]) -> _Partial:
    parts = list(parts)
    merged = _Partial(nodes=sum(p.nodes for p in parts))
    merged.mu = max((p.mu for p in parts), default=-1)
    for p in parts:
        if p.mu == merged.mu and p.count:
            merged.count += p.count
            room = WITNESS_CAP - len(merged.witnesses)
            merged.witnesses.extend(p.witnesses[:room])
    return merged


def _a_priori_cap(prob: SearchProblem) -> int:
    return max_mu_for_norm(prob.n, NormConstraint("linf_ratio", prob.linf_budget))


def search_max_multiplicity(prob: SearchProblem, prune: bool = True,
                            config: Optional[AppConfig] = None,
                            workers: Optional[int] = None) -> SearchResult:
    """Exact maximal multiplicity at 1 over the instance, with its witnesses.

    Witnesses are reported up to a global sign when the alphabet is closed
    under negation (the first nonzero coefficient is taken positive).
    """
    cfg = config or AppConfig.load()
    if prob.n > cfg.max_degree:
        raise InstanceTooLarge(f"n={prob.n} exceeds the configured cap {cfg.max_degree}")
    workers = cfg.workers if workers is None else workers
    if workers > 1:
        jobs = [(prob, prune, cfg.max_nodes, prefix) for prefix in _prefixes(prob)]
        log.debug("searching n=%d over %d partitions with %d workers", prob.n, len(jobs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            state = _merge(pool.map(_search_partition, jobs))
        if state.nodes > cfg.max_nodes:
            raise InstanceTooLarge(f"search exceeded {cfg.max_nodes} nodes")
    else:
        state = _Searcher(prob, prune, cfg.max_nodes).run()
    log.debug("n=%d: mu_max=%d after %d nodes", prob.n, state.mu, state.nodes)
    return SearchResult(state.mu, tuple(state.witnesses), state.count, state.nodes,
                        _a_priori_cap(prob))


def exhaustive_search(prob: SearchProblem) -> SearchResult:
    """Plain enumeration with multiplicities from synthetic division."""
    state = _Partial()
    symmetric = prob.sign_symmetric
    for coeffs in itertools.product(prob.alphabet, repeat=prob.n + 1):
        state.nodes += 1
        if prob.require_a0_nonzero and not coeffs[0]:
            continue
        first = next((a for a in coeffs if a), None)
        if first is None or (symmetric and first < 0):
            continue
        state.offer(tuple(coeffs), multiplicity_at(DensePoly(coeffs), prob.target_point))
    return SearchResult(state.mu, tuple(state.witnesses), state.count, state.nodes,
                        _a_priori_cap(prob))


def verify_witness(coeffs: Sequence[RationalLike], claimed_mu: int) -> bool:
    """Check a claimed multiplicity at 1 by moments and by synthetic division."""
    values = tuple(as_rational(c) for c in coeffs)
    if not values or not any(values):
        return False
    by_moments = multiplicity_from_coeffs(ExpansionVector.monomial(values))
    by_division = multiplicity_at(DensePoly(values), 1)
    return by_moments == by_division == claimed_mu


def product_witness(m: int) -> Coeffs:
    """Coefficients of prod_{k=1}^{m} (1 - x^k)."""
    factors = [DensePoly.constant(1) - DensePoly.monomial(k) for k in range(1, m + 1)]
    return coefficients_of_product(factors).coeffs


@dataclass(frozen=True)
class TableRow:
    n: int
    mu_star: int
    cap: int
    envelope: float
    witness_count: int

    @property
    def within_cap(self) -> bool:
        return self.mu_star <= self.cap


def envelope(n: int) -> float:
    """2 sqrt(n ln 2), the asymptotic size of the linf cap."""
    return 2 * math.sqrt(n * math.log(2))


def bound_vs_search_table(n_values: Iterable[int], alphabet: Sequence[RationalLike],
                          config: Optional[AppConfig] = None,
                          prune: bool = True) -> List[TableRow]:
    cfg = config or AppConfig.load()
    rows = []
    for n in n_values:
        prob = SearchProblem.of(n, alphabet)
        result = search_max_multiplicity(prob, prune=prune, config=cfg)
        rows.append(TableRow(n, result.mu_max, result.bound_used, envelope(n),
                             result.witness_count))
    return rows
