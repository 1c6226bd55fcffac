"""
Brute-force evaluation used as a test oracle.

Decides membership of every candidate valuation directly from the
definition of the evaluation function, without using the solution-set
operators of `ldq.algebra`.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Sequence

from .algebra import (
    And,
    Filter,
    Opt,
    Pattern,
    SolutionSet,
    SparqlExpression,
    Union,
    Valuation,
    satisfies,
    terms_of_graph,
    vars_of,
)
from .errors import TooLarge
from .rdf import Term, Triple, Variable

MAX_CANDIDATES = 10 ** 6

_UNBOUND = object()


def _partial_valuations(variables: Sequence[Variable], terms: Sequence[Term]) -> Iterator[Valuation]:
    for choice in itertools.product((_UNBOUND, *terms), repeat=len(variables)):
        yield Valuation((v, t) for v, t in zip(variables, choice) if t is not _UNBOUND)


def _subsets(items: Sequence[Variable]) -> Iterator[FrozenSet[Variable]]:
    for size in range(len(items) + 1):
        for combo in itertools.combinations(items, size):
            yield frozenset(combo)


class _Oracle:
    def __init__(self, graph: FrozenSet[Triple]):
        self.graph = graph
        self.terms = sorted(terms_of_graph(graph), key=lambda t: t.sort_key)
        self.holds = lru_cache(maxsize=None)(self._holds)
        self.solutions = lru_cache(maxsize=None)(self._solutions)

    def candidates(self, expr: SparqlExpression) -> List[Valuation]:
        variables = sorted(vars_of(expr), key=lambda v: v.name)
        return list(_partial_valuations(variables, self.terms))

    def _solutions(self, expr: SparqlExpression) -> FrozenSet[Valuation]:
        return frozenset(mu for mu in self.candidates(expr) if self.holds(expr, mu))

    def _holds(self, expr: SparqlExpression, mu: Valuation) -> bool:
        """Is mu a member of the evaluation of expr over the graph?"""
        if not mu.domain <= vars_of(expr):
            return False
        if isinstance(expr, Pattern):
            if mu.domain != expr.tp.variables:
                return False
            image = tuple(mu[x] if isinstance(x, Variable) else x for x in expr.tp)
            return any(tuple(t) == image for t in self.graph)
        if isinstance(expr, Union):
            return self.holds(expr.left, mu) or self.holds(expr.right, mu)
        if isinstance(expr, Filter):
            return self.holds(expr.expr, mu) and satisfies(mu, expr.cond)
        if isinstance(expr, And):
            return self._splits(expr, mu)
        if isinstance(expr, Opt):
            if self._splits(expr, mu):
                return True
            if not self.holds(expr.left, mu):
                return False
            # no compatible solution of the right-hand side may exist
            for other in self.solutions(expr.right):
                if all(mu[v] == other[v] for v in mu.domain & other.domain):
                    return False
            return True
        raise TypeError(f"not a SPARQL expression: {expr!r}")

    def _splits(self, expr, mu: Valuation) -> bool:
        """mu = mu1 ∪ mu2 with mu1 a left solution and mu2 a right solution"""
        domain = sorted(mu.domain, key=lambda v: v.name)
        left_vars = vars_of(expr.left)
        right_vars = vars_of(expr.right)
        for left_dom in _subsets([v for v in domain if v in left_vars]):
            rest = mu.domain - left_dom
            if not rest <= right_vars:
                continue
            optional = [v for v in domain if v in left_dom and v in right_vars]
            for extra in _subsets(optional):
                right_dom = rest | extra
                mu1 = Valuation((v, mu[v]) for v in left_dom)
                mu2 = Valuation((v, mu[v]) for v in right_dom)
                if self.holds(expr.left, mu1) and self.holds(expr.right, mu2):
                    return True
        return False


def brute_force_eval(expr: SparqlExpression, graph: Iterable[Triple]) -> SolutionSet:
    graph = frozenset(graph)
    terms = terms_of_graph(graph)
    variables = vars_of(expr)
    # every variable is either unbound or mapped into terms(G)
    count = (len(terms) + 1) ** len(variables)
    if count > MAX_CANDIDATES:
        raise TooLarge(count, MAX_CANDIDATES)
    return _Oracle(graph).solutions(expr)
