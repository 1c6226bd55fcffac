"""
Core fragment of SPARQL: expressions, filter conditions, valuations and the
set-semantics evaluation over a finite set of triples.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import AbstractSet, Dict, FrozenSet, Iterable, Iterator, Optional, Tuple

from .errors import BadTerm, IllegalPosition, UnboundVariable
from .rdf import Literal, Term, Triple, TriplePattern, Uri, Variable


# Filter conditions

@dataclass(frozen=True, slots=True)
class Eq:
    var: Variable
    value: Uri | Literal


@dataclass(frozen=True, slots=True)
class EqVar:
    left: Variable
    right: Variable


@dataclass(frozen=True, slots=True)
class Bound:
    var: Variable


@dataclass(frozen=True, slots=True)
class Not:
    cond: "FilterCondition"


@dataclass(frozen=True, slots=True)
class CondAnd:
    left: "FilterCondition"
    right: "FilterCondition"


@dataclass(frozen=True, slots=True)
class CondOr:
    left: "FilterCondition"
    right: "FilterCondition"


FilterCondition = Eq | EqVar | Bound | Not | CondAnd | CondOr


# Expressions

@dataclass(frozen=True, slots=True)
class Pattern:
    tp: TriplePattern


@dataclass(frozen=True, slots=True)
class And:
    left: "SparqlExpression"
    right: "SparqlExpression"


@dataclass(frozen=True, slots=True)
class Union:
    left: "SparqlExpression"
    right: "SparqlExpression"


@dataclass(frozen=True, slots=True)
class Opt:
    left: "SparqlExpression"
    right: "SparqlExpression"


@dataclass(frozen=True, slots=True)
class Filter:
    expr: "SparqlExpression"
    cond: FilterCondition


SparqlExpression = Pattern | And | Union | Opt | Filter


class Valuation(Mapping):
    """Immutable partial mapping from variables to terms"""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping | Iterable[Tuple[Variable, Term]] = ()):
        self._map: Dict[Variable, Term] = dict(bindings)
        self._hash: Optional[int] = None

    def __getitem__(self, var: Variable) -> Term:
        return self._map[var]

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        if isinstance(other, Valuation):
            return self._map == other._map
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    @property
    def domain(self) -> FrozenSet[Variable]:
        return frozenset(self._map)

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {t}" for v, t in sorted(self._map.items(), key=lambda kv: kv[0].name))
        return f"Valuation({{{inner}}})"


EMPTY = Valuation()

SolutionSet = FrozenSet[Valuation]


def vars_of(expr: SparqlExpression) -> FrozenSet[Variable]:
    """Variables of all triple patterns in expr; filter-only variables do not count"""
    if isinstance(expr, Pattern):
        return expr.tp.variables
    if isinstance(expr, Filter):
        return vars_of(expr.expr)
    return vars_of(expr.left) | vars_of(expr.right)


def patterns_of(expr: SparqlExpression) -> Iterator[TriplePattern]:
    if isinstance(expr, Pattern):
        yield expr.tp
    elif isinstance(expr, Filter):
        yield from patterns_of(expr.expr)
    else:
        yield from patterns_of(expr.left)
        yield from patterns_of(expr.right)


def is_opt_free(expr: SparqlExpression) -> bool:
    """No OPT anywhere in expr; sufficient for monotonicity"""
    if isinstance(expr, Opt):
        return False
    if isinstance(expr, Pattern):
        return True
    if isinstance(expr, Filter):
        return is_opt_free(expr.expr)
    return is_opt_free(expr.left) and is_opt_free(expr.right)


def terms_of_graph(graph: Iterable[Triple]) -> FrozenSet[Term]:
    return frozenset(term for t in graph for term in t)


def apply(mu: Mapping, tp: TriplePattern) -> Triple:
    """mu[tp]: substitute every variable of tp by its image under mu"""
    substituted = []
    for x in tp:
        if isinstance(x, Variable):
            if x not in mu:
                raise UnboundVariable(x.name)
            x = mu[x]
        substituted.append(x)
    try:
        return Triple(*substituted)
    except BadTerm as exc:
        raise IllegalPosition(str(exc)) from None


def satisfies(mu: Mapping, cond: FilterCondition) -> bool:
    # Unbound variables make atoms false (two-valued semantics)
    if isinstance(cond, Eq):
        return cond.var in mu and mu[cond.var] == cond.value
    if isinstance(cond, EqVar):
        return cond.left in mu and cond.right in mu and mu[cond.left] == mu[cond.right]
    if isinstance(cond, Bound):
        return cond.var in mu
    if isinstance(cond, Not):
        return not satisfies(mu, cond.cond)
    if isinstance(cond, CondAnd):
        return satisfies(mu, cond.left) and satisfies(mu, cond.right)
    if isinstance(cond, CondOr):
        return satisfies(mu, cond.left) or satisfies(mu, cond.right)
    raise TypeError(f"not a filter condition: {cond!r}")


def compatible(left: Mapping, right: Mapping) -> bool:
    if len(right) < len(left):
        left, right = right, left
    return all(var not in right or right[var] == term for var, term in left.items())


def merge(left: Mapping, right: Mapping) -> Valuation:
    bindings = dict(left)
    bindings.update(right)
    return Valuation(bindings)


def restrict(mu: Mapping, variables: AbstractSet[Variable]) -> Valuation:
    return Valuation((v, t) for v, t in mu.items() if v in variables)


def join(a: AbstractSet[Valuation], b: AbstractSet[Valuation]) -> SolutionSet:
    return frozenset(merge(l, r) for l in a for r in b if compatible(l, r))


def union(a: AbstractSet[Valuation], b: AbstractSet[Valuation]) -> SolutionSet:
    return frozenset(a) | frozenset(b)


def minus(a: AbstractSet[Valuation], b: AbstractSet[Valuation]) -> SolutionSet:
    return frozenset(l for l in a if not any(compatible(l, r) for r in b))


def left_outer_join(a: AbstractSet[Valuation], b: AbstractSet[Valuation]) -> SolutionSet:
    return join(a, b) | minus(a, b)


def select(cond: FilterCondition, a: AbstractSet[Valuation]) -> SolutionSet:
    return frozenset(mu for mu in a if satisfies(mu, cond))


def _match_pattern(tp: TriplePattern, t: Triple) -> Optional[Valuation]:
    bindings: Dict[Variable, Term] = {}
    for want, have in zip(tp, t):
        if isinstance(want, Variable):
            seen = bindings.get(want)
            if seen is not None and seen != have:
                return None
            bindings[want] = have
        elif want != have:
            return None
    return Valuation(bindings)


def _eval(expr: SparqlExpression, graph: FrozenSet[Triple]) -> SolutionSet:
    if isinstance(expr, Pattern):
        found = (_match_pattern(expr.tp, t) for t in graph)
        return frozenset(mu for mu in found if mu is not None)
    if isinstance(expr, And):
        return join(_eval(expr.left, graph), _eval(expr.right, graph))
    if isinstance(expr, Union):
        return union(_eval(expr.left, graph), _eval(expr.right, graph))
    if isinstance(expr, Opt):
        return left_outer_join(_eval(expr.left, graph), _eval(expr.right, graph))
    if isinstance(expr, Filter):
        return select(expr.cond, _eval(expr.expr, graph))
    raise TypeError(f"not a SPARQL expression: {expr!r}")


def evaluate(expr: SparqlExpression, graph: Iterable[Triple]) -> SolutionSet:
    """[[P]]_G over a finite set of triples"""
    return _eval(expr, frozenset(graph))
