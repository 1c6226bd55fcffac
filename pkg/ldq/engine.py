"""
Query execution under full-Web semantics and reachability-based semantics,
terminating (expand, then evaluate once) and streaming (evaluate after
every lookup step, emitting new solutions as they appear).
"""
from __future__ import annotations

import enum
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Optional, Set, Tuple, Union

from .algebra import SolutionSet, SparqlExpression, Valuation, evaluate
from .encoding import sorted_valuations
from .errors import BudgetRequired
from .reachability import (
    UNLIMITED,
    Budget,
    Lookup,
    ReachabilityCriterion,
    Traversal,
    compute_reachable_part,
)
from .rdf import Triple, Uri
from .web import WebOfLinkedData, all_data

_logger = logging.getLogger(__name__)


class Status(str, enum.Enum):
    COMPLETE = "Complete"
    BUDGET_EXHAUSTED = "BudgetExhausted"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ExecutionReport:
    solutions: SolutionSet
    status: Status
    lookups_spent: int
    iterations: int
    part_size: int
    seed_lookups: int = 0
    trace: Tuple[Lookup, ...] = field(default=(), compare=False)

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE


def nontrivial_witness(solutions: Iterable[Valuation]) -> bool:
    """Some solution binds at least one variable"""
    return any(len(mu) > 0 for mu in solutions)


def exec_full_web(web: WebOfLinkedData, expr: SparqlExpression, budget: Budget = UNLIMITED) -> ExecutionReport:
    if web.materializable:
        solutions = evaluate(expr, all_data(web))
        _logger.info("full-web evaluation over %r: %d solutions", web, len(solutions))
        return ExecutionReport(
            solutions=solutions,
            status=Status.COMPLETE,
            lookups_spent=0,
            iterations=1,
            part_size=len(web.document_ids()),
        )
    if budget.unlimited:
        raise BudgetRequired(f"{web!r} is infinite; full-web evaluation needs a lookup budget")

    # Enumerate the namespace prefix; the result is an approximation by construction
    seen: Set[str] = set()
    triples: Set[Triple] = set()
    trace = []
    for uri in itertools.islice(web.namespace(), budget.max_lookups):
        doc_id = web.dereference(uri)
        new = doc_id is not None and doc_id not in seen
        trace.append(Lookup(uri, doc_id, new=new))
        if new:
            seen.add(doc_id)
            triples.update(web.data(doc_id))
    solutions = evaluate(expr, triples)
    _logger.info("full-web approximation over %r: %d lookups, %d solutions", web, len(trace), len(solutions))
    return ExecutionReport(
        solutions=solutions,
        status=Status.BUDGET_EXHAUSTED,
        lookups_spent=len(trace),
        iterations=1,
        part_size=len(seen),
        trace=tuple(trace),
    )


def exec_reach_terminating(
    web: WebOfLinkedData,
    seeds: Iterable[Uri],
    criterion: ReachabilityCriterion,
    expr: SparqlExpression,
    budget: Budget = UNLIMITED,
) -> ExecutionReport:
    """Expand the reachable part, then evaluate once over its data"""
    part = compute_reachable_part(web, seeds, criterion, expr, budget)
    solutions = evaluate(expr, part.triples)
    return ExecutionReport(
        solutions=solutions,
        status=Status.COMPLETE if part.complete else Status.BUDGET_EXHAUSTED,
        lookups_spent=part.lookups_spent,
        iterations=part.lookups_spent,
        part_size=len(part.documents),
        seed_lookups=part.seed_lookups,
        trace=part.trace,
    )


@dataclass(frozen=True)
class SolutionEvent:
    iteration: int
    valuation: Valuation


@dataclass(frozen=True)
class StatusEvent:
    status: Status
    lookups_spent: int
    iterations: int
    part_size: int


StreamEvent = Union[SolutionEvent, StatusEvent]


class SolutionStream:
    """Pull-based stream of solution events ending in one status event"""

    def __init__(self, traversal: Traversal):
        self._traversal = traversal
        self._emitted: Set[Valuation] = set()
        self._events = self._run()
        self.status: Optional[Status] = None
        self.iterations = 0

    def __iter__(self) -> Iterator[StreamEvent]:
        return self

    def __next__(self) -> StreamEvent:
        return next(self._events)

    @property
    def solutions(self) -> FrozenSet[Valuation]:
        return frozenset(self._emitted)

    @property
    def lookups_spent(self) -> int:
        return self._traversal.lookups_spent

    @property
    def part_size(self) -> int:
        return len(self._traversal.documents)

    def _run(self) -> Iterator[StreamEvent]:
        traversal = self._traversal
        expr = traversal.expr
        traversal.seed()
        while True:
            self.iterations += 1
            current = evaluate(expr, traversal.triples)
            fresh = sorted_valuations(current - self._emitted)
            _logger.debug("iteration %d: %d triples, %d new solutions", self.iterations, len(traversal.triples), len(fresh))
            for mu in fresh:
                self._emitted.add(mu)
                yield SolutionEvent(self.iterations, mu)
            if not traversal.pending:
                self.status = Status.COMPLETE
                break
            if traversal.exhausted:
                self.status = Status.BUDGET_EXHAUSTED
                break
            traversal.advance()
        _logger.info("stream finished: %s after %d iterations", self.status, self.iterations)
        yield StatusEvent(self.status, self.lookups_spent, self.iterations, self.part_size)

    def report(self) -> ExecutionReport:
        """Drain the stream and summarize it"""
        for _ in self:
            pass
        traversal = self._traversal
        return ExecutionReport(
            solutions=self.solutions,
            status=self.status,
            lookups_spent=traversal.lookups_spent,
            iterations=self.iterations,
            part_size=self.part_size,
            seed_lookups=traversal.seed_lookups,
            trace=tuple(traversal.trace),
        )


def exec_reach_streaming(
    web: WebOfLinkedData,
    seeds: Iterable[Uri],
    criterion: ReachabilityCriterion,
    expr: SparqlExpression,
    budget: Budget = UNLIMITED,
) -> SolutionStream:
    return SolutionStream(Traversal(web, seeds, criterion, expr, budget))


class LinkedDataQuery(ABC):
    """A Linked Data query: a function from webs to solution sets"""

    def __init__(self, expr: SparqlExpression):
        self.expr = expr

    @abstractmethod
    def __call__(self, web: WebOfLinkedData) -> SolutionSet:
        ...


class FullWebQuery(LinkedDataQuery):
    def __call__(self, web: WebOfLinkedData) -> SolutionSet:
        return evaluate(self.expr, all_data(web))


class ReachQuery(LinkedDataQuery):
    """Terminates only on webs whose reachable part is finite"""

    def __init__(self, expr: SparqlExpression, seeds: Iterable[Uri], criterion: ReachabilityCriterion):
        super().__init__(expr)
        self.seeds = frozenset(seeds)
        self.criterion = criterion

    def __call__(self, web: WebOfLinkedData) -> SolutionSet:
        part = compute_reachable_part(web, self.seeds, self.criterion, self.expr)
        return evaluate(self.expr, part.triples)
