"""
Reachability criteria and the budgeted computation of reachable parts.

The frontier expands links breadth-first in discovery order: documents in
retrieval order, triples of a document in triple order, positions s, p, o.
"""
from __future__ import annotations

import enum
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Deque, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from .algebra import SparqlExpression, patterns_of
from .errors import CriterionError, Unsupported
from .rdf import Triple, TriplePattern, Uri, matches, parse_term, parse_triple_line, sorted_triples
from .web import DocumentId, WebOfLinkedData

_logger = logging.getLogger(__name__)


class ReachabilityCriterion(ABC):
    name: str = ""

    @abstractmethod
    def __call__(self, t: Triple, u: Uri, expr: SparqlExpression) -> bool:
        ...


@dataclass(frozen=True)
class AllCriterion(ReachabilityCriterion):
    name = "all"

    def __call__(self, t, u, expr) -> bool:
        return True


@dataclass(frozen=True)
class NoneCriterion(ReachabilityCriterion):
    name = "none"

    def __call__(self, t, u, expr) -> bool:
        return False


@lru_cache(maxsize=256)
def _patterns(expr: SparqlExpression) -> Tuple[TriplePattern, ...]:
    return tuple(patterns_of(expr))


@dataclass(frozen=True)
class MatchCriterion(ReachabilityCriterion):
    """Follow links in triples that match some triple pattern of the query"""

    name = "match"

    def __call__(self, t, u, expr) -> bool:
        return any(matches(t, tp) for tp in _patterns(expr))


@dataclass(frozen=True)
class ConstU(ReachabilityCriterion):
    uris: FrozenSet[Uri] = frozenset()
    name = "u"

    def __call__(self, t, u, expr) -> bool:
        return u in self.uris


@dataclass(frozen=True)
class ConstT(ReachabilityCriterion):
    triples: FrozenSet[Triple] = frozenset()
    name = "t"

    def __call__(self, t, u, expr) -> bool:
        return t in self.triples


@dataclass(frozen=True)
class ConstAnd(ReachabilityCriterion):
    uris: FrozenSet[Uri] = frozenset()
    triples: FrozenSet[Triple] = frozenset()
    name = "and"

    def __call__(self, t, u, expr) -> bool:
        return u in self.uris and t in self.triples


@dataclass(frozen=True)
class ConstOr(ReachabilityCriterion):
    uris: FrozenSet[Uri] = frozenset()
    triples: FrozenSet[Triple] = frozenset()
    name = "or"

    def __call__(self, t, u, expr) -> bool:
        return u in self.uris or t in self.triples


C_ALL = AllCriterion()
C_NONE = NoneCriterion()
C_MATCH = MatchCriterion()

ConstantCriterion = Union[NoneCriterion, ConstU, ConstT, ConstAnd, ConstOr]
_CONSTANT = (NoneCriterion, ConstU, ConstT, ConstAnd, ConstOr)


def criterion_eval(c: ReachabilityCriterion, t: Triple, u: Uri, expr: SparqlExpression) -> bool:
    return c(t, u, expr)


def _require_constant(c: ReachabilityCriterion) -> None:
    if not isinstance(c, _CONSTANT):
        raise Unsupported(f"only constant criteria are supported here, not {c!r}")


def accepts(c: ReachabilityCriterion, t: Triple, u: Uri) -> bool:
    """Decision of a constant criterion, which never looks at the query"""
    _require_constant(c)
    return c(t, u, None)


class Comparison(enum.Enum):
    INCOMPARABLE = "incomparable"


INCOMPARABLE = Comparison.INCOMPARABLE


def _accepts_nothing(c: ConstantCriterion) -> bool:
    if isinstance(c, NoneCriterion):
        return True
    if isinstance(c, ConstU):
        return not c.uris
    if isinstance(c, ConstT):
        return not c.triples
    if isinstance(c, ConstAnd):
        return not c.uris or not c.triples
    return not c.uris and not c.triples


def _subsumed(a: ConstantCriterion, b: ConstantCriterion) -> bool:
    """Every (t, u) accepted by a is accepted by b; the universe is infinite"""
    if _accepts_nothing(a):
        return True
    if _accepts_nothing(b):
        return False
    if isinstance(a, ConstU):
        return isinstance(b, (ConstU, ConstOr)) and a.uris <= b.uris
    if isinstance(a, ConstT):
        return isinstance(b, (ConstT, ConstOr)) and a.triples <= b.triples
    if isinstance(a, ConstAnd):
        if isinstance(b, ConstU):
            return a.uris <= b.uris
        if isinstance(b, ConstT):
            return a.triples <= b.triples
        if isinstance(b, ConstAnd):
            return a.uris <= b.uris and a.triples <= b.triples
        return a.uris <= b.uris or a.triples <= b.triples
    # a is a nonempty ConstOr
    if isinstance(b, ConstU):
        return not a.triples and a.uris <= b.uris
    if isinstance(b, ConstT):
        return not a.uris and a.triples <= b.triples
    if isinstance(b, ConstOr):
        return a.uris <= b.uris and a.triples <= b.triples
    return False


def less_restrictive_constant(c1: ReachabilityCriterion, c2: ReachabilityCriterion) -> Union[bool, Comparison]:
    """
    True if c1 is strictly less restrictive than c2, False if c2 is, else
    INCOMPARABLE. Criteria accepting exactly the same (triple, uri) pairs are
    INCOMPARABLE too: neither is strictly less restrictive.
    """
    _require_constant(c1)
    _require_constant(c2)
    c2_in_c1 = _subsumed(c2, c1)
    c1_in_c2 = _subsumed(c1, c2)
    if c2_in_c1 and not c1_in_c2:
        return True
    if c1_in_c2 and not c2_in_c1:
        return False
    return INCOMPARABLE


@dataclass(frozen=True)
class Budget:
    max_lookups: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_lookups is not None and self.max_lookups < 1:
            raise ValueError(f"max_lookups must be positive, got {self.max_lookups}")

    @property
    def unlimited(self) -> bool:
        return self.max_lookups is None

    def allows(self, spent: int) -> bool:
        return self.max_lookups is None or spent < self.max_lookups

    def __str__(self) -> str:
        return "unlimited" if self.max_lookups is None else str(self.max_lookups)


UNLIMITED = Budget()


@dataclass(frozen=True)
class Lookup:
    uri: Uri
    doc_id: Optional[DocumentId]
    seed: bool = False
    new: bool = False

    @property
    def broken(self) -> bool:
        return self.doc_id is None


@dataclass(frozen=True)
class ReachablePart:
    documents: Tuple[Tuple[Uri, DocumentId], ...]
    triples: FrozenSet[Triple]
    complete: bool
    lookups_spent: int
    seed_lookups: int = 0
    trace: Tuple[Lookup, ...] = field(default=(), compare=False)

    @property
    def doc_ids(self) -> List[DocumentId]:
        return [doc_id for _, doc_id in self.documents]


class Traversal:
    """Link-traversal frontier over one web for one (seeds, criterion, query)"""

    def __init__(
        self,
        web: WebOfLinkedData,
        seeds: Iterable[Uri],
        criterion: ReachabilityCriterion,
        expr: SparqlExpression,
        budget: Budget = UNLIMITED,
    ):
        self.web = web
        self.seeds = sorted(set(seeds), key=lambda u: u.sort_key)
        self.criterion = criterion
        self.expr = expr
        self.budget = budget
        self.documents: List[Tuple[Uri, DocumentId]] = []
        self.trace: List[Lookup] = []
        self.lookups_spent = 0
        self.seed_lookups = 0
        self._doc_ids: Set[DocumentId] = set()
        self._triples: Set[Triple] = set()
        self._looked_up: Set[Uri] = set()
        self._queued: Set[Uri] = set()
        self._queue: Deque[Uri] = deque()

    @property
    def triples(self) -> FrozenSet[Triple]:
        return frozenset(self._triples)

    @property
    def pending(self) -> bool:
        return bool(self._queue)

    @property
    def exhausted(self) -> bool:
        return not self.budget.allows(self.lookups_spent)

    def seed(self) -> None:
        # seeds count as looked up before any of them is dereferenced
        self._looked_up.update(self.seeds)
        for uri in self.seeds:
            self.seed_lookups += 1
            self._lookup(uri, seed=True)

    def step(self) -> Lookup:
        """Dereference the next admissible link"""
        uri = self._queue.popleft()
        self.lookups_spent += 1
        self._looked_up.add(uri)
        return self._lookup(uri, seed=False)

    def advance(self) -> bool:
        """Look up links until one yields a document not retrieved before"""
        while self.pending and not self.exhausted:
            if self.step().new:
                return True
        return False

    def run(self) -> None:
        while self.pending and not self.exhausted:
            self.step()

    def _lookup(self, uri: Uri, seed: bool) -> Lookup:
        doc_id = self.web.dereference(uri)
        new = doc_id is not None and doc_id not in self._doc_ids
        lookup = Lookup(uri, doc_id, seed=seed, new=new)
        self.trace.append(lookup)
        _logger.debug("lookup %s -> %s%s", uri, doc_id or "broken", "" if new or doc_id is None else " (known)")
        if new:
            triples = self.web.data(doc_id)
            self._doc_ids.add(doc_id)
            self.documents.append((uri, doc_id))
            self._triples.update(triples)
            self._scan(triples)
        return lookup

    def _scan(self, triples: Iterable[Triple]) -> None:
        for t in sorted_triples(triples):
            for term in (t.s, t.p, t.o):
                if (
                    isinstance(term, Uri)
                    and term not in self._looked_up
                    and term not in self._queued
                    and self.criterion(t, term, self.expr)
                ):
                    self._queued.add(term)
                    self._queue.append(term)

    def part(self) -> ReachablePart:
        return ReachablePart(
            documents=tuple(self.documents),
            triples=self.triples,
            complete=not self.pending,
            lookups_spent=self.lookups_spent,
            seed_lookups=self.seed_lookups,
            trace=tuple(self.trace),
        )


def compute_reachable_part(
    web: WebOfLinkedData,
    seeds: Iterable[Uri],
    criterion: ReachabilityCriterion,
    expr: SparqlExpression,
    budget: Budget = UNLIMITED,
) -> ReachablePart:
    traversal = Traversal(web, seeds, criterion, expr, budget)
    traversal.seed()
    traversal.run()
    part = traversal.part()
    _logger.info(
        "reachable part: %d documents, %d lookups, complete=%s",
        len(part.documents), part.lookups_spent, part.complete,
    )
    return part


def _content_lines(path: Union[str, Path]) -> Iterable[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CriterionError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def load_uri_set(path: Union[str, Path]) -> FrozenSet[Uri]:
    uris = set()
    for line in _content_lines(path):
        term = parse_term(line)
        if not isinstance(term, Uri):
            raise CriterionError(f"{path}: expected a URI, found {line!r}")
        uris.add(term)
    return frozenset(uris)


def load_triple_set(path: Union[str, Path]) -> FrozenSet[Triple]:
    return frozenset(parse_triple_line(line) for line in _content_lines(path))


def criterion_from_selector(selector: str) -> ReachabilityCriterion:
    """all | none | match | u:FILE | t:FILE | and:UFILE,TFILE | or:UFILE,TFILE"""
    named = {"all": C_ALL, "none": C_NONE, "match": C_MATCH}
    if selector in named:
        return named[selector]
    kind, sep, arg = selector.partition(":")
    if not sep or not arg:
        raise CriterionError(f"unknown criterion {selector!r}")
    if kind == "u":
        return ConstU(load_uri_set(arg))
    if kind == "t":
        return ConstT(load_triple_set(arg))
    if kind in ("and", "or"):
        ufile, comma, tfile = arg.partition(",")
        if not comma or not ufile or not tfile:
            raise CriterionError(f"criterion {kind} needs two files: {kind}:UFILE,TFILE")
        build = ConstAnd if kind == "and" else ConstOr
        return build(load_uri_set(ufile), load_triple_set(tfile))
    raise CriterionError(f"unknown criterion {selector!r}")
