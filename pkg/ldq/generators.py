"""
Procedurally generated webs. Documents are computed on request by a pure
rule over the web's URI namespace; infinite webs are not materializable.
"""
from __future__ import annotations

import itertools
import math
import re
from typing import FrozenSet, Iterator, Optional, Union

from .errors import UnknownDocument
from .rdf import Triple, Uri
from .web import DocumentId, WebOfLinkedData

INFINITE = math.inf

Size = Union[int, float]


class GeneratorWeb(WebOfLinkedData):
    """Web over URIs `<prefix:K>` (1 <= K <= n) with adoc(u_K) = dK"""

    prefix: str = ""

    def __init__(self, n: Size = INFINITE):
        if n != INFINITE and (not isinstance(n, int) or n < 1):
            raise ValueError(f"web size must be a positive integer or INFINITE, got {n!r}")
        self.n = n
        self.materializable = n != INFINITE
        self._uri = re.compile(rf"{re.escape(self.prefix)}:([1-9][0-9]*)")

    @property
    def name(self) -> str:
        size = "inf" if self.n == INFINITE else str(self.n)
        return f"gen:{self.prefix}:{size}"

    def uri(self, k: int) -> Uri:
        return Uri(f"{self.prefix}:{k}")

    def index_of(self, uri: Uri) -> Optional[int]:
        match = self._uri.fullmatch(uri.text)
        if match is None:
            return None
        k = int(match.group(1))
        return k if k <= self.n else None

    def dereference(self, uri: Uri) -> Optional[DocumentId]:
        k = self.index_of(uri)
        return None if k is None else f"d{k}"

    def _doc_index(self, doc_id: DocumentId) -> int:
        if doc_id.startswith("d") and doc_id[1:].isdigit() and not doc_id[1:].startswith("0"):
            k = int(doc_id[1:])
            if 1 <= k <= self.n:
                return k
        raise UnknownDocument(doc_id)

    def data(self, doc_id: DocumentId) -> FrozenSet[Triple]:
        return self.rule(self._doc_index(doc_id))

    def rule(self, k: int) -> FrozenSet[Triple]:
        raise NotImplementedError

    def namespace(self) -> Iterator[Uri]:
        indexes = itertools.count(1) if self.n == INFINITE else range(1, self.n + 1)
        return (self.uri(k) for k in indexes)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class NumberWeb(GeneratorWeb):
    """dK holds (num:K, num:succ, num:K+1) for every natural number K >= 1"""

    prefix = "num"

    def __init__(self):
        super().__init__(INFINITE)
        self.succ = Uri("num:succ")

    @property
    def name(self) -> str:
        return "gen:numbers"

    def rule(self, k: int) -> FrozenSet[Triple]:
        return frozenset({Triple(self.uri(k), self.succ, self.uri(k + 1))})


class ChainWeb(GeneratorWeb):
    prefix = "chain"

    def __init__(self, n: Size = INFINITE):
        super().__init__(n)
        self.next = Uri("chain:next")

    def rule(self, k: int) -> FrozenSet[Triple]:
        if k == self.n:
            return frozenset()
        return frozenset({Triple(self.uri(k), self.next, self.uri(k + 1))})


class StarWeb(GeneratorWeb):
    prefix = "star"

    def __init__(self, n: Size = INFINITE):
        super().__init__(n)
        self.first = Uri("star:first")

    def rule(self, k: int) -> FrozenSet[Triple]:
        return frozenset({Triple(self.uri(k), self.first, self.uri(1))})


def number_web() -> NumberWeb:
    return NumberWeb()


def chain_web(n: Size = INFINITE) -> ChainWeb:
    return ChainWeb(n)


def star_web(n: Size = INFINITE) -> StarWeb:
    return StarWeb(n)


def parse_size(text: str) -> Size:
    if text == "inf":
        return INFINITE
    if not text.isdigit() or int(text) < 1:
        raise ValueError(f"expected a positive integer or 'inf', got {text!r}")
    return int(text)


def generator_from_selector(selector: str) -> GeneratorWeb:
    """`gen:numbers`, `gen:chain:N|inf` or `gen:star:N|inf`"""
    parts = selector.split(":")
    if parts == ["gen", "numbers"]:
        return number_web()
    if len(parts) == 3 and parts[0] == "gen" and parts[1] in ("chain", "star"):
        size = parse_size(parts[2])
        return chain_web(size) if parts[1] == "chain" else star_web(size)
    raise ValueError(f"unknown generator selector {selector!r}")
