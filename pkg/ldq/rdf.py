"""
RDF terms, triples and triple patterns, their total order and the textual
term syntax (`<uri>`, `_:doc/label`, `"literal"`, `?name`).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple, Union

from .errors import BadTerm, ParseError

VARIABLE_NAME = re.compile(r"[A-Za-z0-9_]+")
BLANK_LABEL = re.compile(r"[A-Za-z0-9_.\-]+")
DOC_ID = re.compile(r"[^\s<>\"]+")
_BLANK_BODY = re.compile(r"[^\s<>\"(),]+")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}

# Kind rank for cross-kind ordering: URIs < blank nodes < literals
_URI_RANK, _BLANK_RANK, _LITERAL_RANK = 0, 1, 2


@dataclass(frozen=True, slots=True)
class Uri:
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise BadTerm("URI text must be nonempty")
        if any(ch in self.text for ch in "<>\n\r\t"):
            raise BadTerm(f"URI text {self.text!r} contains a forbidden character")

    @property
    def sort_key(self) -> Tuple[int, bytes]:
        return (_URI_RANK, self.text.encode("utf-8"))

    def __str__(self) -> str:
        return f"<{self.text}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node; identity is the pair (document, label)"""

    doc: str
    label: str

    def __post_init__(self) -> None:
        if not DOC_ID.fullmatch(self.doc or ""):
            raise BadTerm(f"invalid document id {self.doc!r} for blank node")
        if not BLANK_LABEL.fullmatch(self.label or ""):
            raise BadTerm(f"invalid blank node label {self.label!r}")

    @property
    def sort_key(self) -> Tuple[int, bytes]:
        return (_BLANK_RANK, f"{self.doc}/{self.label}".encode("utf-8"))

    def __str__(self) -> str:
        return f"_:{self.doc}/{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    text: str

    @property
    def sort_key(self) -> Tuple[int, bytes]:
        return (_LITERAL_RANK, self.text.encode("utf-8"))

    def __str__(self) -> str:
        return '"' + "".join(_ESCAPES.get(ch, ch) for ch in self.text) + '"'


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not VARIABLE_NAME.fullmatch(self.name or ""):
            raise BadTerm(f"invalid variable name {self.name!r}")

    def __str__(self) -> str:
        return f"?{self.name}"


Term = Union[Uri, BlankNode, Literal]
PatternTerm = Union[Uri, Literal, Variable]


@dataclass(frozen=True, slots=True)
class Triple:
    s: Union[Uri, BlankNode]
    p: Uri
    o: Term

    def __post_init__(self) -> None:
        if not isinstance(self.s, (Uri, BlankNode)):
            raise BadTerm(f"triple subject must be a URI or blank node, got {self.s}")
        if not isinstance(self.p, Uri):
            raise BadTerm(f"triple predicate must be a URI, got {self.p}")
        if not isinstance(self.o, (Uri, BlankNode, Literal)):
            raise BadTerm(f"triple object must be a term, got {self.o}")

    @property
    def sort_key(self) -> Tuple[Tuple[int, bytes], ...]:
        return (self.s.sort_key, self.p.sort_key, self.o.sort_key)

    def __iter__(self):
        return iter((self.s, self.p, self.o))

    def __str__(self) -> str:
        return f"{self.s} {self.p} {self.o}"


@dataclass(frozen=True, slots=True)
class TriplePattern:
    s: Union[Uri, Variable]
    p: Union[Uri, Variable]
    o: PatternTerm

    def __post_init__(self) -> None:
        if not isinstance(self.s, (Uri, Variable)):
            raise BadTerm(f"pattern subject must be a URI or variable, got {self.s}")
        if not isinstance(self.p, (Uri, Variable)):
            raise BadTerm(f"pattern predicate must be a URI or variable, got {self.p}")
        if not isinstance(self.o, (Uri, Literal, Variable)):
            raise BadTerm(f"pattern object must be a URI, literal or variable, got {self.o}")

    def __iter__(self):
        return iter((self.s, self.p, self.o))

    @property
    def variables(self) -> FrozenSet[Variable]:
        return frozenset(x for x in self if isinstance(x, Variable))

    def __str__(self) -> str:
        return f"({self.s} {self.p} {self.o})"


def terms_of(t: Triple) -> FrozenSet[Term]:
    return frozenset((t.s, t.p, t.o))


def ids_of(t: Triple) -> FrozenSet[Uri]:
    return frozenset(x for x in (t.s, t.p, t.o) if isinstance(x, Uri))


def matches(t: Triple, tp: TriplePattern) -> bool:
    """True iff every non-variable position of tp equals the triple's position"""
    return all(
        isinstance(want, Variable) or want == have
        for want, have in zip(tp, t)
    )


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def term_compare(a: Term, b: Term) -> int:
    """-1, 0 or 1; kind rank first, then byte-lexicographic canonical text"""
    return _cmp(a.sort_key, b.sort_key)


def triple_compare(a: Triple, b: Triple) -> int:
    return _cmp(a.sort_key, b.sort_key)


def sorted_triples(triples: Iterable[Triple]):
    return sorted(triples, key=lambda t: t.sort_key)


def _scan_literal(text: str, pos: int) -> Tuple[Literal, int]:
    start = pos
    pos += 1
    chars = []
    while pos < len(text):
        ch = text[pos]
        if ch == '"':
            return Literal("".join(chars)), pos + 1
        if ch == "\\":
            if pos + 1 >= len(text):
                break
            esc = text[pos + 1]
            if esc not in _UNESCAPES:
                raise ParseError(pos, "escape sequence", repr("\\" + esc))
            chars.append(_UNESCAPES[esc])
            pos += 2
            continue
        chars.append(ch)
        pos += 1
    raise ParseError(len(text), "closing '\"' of literal started at %d" % start, "end of input")


def scan_term(
    text: str,
    pos: int,
    doc_scope: Optional[str] = None,
    allow_variables: bool = True,
    allow_blanks: bool = True,
):
    """Read one term starting at `pos`; returns (term, position after it)"""
    if pos >= len(text):
        raise ParseError(len(text), "term", "end of input")
    ch = text[pos]
    if ch == "<":
        end = text.find(">", pos + 1)
        if end == -1:
            raise ParseError(len(text), "'>'", "end of input")
        try:
            return Uri(text[pos + 1:end]), end + 1
        except BadTerm:
            raise ParseError(pos, "URI", repr(text[pos:end + 1])) from None
    if ch == '"':
        return _scan_literal(text, pos)
    if ch == "?":
        match = VARIABLE_NAME.match(text, pos + 1)
        if not allow_variables:
            raise ParseError(pos, "URI, blank node or literal", "variable")
        if not match:
            raise ParseError(pos + 1, "variable name", _found(text, pos + 1))
        return Variable(match.group(0)), match.end()
    if text.startswith("_:", pos):
        if not allow_blanks:
            raise ParseError(pos, "URI, literal or variable", "blank node")
        match = _BLANK_BODY.match(text, pos + 2)
        if not match:
            raise ParseError(pos + 2, "blank node label", _found(text, pos + 2))
        body = match.group(0)
        doc, sep, label = body.rpartition("/")
        if not sep:
            doc = doc_scope
        if doc is None:
            raise ParseError(pos, "document-scoped blank node '_:doc/label'", repr("_:" + body))
        try:
            return BlankNode(doc, label), match.end()
        except BadTerm:
            raise ParseError(pos, "blank node", repr("_:" + body)) from None
    raise ParseError(pos, "term", _found(text, pos))


def _found(text: str, pos: int) -> str:
    if pos >= len(text):
        return "end of input"
    return repr(text[pos])


def parse_term(text: str, doc_scope: Optional[str] = None) -> Term:
    """Parse a complete term text; variables are rejected"""
    stripped = text.strip()
    try:
        term, end = scan_term(stripped, 0, doc_scope=doc_scope, allow_variables=False)
    except ParseError as exc:
        raise BadTerm(f"malformed term {text!r}: {exc}") from None
    if end != len(stripped):
        raise BadTerm(f"malformed term {text!r}: trailing characters")
    return term


def parse_triple_line(line: str, doc_scope: Optional[str] = None) -> Triple:
    """Parse `<s> <p> <o>` with an optional trailing ` .`"""
    text = line.strip()
    if text.endswith("."):
        text = text[:-1].rstrip()
    parts = []
    pos = 0
    try:
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            term, pos = scan_term(text, pos, doc_scope=doc_scope, allow_variables=False)
            parts.append(term)
    except ParseError as exc:
        raise BadTerm(f"malformed triple {line!r}: {exc}") from None
    if len(parts) != 3:
        raise BadTerm(f"malformed triple {line!r}: expected 3 terms, found {len(parts)}")
    return Triple(*parts)
