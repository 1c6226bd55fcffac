"""
Webs of Linked Data: the abstract document source, finite webs loaded from
web-description files, induced subwebs and the link graph.
"""
from __future__ import annotations

import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple, Union

from pydantic import ValidationError

from .errors import (
    BadTerm,
    BlankNodeSharing,
    DuplicateDoc,
    NonSurjective,
    NotMaterializable,
    UnknownDocument,
    WebFormatError,
)
from .rdf import BlankNode, Triple, Uri, ids_of, parse_term, sorted_triples
from .schemas import WebDescription

_logger = logging.getLogger(__name__)

DocumentId = str


class WebOfLinkedData(ABC):
    """Document source: dereference(uri) -> document or None (broken), data(doc) -> triples"""

    materializable: bool = False

    @abstractmethod
    def dereference(self, uri: Uri) -> Optional[DocumentId]:
        ...

    @abstractmethod
    def data(self, doc_id: DocumentId) -> FrozenSet[Triple]:
        ...

    @abstractmethod
    def namespace(self) -> Iterator[Uri]:
        """URIs in dom(adoc), in the web's canonical order; may be infinite"""

    def adoc_items(self) -> Iterator[Tuple[Uri, DocumentId]]:
        if not self.materializable:
            raise NotMaterializable(f"{self!r} has infinitely many documents")
        for uri in self.namespace():
            doc_id = self.dereference(uri)
            if doc_id is not None:
                yield uri, doc_id

    def document_ids(self) -> List[DocumentId]:
        seen: Dict[DocumentId, None] = {}
        for _, doc_id in self.adoc_items():
            seen.setdefault(doc_id)
        return list(seen)


class FiniteWeb(WebOfLinkedData):
    materializable = True

    def __init__(self, documents: Mapping[DocumentId, Iterable[Triple]], adoc: Mapping[Uri, DocumentId]):
        self._documents: Dict[DocumentId, FrozenSet[Triple]] = {
            doc_id: frozenset(triples) for doc_id, triples in documents.items()
        }
        self._adoc: Dict[Uri, DocumentId] = dict(adoc)
        self._validate()

    def _validate(self) -> None:
        for uri, doc_id in self._adoc.items():
            if doc_id not in self._documents:
                raise UnknownDocument(doc_id, f"adoc maps {uri} to unknown document {doc_id!r}")
        targets = set(self._adoc.values())
        for doc_id, triples in self._documents.items():
            if doc_id not in targets:
                raise NonSurjective(f"document {doc_id!r} is not the image of any URI under adoc")
            for t in triples:
                for term in t:
                    if isinstance(term, BlankNode) and term.doc != doc_id:
                        raise BlankNodeSharing(
                            f"document {doc_id!r} uses blank node {term} of document {term.doc!r}"
                        )

    def dereference(self, uri: Uri) -> Optional[DocumentId]:
        return self._adoc.get(uri)

    def data(self, doc_id: DocumentId) -> FrozenSet[Triple]:
        try:
            return self._documents[doc_id]
        except KeyError:
            raise UnknownDocument(doc_id) from None

    def namespace(self) -> Iterator[Uri]:
        return iter(sorted(self._adoc, key=lambda u: u.sort_key))

    def document_ids(self) -> List[DocumentId]:
        return sorted(self._documents)

    @property
    def adoc(self) -> Dict[Uri, DocumentId]:
        return dict(self._adoc)

    @property
    def documents(self) -> Dict[DocumentId, FrozenSet[Triple]]:
        return dict(self._documents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteWeb):
            return NotImplemented
        return self._documents == other._documents and self._adoc == other._adoc

    def __repr__(self) -> str:
        return f"FiniteWeb(documents={len(self._documents)}, adoc={len(self._adoc)})"


class _DuplicateKeys(dict):
    """JSON object that remembers keys given more than once"""

    def __init__(self, pairs):
        super().__init__()
        self.duplicates: List[str] = []
        for key, value in pairs:
            if key in self:
                self.duplicates.append(key)
            self[key] = value


def _adoc_key(text: str) -> Uri:
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
    try:
        return Uri(text)
    except BadTerm as exc:
        raise BadTerm(f"adoc key {text!r}: {exc}") from None


def web_from_description(raw: Union[WebDescription, dict]) -> FiniteWeb:
    if isinstance(raw, dict):
        duplicates = getattr(raw.get("documents"), "duplicates", [])
        if duplicates:
            raise DuplicateDoc(f"document {duplicates[0]!r} is defined more than once")
        try:
            description = WebDescription.model_validate(raw)
        except ValidationError as exc:
            raise WebFormatError(f"invalid web description: {exc}") from None
    else:
        description = raw

    documents: Dict[DocumentId, Set[Triple]] = {}
    for doc_id, rows in description.documents.items():
        triples = set()
        for s, p, o in rows:
            terms = [_document_term(text, doc_id) for text in (s, p, o)]
            try:
                triples.add(Triple(*terms))
            except BadTerm as exc:
                raise BadTerm(f"document {doc_id!r}: {exc}") from None
        documents[doc_id] = triples
    adoc = {_adoc_key(key): doc_id for key, doc_id in description.adoc.items()}
    web = FiniteWeb(documents, adoc)
    _logger.debug("built %r", web)
    return web


def _document_term(text: str, doc_id: DocumentId):
    # `_:label` is scoped to the enclosing document; `_:doc/label` must name it
    if text.startswith("_:") and "/" in text:
        scope = text[2:].rpartition("/")[0]
        if scope != doc_id:
            raise BlankNodeSharing(f"document {doc_id!r} refers to blank node {text} of document {scope!r}")
    return parse_term(text, doc_scope=doc_id)


def load_web(source: Union[str, Path]) -> FiniteWeb:
    """Load and validate a web-description JSON file"""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise WebFormatError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    try:
        raw = json.loads(text, object_pairs_hook=_DuplicateKeys)
    except json.JSONDecodeError as exc:
        raise WebFormatError(f"{path}: {exc}") from None
    if not isinstance(raw, dict):
        raise WebFormatError(f"{path}: top level must be a JSON object")
    adoc = raw.get("adoc")
    if getattr(adoc, "duplicates", None):
        raise WebFormatError(f"{path}: adoc key {adoc.duplicates[0]!r} is given more than once")
    return web_from_description(raw)


def _document_text(term, doc_id: DocumentId) -> str:
    if isinstance(term, BlankNode) and term.doc == doc_id:
        return f"_:{term.label}"
    return str(term)


def dump_web(web: FiniteWeb) -> dict:
    documents = {
        doc_id: [
            [_document_text(term, doc_id) for term in t]
            for t in sorted_triples(web.data(doc_id))
        ]
        for doc_id in web.document_ids()
    }
    adoc = {uri.text: doc_id for uri, doc_id in web.adoc_items()}
    return WebDescription(documents=documents, adoc=adoc).model_dump()


def web_json(web: FiniteWeb) -> str:
    return json.dumps(dump_web(web), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_web_file(web: FiniteWeb, path: Union[str, Path]) -> None:
    Path(path).write_text(web_json(web), encoding="utf-8")


def all_data(web: WebOfLinkedData) -> FrozenSet[Triple]:
    if not web.materializable:
        raise NotMaterializable(f"{web!r} is not materializable")
    return frozenset(t for doc_id in web.document_ids() for t in web.data(doc_id))


def induced_subweb(web: FiniteWeb, doc_ids: Iterable[DocumentId]) -> FiniteWeb:
    keep = set(doc_ids)
    unknown = keep - set(web.document_ids())
    if unknown:
        raise UnknownDocument(min(unknown))
    return FiniteWeb(
        {doc_id: web.data(doc_id) for doc_id in keep},
        {uri: doc_id for uri, doc_id in web.adoc.items() if doc_id in keep},
    )


def materialize(
    web: WebOfLinkedData,
    doc_ids: Iterable[DocumentId],
    known_uris: Iterable[Uri] = (),
) -> FiniteWeb:
    """Finite induced subweb of any web source on the given documents"""
    keep = set(doc_ids)
    if isinstance(web, FiniteWeb):
        return induced_subweb(web, keep)
    documents = {doc_id: web.data(doc_id) for doc_id in keep}
    candidates = set(known_uris)
    for triples in documents.values():
        for t in triples:
            candidates |= ids_of(t)
    adoc = {}
    for uri in candidates:
        doc_id = web.dereference(uri)
        if doc_id in keep:
            adoc[uri] = doc_id
    return FiniteWeb(documents, adoc)


def link_graph(web: FiniteWeb) -> Dict[DocumentId, FrozenSet[DocumentId]]:
    """Data links: d1 -> d2 iff a URI used in data(d1) dereferences to d2"""
    graph = {}
    for doc_id in web.document_ids():
        targets = set()
        for t in web.data(doc_id):
            for uri in ids_of(t):
                target = web.dereference(uri)
                if target is not None:
                    targets.add(target)
        graph[doc_id] = frozenset(targets)
    return graph
