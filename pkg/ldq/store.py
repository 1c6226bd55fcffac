"""
Relational store for finite webs, and a web source served from it
"""
from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Iterator, List, Optional

from sqlalchemy import func, select
from sqlalchemy.orm import Session, sessionmaker

from .errors import StoreError, UnknownDocument
from .models import AdocEntry, StoredDocument, StoredTriple, StoredWeb
from .rdf import Triple, Uri, parse_term, sorted_triples
from .schemas import StoredWebOut
from .web import DocumentId, FiniteWeb, WebOfLinkedData, link_graph

_logger = logging.getLogger(__name__)


def _find_web(db: Session, name: str) -> StoredWeb:
    web = db.execute(select(StoredWeb).where(StoredWeb.name == name)).scalar_one_or_none()
    if web is None:
        raise StoreError(f"no stored web named {name!r}")
    return web


def _row_triple(row: StoredTriple) -> Triple:
    return Triple(parse_term(row.s), parse_term(row.p), parse_term(row.o))


def import_web(db: Session, name: str, web: FiniteWeb) -> int:
    """Store a finite web under a new name; returns its id"""
    exists = db.execute(select(StoredWeb.id).where(StoredWeb.name == name)).first()
    if exists:
        raise StoreError(f"a web named {name!r} is already stored")
    stored = StoredWeb(name=name)
    db.add(stored)
    documents: Dict[DocumentId, StoredDocument] = {}
    for doc_id in web.document_ids():
        document = StoredDocument(web=stored, doc_id=doc_id)
        for position, t in enumerate(sorted_triples(web.data(doc_id))):
            document.triples.append(StoredTriple(position=position, s=str(t.s), p=str(t.p), o=str(t.o)))
        documents[doc_id] = document
        db.add(document)
    for uri, doc_id in web.adoc_items():
        db.add(AdocEntry(web=stored, uri=uri.text, document=documents[doc_id]))
    db.flush()
    _logger.info("stored web %r: %d documents", name, len(documents))
    return stored.id


def export_web(db: Session, name: str) -> FiniteWeb:
    stored = _find_web(db, name)
    documents = {document.doc_id: [_row_triple(row) for row in document.triples] for document in stored.documents}
    adoc = {Uri(entry.uri): entry.document.doc_id for entry in stored.adoc_entries}
    return FiniteWeb(documents, adoc)


def list_webs(db: Session) -> List[StoredWebOut]:
    rows = []
    for stored in db.execute(select(StoredWeb).order_by(StoredWeb.name)).scalars():
        triples = db.execute(
            select(func.count(StoredTriple.id))
            .join(StoredDocument, StoredTriple.document_id == StoredDocument.id)
            .where(StoredDocument.web_id == stored.id)
        ).scalar_one()
        rows.append(
            StoredWebOut(
                name=stored.name,
                documents=len(stored.documents),
                triples=triples,
                created_at=stored.created_at,
            )
        )
    return rows


def web_stats(db: Session, name: str) -> Dict[str, int]:
    web = export_web(db, name)
    graph = link_graph(web)
    return {
        "documents": len(web.document_ids()),
        "triples": sum(len(web.data(doc_id)) for doc_id in web.document_ids()),
        "adoc": len(web.adoc),
        "links": sum(len(targets) for targets in graph.values()),
    }


def drop_web(db: Session, name: str) -> None:
    db.delete(_find_web(db, name))
    _logger.info("dropped stored web %r", name)


class SqlWeb(WebOfLinkedData):
    """A stored web; dereference and data are answered by queries and cached"""

    materializable = True

    def __init__(self, factory: sessionmaker, name: str):
        self._factory = factory
        self.name = name
        with self._factory() as db:
            self._web_id = _find_web(db, name).id
        self._adoc_cache: Dict[Uri, Optional[DocumentId]] = {}
        self._data_cache: Dict[DocumentId, FrozenSet[Triple]] = {}

    def dereference(self, uri: Uri) -> Optional[DocumentId]:
        if uri not in self._adoc_cache:
            with self._factory() as db:
                self._adoc_cache[uri] = db.execute(
                    select(StoredDocument.doc_id)
                    .join(AdocEntry, AdocEntry.document_id == StoredDocument.id)
                    .where(AdocEntry.web_id == self._web_id, AdocEntry.uri == uri.text)
                ).scalar_one_or_none()
        return self._adoc_cache[uri]

    def data(self, doc_id: DocumentId) -> FrozenSet[Triple]:
        if doc_id not in self._data_cache:
            with self._factory() as db:
                document = db.execute(
                    select(StoredDocument).where(
                        StoredDocument.web_id == self._web_id, StoredDocument.doc_id == doc_id
                    )
                ).scalar_one_or_none()
                if document is None:
                    raise UnknownDocument(doc_id)
                self._data_cache[doc_id] = frozenset(_row_triple(row) for row in document.triples)
        return self._data_cache[doc_id]

    def namespace(self) -> Iterator[Uri]:
        with self._factory() as db:
            uris = db.execute(select(AdocEntry.uri).where(AdocEntry.web_id == self._web_id)).scalars().all()
        return iter(sorted((Uri(text) for text in uris), key=lambda u: u.sort_key))

    def document_ids(self) -> List[DocumentId]:
        with self._factory() as db:
            return sorted(
                db.execute(select(StoredDocument.doc_id).where(StoredDocument.web_id == self._web_id)).scalars()
            )

    def __repr__(self) -> str:
        return f"SqlWeb({self.name!r})"
