from __future__ import annotations

from sqlalchemy import Column, DateTime, ForeignKey, Integer, String, Text, UniqueConstraint, func
from sqlalchemy.orm import backref, relationship

from .database import Base


class StoredWeb(Base):
	__tablename__ = "webs"

	id = Column(Integer, primary_key=True, index=True)
	name = Column(String(255), nullable=False, unique=True, index=True)
	created_at = Column(DateTime, server_default=func.now(), nullable=False)


class StoredDocument(Base):
	__tablename__ = "documents"
	__table_args__ = (UniqueConstraint("web_id", "doc_id", name="uq_documents_web_doc"),)

	id = Column(Integer, primary_key=True, index=True)
	web_id = Column(Integer, ForeignKey("webs.id", ondelete="CASCADE"), nullable=False, index=True)
	doc_id = Column(String(255), nullable=False, index=True)

	web = relationship("StoredWeb", backref=backref("documents", cascade="all, delete-orphan"))


class StoredTriple(Base):
	__tablename__ = "triples"

	id = Column(Integer, primary_key=True, index=True)
	document_id = Column(Integer, ForeignKey("documents.id", ondelete="CASCADE"), nullable=False, index=True)
	position = Column(Integer, nullable=False, default=0)
	# Terms in term syntax: <uri>, _:doc/label, "literal"
	s = Column(Text, nullable=False)
	p = Column(Text, nullable=False)
	o = Column(Text, nullable=False)

	document = relationship(
		"StoredDocument",
		backref=backref("triples", cascade="all, delete-orphan", order_by="StoredTriple.position"),
	)


class AdocEntry(Base):
	__tablename__ = "adoc"
	__table_args__ = (UniqueConstraint("web_id", "uri", name="uq_adoc_web_uri"),)

	id = Column(Integer, primary_key=True, index=True)
	web_id = Column(Integer, ForeignKey("webs.id", ondelete="CASCADE"), nullable=False, index=True)
	uri = Column(String(1024), nullable=False, index=True)
	document_id = Column(Integer, ForeignKey("documents.id", ondelete="CASCADE"), nullable=False, index=True)

	web = relationship("StoredWeb", backref=backref("adoc_entries", cascade="all, delete-orphan"))
	document = relationship("StoredDocument", backref=backref("adoc_entries", cascade="all, delete-orphan"))
