from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator, Optional

from dotenv import load_dotenv
from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker
from sqlalchemy.pool import StaticPool

load_dotenv()

MYSQL_HOST = os.getenv("MYSQL_HOST")
MYSQL_PORT = os.getenv("MYSQL_PORT", "3306")
MYSQL_USER = os.getenv("MYSQL_USER", "ldq")
MYSQL_PASSWORD = os.getenv("MYSQL_PASSWORD", "")
MYSQL_DB = os.getenv("MYSQL_DB", "ldq")

DEFAULT_DATABASE_URL = "sqlite:///ldq.db"


class Base(DeclarativeBase):
	pass


def database_url() -> str:
	url = os.getenv("LDQ_DATABASE_URL")
	if url:
		return url
	if MYSQL_HOST:
		return (
			f"mysql+pymysql://{MYSQL_USER}:{MYSQL_PASSWORD}@{MYSQL_HOST}:{MYSQL_PORT}/{MYSQL_DB}"
			f"?charset=utf8mb4"
		)
	return DEFAULT_DATABASE_URL


def make_engine(url: Optional[str] = None) -> Engine:
	url = url or database_url()
	if url in ("sqlite://", "sqlite:///:memory:"):
		# one shared connection, otherwise every session sees its own empty database
		return create_engine(url, connect_args={"check_same_thread": False}, poolclass=StaticPool)
	if url.startswith("sqlite"):
		return create_engine(url)
	return create_engine(url, pool_pre_ping=True, pool_recycle=3600)


def make_session_factory(engine: Engine) -> sessionmaker:
	return sessionmaker(autocommit=False, autoflush=False, bind=engine)


def init_db(engine: Engine) -> None:
	from . import models  # noqa: F401
	Base.metadata.create_all(bind=engine)


@contextmanager
def session_scope(factory: sessionmaker) -> Iterator[Session]:
	db = factory()
	try:
		yield db
		db.commit()
	except Exception:
		db.rollback()
		raise
	finally:
		db.close()
