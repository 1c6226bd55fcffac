"""
`ldq-store`: keep finite webs in a relational database
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, TextIO

from sqlalchemy.orm import sessionmaker

from ..database import init_db, make_engine, make_session_factory, session_scope
from ..store import drop_web, export_web, import_web, list_webs, web_stats
from ..web import load_web, save_web_file, web_json


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--database-url", help="SQLAlchemy URL, defaults to LDQ_DATABASE_URL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="validate a web-description file and store it")
    p.add_argument("path")
    p.add_argument("--name", required=True)

    p = sub.add_parser("export", help="write a stored web as a web-description file")
    p.add_argument("name")
    p.add_argument("--output", help="output file, stdout when omitted")

    sub.add_parser("list", help="list stored webs")

    p = sub.add_parser("stats", help="document, triple, adoc and link counts of a stored web")
    p.add_argument("name")

    p = sub.add_parser("drop", help="delete a stored web")
    p.add_argument("name")


def _factory(url: Optional[str]) -> sessionmaker:
    engine = make_engine(url)
    init_db(engine)
    return make_session_factory(engine)


def run(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    factory = _factory(args.database_url)

    if args.command == "import":
        web = load_web(args.path)
        with session_scope(factory) as db:
            import_web(db, args.name, web)
        out.write(f"imported {args.name}: {len(web.document_ids())} documents\n")
    elif args.command == "export":
        with session_scope(factory) as db:
            web = export_web(db, args.name)
        if args.output:
            save_web_file(web, args.output)
        else:
            out.write(web_json(web))
    elif args.command == "list":
        with session_scope(factory) as db:
            for row in list_webs(db):
                out.write(f"{row.name}\tdocuments={row.documents}\ttriples={row.triples}\tcreated={row.created_at:%Y-%m-%d %H:%M:%S}\n")
    elif args.command == "stats":
        with session_scope(factory) as db:
            stats = web_stats(db, args.name)
        for key in ("documents", "triples", "adoc", "links"):
            out.write(f"{key}={stats[key]}\n")
    elif args.command == "drop":
        with session_scope(factory) as db:
            drop_web(db, args.name)
        out.write(f"dropped {args.name}\n")
    out.flush()
    return 0
