"""
`ldq`: evaluate one query over one web and print solutions plus a summary
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Callable, List, Optional, TextIO

from ..database import init_db, make_engine, make_session_factory
from ..encoding import enc_solution_set, enc_valuation
from ..engine import ExecutionReport, SolutionEvent, Status, exec_full_web, exec_reach_streaming, exec_reach_terminating
from ..errors import UsageError
from ..generators import generator_from_selector
from ..parser import parse_expression
from ..rdf import Uri
from ..reachability import Budget, criterion_from_selector, load_uri_set
from ..schemas import ExecutionSummary, RunConfig
from ..store import SqlWeb
from ..web import WebOfLinkedData, load_web

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET_EXHAUSTED = 2

_SEED = re.compile(r"<[^<>]*>")


def exit_code(status: Status) -> int:
    return EXIT_OK if status is Status.COMPLETE else EXIT_BUDGET_EXHAUSTED


def parse_seed_list(text: str) -> List[str]:
    """Comma-separated `<uri>` terms"""
    if not text.strip():
        return []
    seeds = [item.strip() for item in text.split(",")]
    if not all(_SEED.fullmatch(seed) for seed in seeds):
        raise UsageError(f"malformed --seeds value {text!r}: expected comma-separated <uri> terms")
    return seeds


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--web", required=True, help="web-description file, gen:numbers, gen:chain:N|inf, gen:star:N|inf or db:NAME")
    parser.add_argument("--query", required=True, help="query file path or inline query text")
    parser.add_argument("--semantics", choices=["full", "reach"], default="full")
    parser.add_argument("--criterion", help="all|none|match|u:FILE|t:FILE|and:UFILE,TFILE|or:UFILE,TFILE (reach only, default match)")
    parser.add_argument("--seeds", help="comma-separated seed URIs, e.g. '<num:1>,<num:2>'")
    parser.add_argument("--seeds-file", help="file with one <uri> per line")
    parser.add_argument("--budget", help="maximum number of link lookups, or 'unlimited'")
    parser.add_argument("--mode", choices=["batch", "stream"], default="batch")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    seeds: List[str] = []
    if args.seeds:
        seeds.extend(parse_seed_list(args.seeds))
    if args.seeds_file:
        seeds.extend(str(uri) for uri in sorted(load_uri_set(args.seeds_file), key=lambda u: u.sort_key))
    budget = args.budget
    if budget is not None and budget != "unlimited":
        if not budget.isdigit():
            raise UsageError(f"--budget must be a positive integer or 'unlimited', got {budget!r}")
        budget = int(budget)
    return RunConfig(
        web=args.web,
        query=args.query,
        semantics=args.semantics,
        criterion=args.criterion,
        seeds=seeds,
        budget=budget,
        mode=args.mode,
    )


def resolve_web(selector: str) -> WebOfLinkedData:
    if selector.startswith("gen:"):
        try:
            return generator_from_selector(selector)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if selector.startswith("db:"):
        engine = make_engine()
        init_db(engine)
        return SqlWeb(make_session_factory(engine), selector[3:])
    return load_web(selector)


def read_query(value: str) -> str:
    """Text of the query file at value, or value itself as inline query text"""
    path = Path(value)
    try:
        is_file = path.is_file()
    except (OSError, ValueError):
        # inline text too long or odd to be a path name
        is_file = False
    if not is_file:
        return value
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"query file {value}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None


def summarize(report: ExecutionReport) -> ExecutionSummary:
    return ExecutionSummary(
        status=report.status.value,
        solutions=len(report.solutions),
        lookups=report.lookups_spent,
        docs=report.part_size,
    )


def _summary(out: TextIO, report: ExecutionReport) -> None:
    for key, value in summarize(report).model_dump().items():
        out.write(f"{key}={value}\n")
    out.flush()


def run(cfg: RunConfig, out: Optional[TextIO] = None, warn: Optional[Callable[[str], None]] = None) -> int:
    out = out or sys.stdout
    web = resolve_web(cfg.web)
    expr = parse_expression(read_query(cfg.query))
    budget = Budget(cfg.max_lookups)
    _logger.debug("running %s/%s over %r with budget %s", cfg.semantics, cfg.mode, web, budget)

    if cfg.semantics == "full":
        report = exec_full_web(web, expr, budget)
        out.write(enc_solution_set(report.solutions))
        _summary(out, report)
        return exit_code(report.status)

    seeds = [Uri(text[1:-1]) for text in cfg.seeds]
    criterion = criterion_from_selector(cfg.criterion or "match")
    if budget.unlimited and warn is not None:
        warn("unlimited budget: the run may not terminate if the reachable part is infinite")

    if cfg.mode == "batch":
        report = exec_reach_terminating(web, seeds, criterion, expr, budget)
        out.write(enc_solution_set(report.solutions))
        _summary(out, report)
        return exit_code(report.status)

    stream = exec_reach_streaming(web, seeds, criterion, expr, budget)
    for event in stream:
        if isinstance(event, SolutionEvent):
            out.write(f"[iter={event.iteration}] {enc_valuation(event.valuation)}\n")
            out.flush()
    report = stream.report()
    _summary(out, report)
    return exit_code(report.status)
