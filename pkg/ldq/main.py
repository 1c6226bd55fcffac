import argparse
import logging
import os
import sys
from typing import Callable, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .commands import run as run_command
from .commands import store as store_command
from .errors import LdqError, UsageError

load_dotenv()

_logger = logging.getLogger(__name__)

_COLORS = {"error": "\033[31m", "warning": "\033[33m"}
_RESET = "\033[0m"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for an exhausted budget
    def error(self, message: str):
        raise UsageError(message)


def _configure_logging() -> None:
    level = os.getenv("LDQ_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _diagnostic(prog: str, kind: str, message: str) -> None:
    text = f"{prog}: {kind}: {message}"
    if os.getenv("LDQ_COLOR") == "1" and kind in _COLORS:
        text = f"{_COLORS[kind]}{text}{_RESET}"
    print(text, file=sys.stderr, flush=True)


def _validation_message(exc: ValidationError) -> str:
    messages = []
    for err in exc.errors():
        msg = err["msg"].removeprefix("Value error, ")
        loc = ".".join(str(part) for part in err.get("loc", ()))
        messages.append(f"{loc}: {msg}" if loc else msg)
    return "; ".join(messages)


def _guarded(prog: str, body: Callable[[], int]) -> int:
    try:
        return body()
    except ValidationError as exc:
        _diagnostic(prog, "error", f"UsageError: {_validation_message(exc)}")
    except LdqError as exc:
        _diagnostic(prog, "error", f"{type(exc).__name__}: {exc}")
    except OSError as exc:
        _diagnostic(prog, "error", f"{type(exc).__name__}: {exc}")
    return run_command.EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of `ldq`"""
    _configure_logging()
    parser = _Parser(prog="ldq", description="Evaluate queries over a Web of Linked Data")
    run_command.add_arguments(parser)

    def body() -> int:
        args = parser.parse_args(argv)
        cfg = run_command.config_from_args(args)
        return run_command.run(cfg, warn=lambda message: _diagnostic("ldq", "warning", message))

    return _guarded("ldq", body)


def store_main(argv: Optional[List[str]] = None) -> int:
    """Entry point of `ldq-store`"""
    _configure_logging()
    parser = _Parser(prog="ldq-store", description="Manage finite webs kept in a database")
    store_command.add_arguments(parser)

    def body() -> int:
        return store_command.run(parser.parse_args(argv))

    return _guarded("ldq-store", body)


def run() -> None:
    sys.exit(main())


def run_store() -> None:
    sys.exit(store_main())
