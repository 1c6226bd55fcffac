import json
import os
import subprocess
import sys

import pytest

from ldq.commands.run import parse_seed_list
from ldq.main import main, store_main
from ldq.web import load_web
from tests.conftest import FIXTURES, GOLDEN, TESTS_DIR

ROOT = TESTS_DIR.parent
PEOPLE = str(FIXTURES / "people.json")
PEOPLE_QUERY = str(FIXTURES / "people_query.rq")

SCENARIOS = {
    "numbers_match": (
        ["--web", "gen:numbers", "--query", "(<num:1> <num:succ> ?v)", "--semantics", "reach",
         "--criterion", "match", "--seeds", "<num:1>"],
        0,
    ),
    "numbers_all_stream": (
        ["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)", "--semantics", "reach",
         "--criterion", "all", "--seeds", "<num:1>", "--budget", "5", "--mode", "stream"],
        2,
    ),
    "numbers_all_batch": (
        ["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)", "--semantics", "reach",
         "--criterion", "all", "--seeds", "<num:1>", "--budget", "5"],
        2,
    ),
    "numbers_full_budget": (
        ["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)", "--budget", "3"],
        2,
    ),
    "people_full": (
        ["--web", PEOPLE, "--query", PEOPLE_QUERY],
        0,
    ),
    "people_reach_match": (
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice>"],
        0,
    ),
    "people_reach_none": (
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--criterion", "none",
         "--seeds-file", str(FIXTURES / "seeds.txt")],
        0,
    ),
}


def golden(name):
    return (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_scenarios_match_golden_output(name, capsys):
    argv, code = SCENARIOS[name]
    assert main(argv) == code
    assert capsys.readouterr().out == golden(name)


def test_stream_and_batch_print_the_same_solutions_when_complete(capsys):
    base = ["--web", PEOPLE, "--query", "(?p <ex:knows> ?q)", "--semantics", "reach", "--seeds", "<ex:alice>"]
    assert main(base) == 0
    batch = capsys.readouterr().out.splitlines()
    assert main(base + ["--mode", "stream"]) == 0
    streamed = capsys.readouterr().out.splitlines()
    assert streamed[-4:] == batch[-4:]
    assert sorted(line.split("] ", 1)[1] for line in streamed[:-4]) == batch[:-4]


@pytest.mark.parametrize(
    "argv",
    [
        ["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)", "--semantics", "reach", "--seeds", ""],
        ["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)", "--semantics", "reach"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--criterion", "all"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--budget", "unlimited"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--mode", "stream"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--budget", "0"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--budget", "many"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "ex:alice"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice> <ex:bob>"],
        ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--no-such-flag"],
        ["--web", "gen:ring:3", "--query", PEOPLE_QUERY],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "UsageError" in captured.err


@pytest.mark.parametrize(
    "argv, kind",
    [
        (["--web", PEOPLE, "--query", "(?x <ex:p>"], "ParseError"),
        (["--web", str(FIXTURES / "missing.json"), "--query", PEOPLE_QUERY], "FileNotFoundError"),
        (["--web", str(FIXTURES / "shared_blank.json"), "--query", PEOPLE_QUERY], "BlankNodeSharing"),
        (["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)"], "BudgetRequired"),
        (["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice>",
          "--criterion", "u:" + str(FIXTURES / "missing.txt")], "FileNotFoundError"),
    ],
)
def test_load_and_parse_errors_exit_1(argv, kind, capsys):
    assert main(argv) == 1
    assert kind in capsys.readouterr().err


def test_seed_lists_are_comma_separated():
    assert parse_seed_list("<ex:alice>") == ["<ex:alice>"]
    assert parse_seed_list("<ex:alice>, <ex:bob>,<ex:carol>") == ["<ex:alice>", "<ex:bob>", "<ex:carol>"]
    assert parse_seed_list("  ") == []


def test_long_inline_query_is_not_taken_for_a_path(capsys):
    query = "(?x <num:succ> ?y)"
    for k in range(12):
        query = f"({query} UNION (<num:{k}> <num:succ> ?v))"
    assert len(query) > 255 and "/" not in query
    argv = ["--web", "gen:numbers", "--query", query, "--semantics", "reach", "--seeds", "<num:1>", "--budget", "3"]
    assert main(argv) == 2
    captured = capsys.readouterr()
    assert "error" not in captured.err
    assert "status=BudgetExhausted\n" in captured.out
    assert captured.out.endswith("lookups=3\ndocs=3\n")


@pytest.mark.parametrize(
    "flag, kind",
    [
        ("--web", "WebFormatError"),
        ("--query", "UsageError"),
        ("--seeds-file", "CriterionError"),
        ("--criterion", "CriterionError"),
    ],
)
def test_undecodable_input_files_exit_1(flag, kind, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"\xff\xfe <ex:alice>\n")
    argv = {
        "--web": ["--web", str(bad), "--query", PEOPLE_QUERY],
        "--query": ["--web", PEOPLE, "--query", str(bad)],
        "--seeds-file": ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds-file", str(bad)],
        "--criterion": ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice>",
                        "--criterion", "u:" + str(bad)],
    }[flag]
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert kind in captured.err
    assert "UTF-8" in captured.err


def test_unlimited_reach_prints_a_warning(capsys):
    argv = ["--web", PEOPLE, "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice>", "--budget", "unlimited"]
    assert main(argv) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.err
    assert captured.out == golden("people_reach_match")


def test_color_only_when_enabled(capsys, monkeypatch):
    argv = ["--web", PEOPLE, "--query", "(?x"]
    monkeypatch.setenv("LDQ_COLOR", "1")
    assert main(argv) == 1
    assert "\033[31m" in capsys.readouterr().err
    monkeypatch.setenv("LDQ_COLOR", "0")
    assert main(argv) == 1
    assert "\033[" not in capsys.readouterr().err


def test_store_round_trip(tmp_path, monkeypatch, capsys):
    url = f"sqlite:///{tmp_path / 'webs.db'}"
    assert store_main(["--database-url", url, "import", PEOPLE, "--name", "people"]) == 0
    assert capsys.readouterr().out == "imported people: 3 documents\n"

    assert store_main(["--database-url", url, "import", PEOPLE, "--name", "people"]) == 1
    assert "StoreError" in capsys.readouterr().err

    assert store_main(["--database-url", url, "list"]) == 0
    assert capsys.readouterr().out.startswith("people\tdocuments=3\ttriples=6\t")

    assert store_main(["--database-url", url, "stats", "people"]) == 0
    assert capsys.readouterr().out == "documents=3\ntriples=6\nadoc=3\nlinks=5\n"

    assert store_main(["--database-url", url, "export", "people"]) == 0
    exported = json.loads(capsys.readouterr().out)
    assert sorted(exported["documents"]) == ["alice", "bob", "carol"]

    output = tmp_path / "exported.json"
    assert store_main(["--database-url", url, "export", "people", "--output", str(output)]) == 0
    assert load_web(output) == load_web(PEOPLE)

    monkeypatch.setenv("LDQ_DATABASE_URL", url)
    assert main(["--web", "db:people", "--query", PEOPLE_QUERY, "--semantics", "reach", "--seeds", "<ex:alice>"]) == 0
    assert capsys.readouterr().out == golden("people_reach_match")

    assert store_main(["--database-url", url, "drop", "people"]) == 0
    capsys.readouterr()
    assert main(["--web", "db:people", "--query", PEOPLE_QUERY]) == 1
    assert "StoreError" in capsys.readouterr().err


def _run_process(argv):
    env = dict(os.environ, PYTHONPATH=str(ROOT), PYTHONIOENCODING="utf-8", LDQ_COLOR="0")
    return subprocess.run(
        [sys.executable, "-m", "ldq", *argv],
        cwd=ROOT,
        env=env,
        capture_output=True,
        check=False,
    )


@pytest.mark.parametrize("name", ["numbers_all_stream", "people_reach_match"])
def test_output_is_byte_identical_across_processes(name):
    argv, code = SCENARIOS[name]
    first, second = _run_process(argv), _run_process(argv)
    assert first.returncode == second.returncode == code
    assert first.stdout == second.stdout == golden(name).encode("utf-8")
