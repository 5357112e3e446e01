import asyncio
import csv
import json
import sqlite3

import pytest

import main
from runners.accept_runner import CriterionResult
from utils.report_utils import _plain, create_report_path


def run_cli(*argv) -> int:
    return asyncio.run(main.main(list(argv)))


def test_parser_defaults():
    args = main.build_parser().parse_args(["run", "--n", "20"])
    assert args.algo == "eps-bai"
    assert args.eps == 0.25
    assert args.format == "json"
    config = main.config_from_args(args)
    assert config.instance.n == 20
    assert config.audit


def test_parser_rejects_unknown_algo():
    with pytest.raises(SystemExit):
        main.build_parser().parse_args(["run", "--algo", "thompson"])


def test_explicit_means_parsed():
    args = main.build_parser().parse_args(["run", "--profile", "explicit", "--means", "0.9, 0.1", "--order", "descending"])
    assert main.config_from_args(args).instance.means == (0.9, 0.1)


def test_run_writes_json(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("run", "--n", "5", "--profile", "linear", "--order", "ascending", "--dist", "deterministic",
                   "--trials", "2", "--out", str(out), "--per-trial")
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert {"algo", "params", "trials", "failure_rate", "failure_ci95", "mean_pulls", "pulls_ci95",
            "mean_passes", "bound_ratio", "per_trial"} <= set(report)
    assert report["failure_rate"] == 0.0
    assert len(report["per_trial"]) == 2


def test_run_writes_csv(tmp_path):
    out = tmp_path / "trials.csv"
    code = run_cli("run", "--algo", "uniform", "--n", "4", "--profile", "linear", "--trials", "3",
                   "--format", "csv", "--out", str(out))
    assert code == 0
    with open(out, encoding="utf-8") as file:
        rows = list(csv.reader(file))
    assert rows[0][:3] == ["algo", "seed", "returned_ids"]
    assert len(rows) == 4
    assert [row[1] for row in rows[1:]] == ["0", "1", "2"]


def test_sweep_writes_row_per_value(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run_cli("sweep", "--n", "4", "--profile", "linear", "--trials", "2", "--vary", "n=4,6",
                   "--format", "csv", "--out", str(out))
    assert code == 0
    with open(out, encoding="utf-8") as file:
        rows = list(csv.reader(file))
    assert rows[0][:2] == ["key", "value"]
    assert [row[1] for row in rows[1:]] == ["4", "6"]


def test_sweep_writes_json_array(tmp_path):
    out = tmp_path / "sweep.json"
    code = run_cli("sweep", "--n", "4", "--profile", "linear", "--dist", "deterministic", "--trials", "2",
                   "--vary", "n=4,6", "--out", str(out))
    assert code == 0
    points = json.loads(out.read_text(encoding="utf-8"))
    assert [point["value"] for point in points] == [4, 6]
    assert all(point["key"] == "n" and point["report"]["trials"] == 2 for point in points)



def test_run_saves_to_database(tmp_path, monkeypatch, db_path):
    monkeypatch.setattr(main, "DB_PATH", db_path)
    code = run_cli("run", "--n", "4", "--profile", "linear", "--trials", "1", "--out", str(tmp_path / "r.json"), "--save")
    assert code == 0
    with sqlite3.connect(db_path) as conn:
        assert conn.execute("SELECT COUNT(*) FROM run_reports").fetchone()[0] == 1


def test_invalid_spec_exits_with_error(tmp_path):
    assert run_cli("run", "--profile", "one-gap", "--out", str(tmp_path / "r.json")) == 2
    assert run_cli("run", "--n", "5", "--eps", "1.5", "--out", str(tmp_path / "r.json")) == 2


def test_accept_exit_codes(monkeypatch):
    async def passing(parallelism, db_path=None):
        return [CriterionResult("1", True, 0.05, "")]

    async def failing(parallelism, db_path=None):
        return [CriterionResult("1", True, 0.05, ""), CriterionResult("8", False, 3000.0, "")]

    monkeypatch.setattr(main, "run_acceptance_suite", passing)
    assert run_cli("accept") == 0
    monkeypatch.setattr(main, "run_acceptance_suite", failing)
    assert run_cli("accept") == 1


def test_report_path_layout(tmp_path):
    path = create_report_path("run_eps-bai", "csv", base_path=str(tmp_path))
    assert path.startswith(str(tmp_path))
    assert path.endswith(".csv")
    assert "run_eps-bai_" in path


@pytest.mark.parametrize("value,expected", [
    (1e-07, "0.0000001"),
    (2.5, "2.5"),
    (0.0, "0"),
    (None, ""),
    (True, "true"),
    ([1, 3], "1 3"),
])
def test_plain_decimals(value, expected):
    assert _plain(value) == expected
