import sqlite3

from runners.models import AggregateReport
from utils.database import fetch_latest_metric, initialize_database, save_acceptance_result, save_run_report


def sample_report() -> AggregateReport:
    return AggregateReport(
        algo="eps-bai",
        params={"epsilon": 0.25, "delta": 0.1},
        trials=10,
        failure_rate=0.1,
        failure_ci95=0.186,
        mean_pulls=1234.5,
        pulls_ci95=12.0,
        mean_passes=1.0,
        bound_ratio=0.5,
    )


def test_initialize_creates_tables(db_path):
    initialize_database(db_path)
    initialize_database(db_path)
    with sqlite3.connect(db_path) as conn:
        tables = {row[0] for row in conn.execute("SELECT name FROM sqlite_master WHERE type = 'table'")}
    assert {"run_reports", "acceptance_results"} <= tables


def test_save_run_report(db_path):
    initialize_database(db_path)
    save_run_report("2026-01-02", sample_report(), "storage/reports/run.json", db_path)
    with sqlite3.connect(db_path) as conn:
        row = conn.execute("SELECT date, algo, params_json, trials, mean_pulls, report_path FROM run_reports").fetchone()
    assert row == ("2026-01-02", "eps-bai", '{"delta": 0.1, "epsilon": 0.25}', 10, 1234.5, "storage/reports/run.json")


def test_latest_metric_ignores_failed_runs(db_path):
    initialize_database(db_path)
    assert fetch_latest_metric("8", db_path) is None
    save_acceptance_result("2026-01-01", "8", True, 1500.0, "первый прогон", db_path)
    save_acceptance_result("2026-01-02", "8", True, 1480.0, "второй прогон", db_path)
    save_acceptance_result("2026-01-03", "8", False, 2500.0, "регрессия", db_path)
    save_acceptance_result("2026-01-03", "6", True, 0.03, "другой критерий", db_path)
    assert fetch_latest_metric("8", db_path) == 1480.0


def test_missing_table_is_logged_not_raised(db_path, caplog):
    initialize_database(db_path)
    with sqlite3.connect(db_path) as conn:
        conn.execute("DROP TABLE acceptance_results")
    assert fetch_latest_metric("8", db_path) is None
    save_acceptance_result("2026-01-01", "1", True, None, "", db_path)
    assert "acceptance_results" in caplog.text
