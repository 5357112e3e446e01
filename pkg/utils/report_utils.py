import os
import csv
import datetime
import logging
from typing import Sequence

from pydantic import TypeAdapter

from config import REPORTS_PATH
from runners.models import SweepPoint

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ["algo", "seed", "returned_ids", "total_pulls", "pass_count", "correct", "invariants_ok", "rounds"]
AGGREGATE_COLUMNS = ["algo", "trials", "failure_rate", "failure_ci95", "mean_pulls", "pulls_ci95",
                     "mean_passes", "bound_ratio", "invariant_failures"]

SWEEP_POINTS = TypeAdapter(list[SweepPoint])


def create_report_path(prefix: str = "report", extension: str = "json", base_path: str = REPORTS_PATH) -> str:
    """
    Создает путь для сохранения отчёта в формате: storage/reports/{year}/{month}/{file_name}.
    :param prefix: Префикс имени файла.
    :param extension: json или csv.
    :return: Полный путь к файлу.
    """
    current_date = datetime.datetime.now()
    year = current_date.strftime("%Y")
    month = current_date.strftime("%m")
    file_name = f"{prefix}_{current_date.strftime('%Y%m%d_%H%M%S')}.{extension}"

    directory = os.path.join(base_path, year, month)
    os.makedirs(directory, exist_ok=True)

    return os.path.join(directory, file_name)


def _plain(value) -> str:
    """Числа в обычной десятичной записи, без экспоненты."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        text = f"{value:.10f}".rstrip("0").rstrip(".")
        return text or "0"
    if isinstance(value, (list, tuple)):
        return " ".join(str(item) for item in value)
    return str(value)


def write_json_report(report, file_path: str):
    """Сохраняет pydantic-отчёт в JSON."""
    with open(file_path, "w", encoding="utf-8") as file:
        file.write(report.model_dump_json(indent=2))
    logger.info(f"Отчёт сохранён в {file_path}")


def write_sweep_json(points: Sequence[SweepPoint], file_path: str):
    """Массив точек sweep в JSON."""
    with open(file_path, "wb") as file:
        file.write(SWEEP_POINTS.dump_json(list(points), indent=2))
    logger.info(f"Отчёт sweep сохранён в {file_path}")


def write_trials_csv(reports: Sequence, file_path: str):
    """Одна строка на испытание."""
    with open(file_path, "w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(TRIAL_COLUMNS)
        for report in reports:
            writer.writerow([_plain(getattr(report, column)) for column in TRIAL_COLUMNS])
    logger.info(f"CSV по испытаниям сохранён в {file_path}")


def write_sweep_csv(points: Sequence, file_path: str):
    """Одна строка на точку sweep."""
    with open(file_path, "w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(["key", "value"] + AGGREGATE_COLUMNS)
        for point in points:
            writer.writerow([point.key, _plain(point.value)]
                            + [_plain(getattr(point.report, column)) for column in AGGREGATE_COLUMNS])
    logger.info(f"CSV sweep сохранён в {file_path}")
