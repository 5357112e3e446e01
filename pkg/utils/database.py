import sqlite3
import os
import json
import logging
from typing import Optional

from config import DB_PATH

# Настройка логирования
logger = logging.getLogger(__name__)


def initialize_database(db_path: str = DB_PATH):
    """
    Создает таблицы отчётов, если они не существуют.
    """
    directory = os.path.dirname(db_path)
    if directory:
        os.makedirs(directory, exist_ok=True)  # Создаем папку для базы, если она отсутствует
    try:
        with sqlite3.connect(db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS run_reports (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    date TEXT NOT NULL,
                    algo TEXT NOT NULL,
                    params_json TEXT NOT NULL,
                    trials INTEGER NOT NULL,
                    failure_rate REAL NOT NULL,
                    mean_pulls REAL NOT NULL,
                    mean_passes REAL NOT NULL,
                    bound_ratio REAL,
                    report_path TEXT
                )
            """)
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS acceptance_results (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    date TEXT NOT NULL,
                    criterion TEXT NOT NULL,
                    passed INTEGER NOT NULL,
                    metric REAL,
                    detail TEXT NOT NULL
                )
            """)
            conn.commit()
            logger.info("Таблицы базы данных успешно инициализированы.")
    except sqlite3.Error as e:
        logger.error(f"Ошибка инициализации базы данных: {e}")


def save_run_report(date, report, report_path, db_path: str = DB_PATH):
    """
    Сохраняет сводный отчёт серии испытаний.
    :param date: Дата запуска (YYYY-MM-DD).
    :param report: AggregateReport.
    :param report_path: Путь к файлу отчёта или None.
    """
    try:
        with sqlite3.connect(db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                INSERT INTO run_reports (date, algo, params_json, trials, failure_rate, mean_pulls,
                                         mean_passes, bound_ratio, report_path)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (date, report.algo, json.dumps(report.params, sort_keys=True), report.trials,
                  report.failure_rate, report.mean_pulls, report.mean_passes, report.bound_ratio,
                  report_path))
            conn.commit()
            logger.info("Отчёт успешно сохранён в базу данных.")
    except sqlite3.Error as e:
        logger.error(f"Ошибка сохранения отчёта в базу: {e}")


def save_acceptance_result(date, criterion, passed, metric, detail, db_path: str = DB_PATH):
    """
    Сохраняет вердикт одного приёмочного критерия.
    """
    try:
        with sqlite3.connect(db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                INSERT INTO acceptance_results (date, criterion, passed, metric, detail)
                VALUES (?, ?, ?, ?, ?)
            """, (date, criterion, int(passed), metric, detail))
            conn.commit()
    except sqlite3.Error as e:
        logger.error(f"Ошибка сохранения результата критерия {criterion}: {e}")


def fetch_latest_metric(criterion, db_path: str = DB_PATH) -> Optional[float]:
    """
    Возвращает метрику последнего успешного прогона критерия или None.
    """
    try:
        with sqlite3.connect(db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                SELECT metric FROM acceptance_results
                WHERE criterion = ? AND passed = 1 AND metric IS NOT NULL
                ORDER BY id DESC LIMIT 1
            """, (criterion,))
            row = cursor.fetchone()
            return row[0] if row else None
    except sqlite3.Error as e:
        logger.error(f"Ошибка чтения метрики критерия {criterion}: {e}")
        return None
