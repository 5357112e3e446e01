import argparse
import asyncio
import datetime
import logging
import sys
from typing import Optional

from pydantic import ValidationError

from bandit.errors import BanditError
from bandit.generator import InstanceSpec
from config import (
    ALPHA_RULE,
    DB_PATH,
    DEFAULT_BASE_SEED,
    DEFAULT_PARALLELISM,
    ID_BAI_BATCH_VARIANT,
    SCHEDULE_C,
)
from runners.accept_runner import run_acceptance_suite
from runners.models import ALGORITHMS, TrialConfig
from runners.scheduler import start_scheduler
from runners.sweep_runner import parse_vary, run_sweep
from runners.trial_runner import run_trials
from utils.database import initialize_database, save_run_report
from utils.logger import setup_logging
from utils.report_utils import create_report_path, write_json_report, write_sweep_csv, write_sweep_json, write_trials_csv

logger = logging.getLogger(__name__)


def add_run_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--algo", choices=ALGORITHMS, default="eps-bai")
    parser.add_argument("--n", type=int, default=None, help="Число рук (для профилей one-gap и linear)")
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--eps", type=float, default=0.25)
    parser.add_argument("--delta", type=float, default=0.1)
    parser.add_argument("--C", type=float, default=SCHEDULE_C)

    parser.add_argument("--profile", choices=["one-gap", "linear", "explicit"], default="one-gap")
    parser.add_argument("--mu-top", type=float, default=0.6)
    parser.add_argument("--gap", type=float, default=0.25)
    parser.add_argument("--top-count", type=int, default=1)
    parser.add_argument("--mu-lo", type=float, default=0.1)
    parser.add_argument("--mu-hi", type=float, default=0.9)
    parser.add_argument("--means", type=str, default=None, help="Средние через запятую для профиля explicit")
    parser.add_argument("--order", choices=["ascending", "descending", "random", "as-given"], default="as-given")
    parser.add_argument("--order-seed", type=int, default=None)
    parser.add_argument("--dist", choices=["bernoulli", "deterministic", "beta"], default="bernoulli")
    parser.add_argument("--concentration", type=float, default=2.0)

    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=DEFAULT_BASE_SEED)
    parser.add_argument("--parallelism", type=int, default=DEFAULT_PARALLELISM)
    parser.add_argument("--alpha-rule", choices=["randomized", "fixed-half", "fixed-quarter"], default=ALPHA_RULE)
    parser.add_argument("--batch-variant", choices=["pseudocode", "prose"], default=ID_BAI_BATCH_VARIANT)

    parser.add_argument("--out", type=str, default=None, help="Файл отчёта; по умолчанию storage/reports/...")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--per-trial", action="store_true", help="Включить отчёты по испытаниям в JSON")
    parser.add_argument("--verbose", action="store_true", help="Добавить сводку вытягиваний по рукам")
    parser.add_argument("--no-audit", action="store_true", help="Отключить журнал и проверки инвариантов")
    parser.add_argument("--save", action="store_true", help="Сохранить сводку в базу данных")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Потоковые алгоритмы идентификации лучших рук: прогоны и приёмка")
    subparsers = parser.add_subparsers(dest="command", required=True)

    add_run_arguments(subparsers.add_parser("run", help="Серия испытаний Монте-Карло"))

    sweep = subparsers.add_parser("sweep", help="Серия испытаний для каждого значения параметра")
    add_run_arguments(sweep)
    sweep.add_argument("--vary", required=True, help="Например: n=50,200,800")

    accept = subparsers.add_parser("accept", help="Приёмочный прогон; ненулевой код выхода при провале")
    accept.add_argument("--parallelism", type=int, default=DEFAULT_PARALLELISM)
    accept.add_argument("--save", action="store_true", help="Сохранить вердикты в базу данных")

    subparsers.add_parser("schedule", help="Ночной приёмочный прогон по расписанию")
    return parser


def parse_means(raw: Optional[str]) -> Optional[tuple[float, ...]]:
    if not raw:
        return None
    return tuple(float(value) for value in raw.split(",") if value.strip())


def config_from_args(args: argparse.Namespace) -> TrialConfig:
    instance = InstanceSpec(
        n=args.n,
        profile=args.profile,
        mu_top=args.mu_top,
        gap=args.gap,
        top_count=args.top_count,
        mu_lo=args.mu_lo,
        mu_hi=args.mu_hi,
        means=parse_means(args.means),
        order=args.order,
        order_seed=args.order_seed,
        distribution=args.dist,
        concentration=args.concentration,
    )
    return TrialConfig(
        algo=args.algo,
        instance=instance,
        epsilon=args.eps,
        delta=args.delta,
        k=args.k,
        C=args.C,
        alpha_rule=args.alpha_rule,
        batch_variant=args.batch_variant,
        trials=args.trials,
        base_seed=args.seed,
        parallelism=args.parallelism,
        audit=not args.no_audit,
        per_trial=args.per_trial,
        verbose=args.verbose,
    )


async def command_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    aggregate, reports = await run_trials(config)

    report_path = args.out or create_report_path(f"run_{config.algo}", args.format)
    if args.format == "json":
        write_json_report(aggregate, report_path)
    else:
        write_trials_csv(reports, report_path)

    if args.save:
        initialize_database(DB_PATH)
        save_run_report(datetime.datetime.now().strftime("%Y-%m-%d"), aggregate, report_path, DB_PATH)
    return 0


async def command_sweep(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    key, values = parse_vary(args.vary)
    points = await run_sweep(config, key, values)

    report_path = args.out or create_report_path(f"sweep_{config.algo}_{key}", args.format)
    if args.format == "json":
        write_sweep_json(points, report_path)
    else:
        write_sweep_csv(points, report_path)

    if args.save:
        initialize_database(DB_PATH)
        date = datetime.datetime.now().strftime("%Y-%m-%d")
        for point in points:
            save_run_report(date, point.report, report_path, DB_PATH)
    return 0


async def command_accept(args: argparse.Namespace) -> int:
    results = await run_acceptance_suite(args.parallelism, db_path=DB_PATH if args.save else None)
    failed = [result.criterion for result in results if not result.passed]
    if failed:
        logger.error(f"Приёмка не пройдена: критерии {', '.join(failed)}")
        return 1
    logger.info("Приёмка пройдена: все критерии выполнены.")
    return 0


async def command_schedule(args: argparse.Namespace) -> int:
    logger.info("Запуск планировщика...")
    await start_scheduler()
    while True:
        await asyncio.sleep(3600)  # Бесконечное ожидание


COMMANDS = {
    "run": command_run,
    "sweep": command_sweep,
    "accept": command_accept,
    "schedule": command_schedule,
}


async def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return await COMMANDS[args.command](args)
    except (BanditError, ValidationError) as e:
        logger.error(f"Ошибка команды {args.command}: {e}")
        return 2


if __name__ == "__main__":
    setup_logging()
    sys.exit(asyncio.run(main()))
