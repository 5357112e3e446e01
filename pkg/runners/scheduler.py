import logging

from apscheduler.schedulers.asyncio import AsyncIOScheduler

from config import ACCEPT_CRON_HOUR, ACCEPT_CRON_MINUTE, DB_PATH, DEFAULT_PARALLELISM
from runners.accept_runner import run_acceptance_suite

logger = logging.getLogger(__name__)


async def nightly_acceptance():
    """Приёмочный прогон по расписанию; вердикты и метрики уходят в базу."""
    results = await run_acceptance_suite(parallelism=DEFAULT_PARALLELISM, db_path=DB_PATH)
    failed = [result.criterion for result in results if not result.passed]
    if failed:
        logger.error(f"Ночной прогон: не пройдены критерии {', '.join(failed)}")
    else:
        logger.info("Ночной прогон: все критерии пройдены.")


async def start_scheduler() -> AsyncIOScheduler:
    """
    Запускает планировщик ночного приёмочного прогона.
    """
    scheduler = AsyncIOScheduler()
    scheduler.add_job(nightly_acceptance, "cron", hour=ACCEPT_CRON_HOUR, minute=ACCEPT_CRON_MINUTE)
    scheduler.start()
    logger.info(f"Планировщик запущен: приёмка ежедневно в {ACCEPT_CRON_HOUR:02d}:{ACCEPT_CRON_MINUTE:02d}.")
    return scheduler
