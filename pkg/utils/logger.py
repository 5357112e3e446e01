import logging

from config import LOG_LEVEL


def setup_logging(level: str = LOG_LEVEL):
    """Единая настройка логирования для CLI и планировщика."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()]
    )
