import logging

from bandit.errors import ConfigError
from runners.models import SweepPoint, TrialConfig
from runners.trial_runner import run_trials

logger = logging.getLogger(__name__)

# ключ sweep -> (поле, приведение типа); поля экземпляра помечены префиксом
SWEEP_KEYS = {
    "n": ("instance.n", int),
    "k": ("k", int),
    "eps": ("epsilon", float),
    "epsilon": ("epsilon", float),
    "delta": ("delta", float),
    "C": ("C", float),
    "trials": ("trials", int),
    "gap": ("instance.gap", float),
    "mu_top": ("instance.mu_top", float),
    "alpha_rule": ("alpha_rule", str),
}


def parse_vary(expression: str) -> tuple[str, list[str]]:
    """
    Разбирает выражение вида n=50,200,800.
    :return: (ключ, список значений как строки).
    """
    if "=" not in expression:
        raise ConfigError(f"Ожидалось выражение ключ=значения, получено: {expression}")
    key, raw_values = expression.split("=", 1)
    key = key.strip()
    if key not in SWEEP_KEYS:
        raise ConfigError(f"Неизвестный ключ sweep: {key}. Доступны: {', '.join(SWEEP_KEYS)}")
    values = [value.strip() for value in raw_values.split(",") if value.strip()]
    if not values:
        raise ConfigError(f"Пустой список значений для {key}")
    return key, values


def with_value(config: TrialConfig, key: str, raw_value: str) -> TrialConfig:
    """Копия конфигурации с подставленным значением; значения проходят валидацию модели."""
    path, cast = SWEEP_KEYS[key]
    value = cast(raw_value)
    data = config.model_dump()
    if path.startswith("instance."):
        data["instance"][path.split(".", 1)[1]] = value
    else:
        data[path] = value
    return TrialConfig.model_validate(data)


async def run_sweep(config: TrialConfig, key: str, values: list[str]) -> list[SweepPoint]:
    """Повторяет серию испытаний для каждого значения ключа; одна точка на конфигурацию."""
    points = []
    for raw_value in values:
        point_config = with_value(config, key, raw_value)
        logger.info(f"Sweep {key}={raw_value}")
        aggregate, _ = await run_trials(point_config)
        points.append(SweepPoint(key=key, value=SWEEP_KEYS[key][1](raw_value), report=aggregate))
    return points
