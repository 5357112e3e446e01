"""
Расписания вытягиваний и случайный порог сравнения α.

Все логарифмы натуральные. Дробные количества вытягиваний округляются вверх.
"""
import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from bandit.errors import InvalidParamsError

logger = logging.getLogger(__name__)

AlphaRule = Literal["randomized", "fixed-half", "fixed-quarter"]
BatchVariant = Literal["pseudocode", "prose"]

MIN_UNIVERSAL_C = 100.0


class ScheduleParams(BaseModel):
    """Параметры расписаний s_ℓ и τ_j."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(gt=0.0, lt=1.0)
    delta: float = Field(gt=0.0, lt=1.0)
    k: int = Field(default=1, ge=1)
    C: float = Field(default=MIN_UNIVERSAL_C, ge=1.0)
    alpha_rule: AlphaRule = "randomized"
    allow_small_c: bool = False

    @model_validator(mode="after")
    def _check_universal_constant(self):
        if self.C < MIN_UNIVERSAL_C:
            if not self.allow_small_c:
                raise ValueError(f"C должна быть >= {MIN_UNIVERSAL_C:g}, получено: {self.C}")
            logger.warning(f"Экспериментальная константа C={self.C:g} < {MIN_UNIVERSAL_C:g}")
        return self


def budget_s(l: int, params: ScheduleParams) -> int:
    """
    Накопленный бюджет раунда ℓ: s_0 = 0, s_ℓ = ⌈16/ε² · ln(C·k/δ) · 2^ℓ⌉.
    :param l: Номер раунда (>= 0).
    :param params: Параметры расписания.
    :return: Число вытягиваний.
    """
    if l < 0:
        raise InvalidParamsError(f"Номер раунда должен быть >= 0, получено: {l}")
    if l == 0:
        return 0
    # порядок операций совпадает с threshold_tau, чтобы s_1 и τ_1 совпадали бит в бит
    return math.ceil(16.0 * math.log(params.C * params.k / params.delta) / params.epsilon ** 2 * 2 ** l)


def threshold_tau(j: int, params: ScheduleParams) -> int:
    """τ_j = ⌈32/ε² · ln(C·k·j²/δ)⌉."""
    if j < 1:
        raise InvalidParamsError(f"Счётчик побед j должен быть >= 1, получено: {j}")
    return math.ceil(32.0 * math.log(params.C * params.k * j * j / params.delta) / params.epsilon ** 2)


def alpha_quarter_probability(j: int) -> float:
    """Pr(α = ε/4) = 1 / (ln j + 1)."""
    if j < 1:
        raise InvalidParamsError(f"Счётчик побед j должен быть >= 1, получено: {j}")
    return 1.0 / (math.log(j) + 1.0)


def draw_alpha(j: int, epsilon: float, rng: np.random.Generator, rule: AlphaRule = "randomized") -> float:
    """
    Выбирает запас сравнения α ∈ {ε/4, ε/2}.
    Правило randomized тратит ровно одно равномерное число из rng,
    фиксированные правила генератор не трогают.
    """
    if rule == "fixed-half":
        return epsilon / 2
    if rule == "fixed-quarter":
        return epsilon / 4
    probability = alpha_quarter_probability(j)
    return epsilon / 4 if rng.random() < probability else epsilon / 2


def round_epsilon(r: int) -> float:
    """ε_r = 2^{−r} / 4."""
    return 2.0 ** (-r) / 4.0


def round_delta(delta: float, r: int) -> float:
    """δ_r = δ / (40·r²)."""
    return delta / (40.0 * r * r)


def candidate_pulls(eps_r: float, delta_r: float) -> int:
    """Вытягивания кандидата раунда для оценки I_r: ⌈2/ε_r² · ln(1/δ_r)⌉."""
    return math.ceil(2.0 / eps_r ** 2 * math.log(1.0 / delta_r))


def elimination_budget(survivors: int, eps_r: float, delta_r: float) -> int:
    """B_r = ⌈6|S_r|/ε_r² · ln(40/δ_r)⌉."""
    return math.ceil(6.0 * survivors / eps_r ** 2 * math.log(40.0 / delta_r))


def elimination_guard(eps_r: float, delta_r: float, h: int) -> float:
    """Порог цикла: пока s_i <= 2/ε_r² · ln(40h²/δ_r)."""
    return 2.0 / eps_r ** 2 * math.log(40.0 * h * h / delta_r)


def elimination_batch(l: int, eps_r: float, delta_r: float, h: int = 1, variant: BatchVariant = "pseudocode") -> int:
    """
    Размер пачки итерации ℓ в ветке с бюджетом (при ℓ = 1 это размер пачки без бюджета).
    pseudocode: ⌈2^ℓ/ε_r² · ln(40/δ_r)⌉, prose: ⌈2^ℓ/ε_r² · ln(40h²/δ_r)⌉.
    """
    if l < 1:
        raise InvalidParamsError(f"Номер итерации должен быть >= 1, получено: {l}")
    factor = 40.0 * h * h if variant == "prose" else 40.0
    return math.ceil(2.0 ** l / eps_r ** 2 * math.log(factor / delta_r))


def uniform_pulls(n: int, epsilon: float, delta: float) -> int:
    """Равномерная схема с union bound: ⌈2/ε² · ln(2n/δ)⌉ на руку."""
    return math.ceil(2.0 / epsilon ** 2 * math.log(2.0 * n / delta))
