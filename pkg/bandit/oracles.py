"""
Проверки правильности по аналитическим средним и нормирующие оценки числа вытягиваний.
"""
import math
from dataclasses import dataclass
from typing import Literal, Sequence

from bandit.errors import InvalidInputError, InvalidInstanceError, InvalidParamsError
from bandit.instance import BanditInstance

Criterion = Literal["eps-best", "eps-top-k", "exact-best"]

# допуск на погрешность вычитания средних
TOLERANCE = 1e-12


@dataclass(frozen=True)
class TrialVerdict:
    correct: bool
    returned_ids: tuple[int, ...]
    criterion: Criterion


def _check_id(instance: BanditInstance, arm_id: int):
    if not 1 <= arm_id <= instance.n:
        raise InvalidInputError(f"Недопустимый id руки: {arm_id}")


def check_eps_best(instance: BanditInstance, returned_id: int, eps: float) -> bool:
    """Истина, если μ* − μ_returned <= ε."""
    _check_id(instance, returned_id)
    return instance.mu_star - instance.mean_of(returned_id) <= eps + TOLERANCE


def check_eps_topk(instance: BanditInstance, returned_ids: Sequence[int], k: int, eps: float) -> bool:
    """Истина, если каждая возвращённая рука имеет μ >= μ*(k) − ε."""
    if len(returned_ids) != k:
        raise InvalidInputError(f"Ожидалось {k} рук, получено {len(returned_ids)}")
    if len(set(returned_ids)) != len(returned_ids):
        raise InvalidInputError(f"Повторяющиеся id в ответе: {list(returned_ids)}")
    for arm_id in returned_ids:
        _check_id(instance, arm_id)
    threshold = instance.mu_star_k(k) - eps
    return all(instance.mean_of(arm_id) >= threshold - TOLERANCE for arm_id in returned_ids)


def check_exact_best(instance: BanditInstance, returned_id: int) -> bool:
    """Истина, если возвращена единственная лучшая рука."""
    _check_id(instance, returned_id)
    return instance.has_unique_best() and returned_id == instance.best_arm_id()


def verdict(instance: BanditInstance, returned_ids: Sequence[int], criterion: Criterion, eps: float = 0.0, k: int = 1) -> TrialVerdict:
    if criterion == "eps-best":
        correct = check_eps_best(instance, returned_ids[0], eps)
    elif criterion == "eps-top-k":
        correct = check_eps_topk(instance, returned_ids, k, eps)
    else:
        correct = check_exact_best(instance, returned_ids[0])
    return TrialVerdict(correct=correct, returned_ids=tuple(returned_ids), criterion=criterion)


def worst_case_bound(n: int, eps: float, delta: float, k: int = 1) -> float:
    """(n/ε²)·ln(k/δ): нормировка для отношений, а не гарантия."""
    if n < 1 or k < 1 or not 0.0 < eps < 1.0 or not 0.0 < delta < 1.0:
        raise InvalidParamsError(f"Недопустимые параметры: n={n}, ε={eps}, δ={delta}, k={k}")
    return n / eps ** 2 * math.log(k / delta)


def instance_bound(instance: BanditInstance, delta: float) -> float:
    """
    Σ_{i>=2} Δ_i^{-2} · ln(max(2, (1/δ)·ln(max(2, 1/Δ_i)))).
    Оба аргумента логарифмов ограничены снизу 2, чтобы выражение оставалось
    положительным при больших разрывах.
    """
    if instance.n < 2:
        raise InvalidInstanceError("Для оценки по экземпляру нужно минимум две руки.")
    gaps = instance.gaps(1)
    if gaps[0] <= 0:
        raise InvalidInstanceError("Лучшая рука не единственна: Δ_2 = 0.")
    total = 0.0
    for gap in gaps:
        inner = math.log(max(2.0, 1.0 / gap))
        total += gap ** -2 * math.log(max(2.0, inner / delta))
    return total
