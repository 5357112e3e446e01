import logging
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from bandit.errors import InvalidSpecError
from bandit.instance import BanditInstance

logger = logging.getLogger(__name__)


class InstanceSpec(BaseModel):
    """
    Описание экземпляра для генератора.
    one-gap: top_count рук со средним mu_top, остальные mu_top − gap;
    linear: равномерная сетка от mu_lo до mu_hi;
    explicit: явный список means.
    """

    model_config = ConfigDict(frozen=True)

    n: Optional[int] = Field(default=None, ge=1)
    profile: Literal["one-gap", "linear", "explicit"] = "one-gap"
    mu_top: float = 0.6
    gap: float = 0.25
    top_count: int = Field(default=1, ge=1)
    mu_lo: float = 0.1
    mu_hi: float = 0.9
    means: Optional[tuple[float, ...]] = None
    order: Literal["ascending", "descending", "random", "as-given"] = "as-given"
    order_seed: Optional[int] = None
    distribution: Literal["bernoulli", "deterministic", "beta"] = "bernoulli"
    concentration: float = Field(default=2.0, gt=0.0)
    require_unique_best: bool = False


def profile_means(spec: InstanceSpec) -> np.ndarray:
    """Средние профиля до упорядочивания."""
    if spec.profile == "explicit":
        if not spec.means:
            raise InvalidSpecError("Профиль explicit требует непустой список means.")
        if spec.n is not None and spec.n != len(spec.means):
            raise InvalidSpecError(f"n={spec.n} не совпадает с длиной means={len(spec.means)}")
        return np.array(spec.means, dtype=float)

    if spec.n is None:
        raise InvalidSpecError(f"Профиль {spec.profile} требует n.")
    if spec.profile == "one-gap":
        if spec.top_count > spec.n:
            raise InvalidSpecError(f"top_count={spec.top_count} больше n={spec.n}")
        rest = spec.n - spec.top_count
        return np.array([spec.mu_top] * spec.top_count + [spec.mu_top - spec.gap] * rest, dtype=float)
    return np.linspace(spec.mu_lo, spec.mu_hi, spec.n)


def generate_instance(spec: InstanceSpec, rng: Optional[np.random.Generator] = None) -> BanditInstance:
    """
    Строит экземпляр по спецификации. Результат детерминирован для (spec, состояние rng);
    перестановка для order=random берётся из order_seed, если он задан, иначе из rng.
    """
    means = profile_means(spec)
    if means.size == 0 or np.any(means < 0.0) or np.any(means > 1.0):
        raise InvalidSpecError(f"Средние должны лежать в [0, 1]: {means.tolist()}")

    if spec.order == "ascending":
        means = np.sort(means, kind="stable")
    elif spec.order == "descending":
        means = np.sort(means, kind="stable")[::-1]
    elif spec.order == "random":
        order_rng = np.random.default_rng(spec.order_seed) if spec.order_seed is not None else rng
        if order_rng is None:
            raise InvalidSpecError("Для случайного порядка нужен rng или order_seed.")
        means = order_rng.permutation(means)

    instance = BanditInstance.from_means(means.tolist(), spec.distribution, spec.concentration)
    if spec.require_unique_best and not instance.has_unique_best():
        raise InvalidSpecError("Лучшая рука должна быть единственной (Δ_2 > 0).")
    return instance
