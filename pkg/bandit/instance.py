from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from bandit.errors import InvalidInputError, InvalidParamsError


class RewardDistribution(ABC):
    """Распределение наград руки с носителем в [0, 1]."""

    @abstractmethod
    def mean(self) -> float:
        """Точное аналитическое среднее."""

    @abstractmethod
    def draw_sum(self, rng: np.random.Generator, count: int) -> float:
        """
        Сумма count независимых наград.
        :param rng: Генератор сессии.
        :param count: Число вытягиваний (>= 1).
        :return: Сумма наград.
        """


@dataclass(frozen=True)
class Bernoulli(RewardDistribution):
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParamsError(f"Вероятность Бернулли вне [0, 1]: {self.p}")

    def mean(self) -> float:
        return self.p

    def draw_sum(self, rng: np.random.Generator, count: int) -> float:
        return float(rng.binomial(count, self.p))


@dataclass(frozen=True)
class Deterministic(RewardDistribution):
    v: float

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise InvalidParamsError(f"Детерминированная награда вне [0, 1]: {self.v}")

    def mean(self) -> float:
        return self.v

    def draw_sum(self, rng: np.random.Generator, count: int) -> float:
        return self.v * count


@dataclass(frozen=True)
class ScaledBeta(RewardDistribution):
    a: float
    b: float

    # Ограничение размера одного вектора выборки
    CHUNK = 1 << 20

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidParamsError(f"Параметры Beta должны быть > 0: a={self.a}, b={self.b}")

    def mean(self) -> float:
        return self.a / (self.a + self.b)

    def draw_sum(self, rng: np.random.Generator, count: int) -> float:
        total = 0.0
        remaining = count
        while remaining > 0:
            size = min(remaining, self.CHUNK)
            total += float(rng.beta(self.a, self.b, size=size).sum())
            remaining -= size
        return total


@dataclass(frozen=True)
class ArmSpec:
    id: int
    dist: RewardDistribution

    @property
    def mean(self) -> float:
        return self.dist.mean()


@dataclass(frozen=True)
class BanditInstance:
    """
    Упорядоченный поток рук. Порядок в arms совпадает с порядком поступления,
    id руки равен её позиции (с 1). Все производные величины считаются
    по аналитическим средним, а не по выборкам.
    """

    arms: tuple[ArmSpec, ...]

    def __post_init__(self):
        ids = [arm.id for arm in self.arms]
        if ids != list(range(1, len(ids) + 1)):
            raise InvalidInputError(f"id рук должны идти подряд с 1, получено: {ids}")

    @classmethod
    def from_means(
        cls,
        means: Sequence[float],
        dist: str = "bernoulli",
        concentration: float = 2.0,
    ) -> "BanditInstance":
        """
        Строит экземпляр по списку средних в порядке потока.
        :param means: Средние рук.
        :param dist: bernoulli | deterministic | beta.
        :param concentration: a + b для beta-рук.
        :return: BanditInstance.
        """
        arms = []
        for index, mu in enumerate(means, start=1):
            if dist == "bernoulli":
                reward = Bernoulli(float(mu))
            elif dist == "deterministic":
                reward = Deterministic(float(mu))
            elif dist == "beta":
                if not 0.0 < mu < 1.0:
                    raise InvalidParamsError(f"Beta-рука требует среднее в (0, 1): {mu}")
                reward = ScaledBeta(float(mu) * concentration, (1.0 - float(mu)) * concentration)
            else:
                raise InvalidParamsError(f"Неизвестное распределение: {dist}")
            arms.append(ArmSpec(id=index, dist=reward))
        return cls(arms=tuple(arms))

    @property
    def n(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> np.ndarray:
        return np.array([arm.mean for arm in self.arms], dtype=float)

    def mean_of(self, arm_id: int) -> float:
        return self.arms[arm_id - 1].mean

    @property
    def sorted_means(self) -> np.ndarray:
        return np.sort(self.means)[::-1]

    @property
    def mu_star(self) -> float:
        return self.mu_star_k(1)

    def mu_star_k(self, k: int) -> float:
        """k-е по величине среднее."""
        if not 1 <= k <= self.n:
            raise InvalidParamsError(f"k вне [1, {self.n}]: {k}")
        return float(self.sorted_means[k - 1])

    def gaps(self, k: int = 1) -> np.ndarray:
        """Δ_i = μ*(k) − μ_(i) для рангов i > k, по убыванию средних."""
        ordered = self.sorted_means
        return ordered[k - 1] - ordered[k:]

    def has_unique_best(self) -> bool:
        return self.n == 1 or bool(self.gaps(1)[0] > 0)

    def best_arm_id(self) -> int:
        return int(np.argmax(self.means)) + 1

    def best_arm_ids(self, k: int = 1) -> list[int]:
        """Идентификаторы k лучших рук; при равных средних выигрывает меньший id."""
        if not 1 <= k <= self.n:
            raise InvalidParamsError(f"k вне [1, {self.n}]: {k}")
        order = np.argsort(-self.means, kind="stable")[:k]
        return sorted(int(index) + 1 for index in order)
