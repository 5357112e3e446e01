import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from bandit.errors import InvalidInputError, InvalidParamsError, StaleSessionError
from bandit.schedules import AlphaRule, ScheduleParams, budget_s, draw_alpha, threshold_tau
from bandit.stream import StreamSession
from config import ALPHA_RULE, SCHEDULE_C

logger = logging.getLogger(__name__)

Survivors = Union[np.ndarray, Iterable[int]]


@dataclass
class EpsBaiState:
    """Память алгоритма: только скаляры о прошедших руках."""

    candidate_id: int
    candidate_mean: float
    beat_count: int = 1


@dataclass(frozen=True)
class ChallengeOutcome:
    replaced: bool
    estimate: float
    round_index: int
    budget: int
    threshold: int


@dataclass(frozen=True)
class ReplacementEvent:
    """Смена кандидата; пишется в трассу для проверки инвариантов, не в память алгоритма."""

    arm_id: int
    previous_id: int
    previous_mean: float
    new_mean: float
    alpha: float
    beat_count: int
    round_index: int
    budget: int
    threshold: int


def challenge(
    session: StreamSession,
    reference_mean: float,
    alpha: float,
    beat_count: int,
    params: ScheduleParams,
) -> ChallengeOutcome:
    """
    Сравнивает руку под курсором с эталонной оценкой по раундам ℓ = 1, 2, ...
    В раунде ℓ добирает s_ℓ − s_{ℓ−1} вытягиваний; оценка строится по всем
    вытягиваниям этой руки.
    :param session: Сессия с курсором на приходящей руке.
    :param reference_mean: μ̂ кандидата (или минимального элемента top-k).
    :param alpha: Запас сравнения.
    :param beat_count: Текущий j.
    :param params: Параметры расписания.
    :return: Исход сравнения.
    """
    threshold = threshold_tau(beat_count, params)
    l = 1
    while True:
        budget = budget_s(l, params)
        session.sample_mean(budget - budget_s(l - 1, params))
        estimate = session.running_mean()
        if estimate >= reference_mean + alpha and budget > threshold:
            return ChallengeOutcome(True, estimate, l, budget, threshold)
        if estimate < reference_mean + alpha:
            return ChallengeOutcome(False, estimate, l, budget, threshold)
        l += 1


def as_membership(survivors: Optional[Survivors], n: int) -> Optional[np.ndarray]:
    """Битовая маска членства по id рук (индекс 0 не используется)."""
    if survivors is None:
        return None
    if isinstance(survivors, np.ndarray) and survivors.dtype == bool:
        if survivors.shape != (n + 1,):
            raise InvalidInputError(f"Маска выживших должна иметь длину {n + 1}")
        return survivors
    mask = np.zeros(n + 1, dtype=bool)
    for arm_id in survivors:
        if not 1 <= arm_id <= n:
            raise InvalidInputError(f"Недопустимый id руки в множестве выживших: {arm_id}")
        mask[arm_id] = True
    return mask


def skip_to_member(session: StreamSession, arm_id: Optional[int], membership: Optional[np.ndarray]) -> Optional[int]:
    """Пропускает руки вне множества, не вытягивая их."""
    while arm_id is not None and membership is not None and not membership[arm_id]:
        arm_id = session.advance()
    return arm_id


class EpsBaiService:
    """Однопроходный поиск ε-лучшей руки с памятью на одну руку."""

    def __init__(self, params: ScheduleParams):
        if params.k != 1:
            raise InvalidParamsError(f"ε-BAI требует k = 1, получено: {params.k}")
        self.params = params
        self.state: Optional[EpsBaiState] = None
        self.trace: list[ReplacementEvent] = []

    def run(self, session: StreamSession) -> int:
        """
        Запуск на свежей сессии.
        :return: id возвращённой руки.
        """
        if session.pass_count != 0:
            raise StaleSessionError(f"Сессия уже использована: проходов {session.pass_count}")
        if session.n == 0:
            raise InvalidInputError("Пустой поток рук.")
        return self._scan(session, None)

    def run_restricted(self, session: StreamSession, survivors: Survivors) -> int:
        """
        Один проход только по рукам из survivors; остальные пропускаются без вытягиваний,
        j считает только пройденных выживших.
        """
        membership = as_membership(survivors, session.n)
        if not membership.any():
            raise InvalidInputError("Пустое множество выживших.")
        return self._scan(session, membership)

    def _scan(self, session: StreamSession, membership: Optional[np.ndarray]) -> int:
        params = self.params
        self.trace = []

        arm_id = skip_to_member(session, session.begin_pass(), membership)
        session.sample_mean(budget_s(1, params))
        state = EpsBaiState(candidate_id=arm_id, candidate_mean=session.running_mean())
        self.state = state

        arm_id = skip_to_member(session, session.advance(), membership)
        while arm_id is not None:
            alpha = draw_alpha(state.beat_count, params.epsilon, session.rng, params.alpha_rule)
            outcome = challenge(session, state.candidate_mean, alpha, state.beat_count, params)
            if outcome.replaced:
                self.trace.append(ReplacementEvent(
                    arm_id=arm_id,
                    previous_id=state.candidate_id,
                    previous_mean=state.candidate_mean,
                    new_mean=outcome.estimate,
                    alpha=alpha,
                    beat_count=state.beat_count,
                    round_index=outcome.round_index,
                    budget=outcome.budget,
                    threshold=outcome.threshold,
                ))
                logger.debug(
                    f"Рука {arm_id} заменила кандидата {state.candidate_id} "
                    f"(μ̂={outcome.estimate:.4f}, ℓ={outcome.round_index})"
                )
                state.candidate_id = arm_id
                state.candidate_mean = outcome.estimate
                state.beat_count = 1
            else:
                state.beat_count += 1
            arm_id = skip_to_member(session, session.advance(), membership)

        return state.candidate_id


def run_eps_bai(session: StreamSession, params: ScheduleParams) -> int:
    """Алгоритм ε-BAI на свежей сессии."""
    return EpsBaiService(params).run(session)


def restricted_eps_bai(
    session: StreamSession,
    survivors: Survivors,
    eps_r: float,
    delta_r: float,
    C: float = SCHEDULE_C,
    alpha_rule: AlphaRule = ALPHA_RULE,
) -> int:
    """ε-BAI по подмножеству рук; используется раундами ID-BAI."""
    params = ScheduleParams(epsilon=eps_r, delta=delta_r, C=C, alpha_rule=alpha_rule, allow_small_c=C < 100)
    return EpsBaiService(params).run_restricted(session, survivors)
