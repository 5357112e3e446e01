import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from bandit.errors import InvalidInputError, InvalidParamsError, RoundLimitError
from bandit.schedules import (
    AlphaRule,
    BatchVariant,
    ScheduleParams,
    candidate_pulls,
    elimination_batch,
    elimination_budget,
    elimination_guard,
    round_delta,
    round_epsilon,
    threshold_tau,
)
from bandit.stream import MAX_PULL_COUNT, StreamSession
from config import ALPHA_RULE, ID_BAI_BATCH_VARIANT, ID_BAI_MAX_ROUNDS, SCHEDULE_C
from services.eps_bai_service import restricted_eps_bai

logger = logging.getLogger(__name__)


@dataclass
class IdBaiRoundState:
    """Состояние и итоги одного раунда ID-BAI."""

    r: int
    eps_r: float
    delta_r: float
    survivors: frozenset[int]  # S_r на начало раунда
    candidate_r: int = 0
    I_r: float = 0.0
    B_r: int = 0  # остаток бюджета на конец раунда, может быть отрицательным
    h: int = 1
    first_pass: int = 0
    last_pass: int = 0
    budgeted_arms: int = 0
    unbudgeted_arms: int = 0
    eliminated: int = 0


def round_pull_scale(survivors: int, eps_r: float, delta_r: float, C: float = SCHEDULE_C) -> int:
    """
    Верхняя оценка числа вытягиваний одной руки за раунд: проход ε-BAI
    (не больше 2τ_j при j <= |S_r|), оценка кандидата и отсев.
    """
    params = ScheduleParams(epsilon=eps_r, delta=delta_r, C=C, allow_small_c=C < 100)
    return max(
        2 * threshold_tau(survivors, params) + 1,
        candidate_pulls(eps_r, delta_r),
        elimination_budget(survivors, eps_r, delta_r),
        4 * math.ceil(elimination_guard(eps_r, delta_r, survivors)),
    )


class IdBaiService:
    """
    Многопроходная точная идентификация лучшей руки.
    Раунд: проход ε-BAI по выжившим, проход к кандидату за оценкой I_r,
    проход отсева по S_r без кандидата.
    """

    def __init__(
        self,
        delta: float,
        C: float = SCHEDULE_C,
        alpha_rule: AlphaRule = ALPHA_RULE,
        batch_variant: BatchVariant = ID_BAI_BATCH_VARIANT,
        max_rounds: int = ID_BAI_MAX_ROUNDS,
    ):
        """
        :param delta: Уровень доверия δ ∈ (0, 1).
        :param C: Универсальная константа расписаний подпрограммы.
        :param alpha_rule: Правило выбора α в подпрограмме.
        :param batch_variant: Размер пачек отсева: pseudocode | prose.
        :param max_rounds: Предельное число раундов.
        """
        if not 0.0 < delta < 1.0:
            raise InvalidParamsError(f"δ должна лежать в (0, 1), получено: {delta}")
        if batch_variant == "prose":
            logger.warning("ID-BAI: используется вариант пачек из текстового описания (prose)")
        self.delta = delta
        self.C = C
        self.alpha_rule = alpha_rule
        self.batch_variant = batch_variant
        self.max_rounds = max_rounds
        self.rounds: list[IdBaiRoundState] = []

    def run(self, session: StreamSession) -> int:
        n = session.n
        if n == 0:
            raise InvalidInputError("Пустой поток рук.")

        survivors = np.ones(n + 1, dtype=bool)
        survivors[0] = False
        self.rounds = []

        r = 1
        while survivors.sum() > 1:
            if r > self.max_rounds:
                raise RoundLimitError(
                    f"ID-BAI не завершился за {self.max_rounds} раундов; "
                    f"выживших {int(survivors.sum())}. Возможно, лучшая рука не единственна."
                )
            # накопленные вытягивания руки не больше 4/3 оценки последнего раунда
            scale = round_pull_scale(int(survivors.sum()), round_epsilon(r), round_delta(self.delta, r), self.C)
            if scale > MAX_PULL_COUNT // 4:
                raise RoundLimitError(
                    f"ID-BAI остановлен перед раундом {r}: раунду нужно до {scale} вытягиваний руки, "
                    f"предел {MAX_PULL_COUNT // 4}; выживших {int(survivors.sum())}. "
                    f"Возможно, лучшая рука не единственна."
                )
            state = self._run_round(session, survivors, r)
            self.rounds.append(state)
            logger.info(
                f"ID-BAI раунд {r}: ε_r={state.eps_r:.6g}, кандидат {state.candidate_r}, "
                f"I_r={state.I_r:.4f}, отсеяно {state.eliminated}, осталось {int(survivors.sum())}"
            )
            r += 1

        return int(np.flatnonzero(survivors)[0])

    def _run_round(self, session: StreamSession, survivors: np.ndarray, r: int) -> IdBaiRoundState:
        eps_r = round_epsilon(r)
        delta_r = round_delta(self.delta, r)
        state = IdBaiRoundState(
            r=r,
            eps_r=eps_r,
            delta_r=delta_r,
            survivors=frozenset(int(i) for i in np.flatnonzero(survivors)),
            first_pass=session.pass_count + 1,
        )

        candidate = restricted_eps_bai(session, survivors, eps_r, delta_r, self.C, self.alpha_rule)
        state.candidate_r = candidate

        session.seek(candidate)
        session.sample_mean(candidate_pulls(eps_r, delta_r))
        I_r = session.running_mean()
        state.I_r = I_r

        budget = elimination_budget(len(state.survivors), eps_r, delta_r)
        h = 1
        arm_id = session.begin_pass()
        while arm_id is not None:
            if survivors[arm_id] and arm_id != candidate:
                if budget > 0:
                    state.budgeted_arms += 1
                    s_i = 0
                    l = 1
                    while s_i <= elimination_guard(eps_r, delta_r, h):
                        batch = elimination_batch(l, eps_r, delta_r, h, self.batch_variant)
                        session.sample_mean(batch)
                        budget -= batch
                        s_i += batch
                        if session.running_mean() < I_r - eps_r:
                            survivors[arm_id] = False
                            state.eliminated += 1
                            h += 1
                            break
                        l += 1
                else:
                    state.unbudgeted_arms += 1
                    session.sample_mean(elimination_batch(1, eps_r, delta_r, h, self.batch_variant))
                    if session.running_mean() < I_r - eps_r:
                        survivors[arm_id] = False
                        state.eliminated += 1
            arm_id = session.advance()

        state.B_r = budget
        state.h = h
        state.last_pass = session.pass_count
        return state


def run_id_bai(
    session: Union[StreamSession, Callable[[], StreamSession]],
    delta: float,
    C: float = SCHEDULE_C,
    **kwargs,
) -> int:
    """
    ID-BAI. Принимает сессию или фабрику сессий.
    :return: id единственной выжившей руки.
    """
    if not isinstance(session, StreamSession):
        session = session()
    return IdBaiService(delta, C=C, **kwargs).run(session)
