import logging
from dataclasses import dataclass, field
from typing import Optional

from bandit.errors import InvalidInputError, InvalidParamsError, StaleSessionError
from bandit.schedules import ScheduleParams, budget_s, draw_alpha
from bandit.stream import StreamSession
from services.eps_bai_service import challenge

logger = logging.getLogger(__name__)


@dataclass
class TopKState:
    """
    k пар (id руки, оценка среднего) и общий счётчик побед j.
    Хранятся только скаляры: сохранённые руки больше не вытягиваются.
    """

    entries: list[tuple[int, float]] = field(default_factory=list)
    min_entry: int = 0
    beat_count: int = 1

    def recompute_min(self):
        # при равенстве оценок побеждает меньший id
        self.min_entry = min(range(len(self.entries)), key=lambda i: (self.entries[i][1], self.entries[i][0]))

    @property
    def min_mean(self) -> float:
        return self.entries[self.min_entry][1]

    @property
    def min_id(self) -> int:
        return self.entries[self.min_entry][0]


@dataclass(frozen=True)
class EvictionEvent:
    inserted_id: int
    inserted_mean: float
    evicted_id: int
    evicted_mean: float
    alpha: float
    remaining_means: tuple[float, ...]  # оценки, оставшиеся в множестве на момент вытеснения
    min_mean_after: float
    round_index: int
    budget: int
    threshold: int


class EpsKaiService:
    """Однопроходный поиск ε-top-k рук."""

    def __init__(self, params: ScheduleParams):
        self.params = params
        self.state: Optional[TopKState] = None
        self.trace: list[EvictionEvent] = []
        self.initial_min: Optional[float] = None

    def run(self, session: StreamSession) -> list[int]:
        """
        :return: Отсортированные id k рук.
        """
        params = self.params
        k = params.k
        if k < 1:
            raise InvalidParamsError(f"k должно быть >= 1, получено: {k}")
        if session.n < k:
            raise InvalidInputError(f"В потоке {session.n} рук, меньше k={k}")
        if session.pass_count != 0:
            raise StaleSessionError(f"Сессия уже использована: проходов {session.pass_count}")

        self.trace = []
        state = TopKState()
        self.state = state

        arm_id = session.begin_pass()
        s1 = budget_s(1, params)
        while len(state.entries) < k:
            session.sample_mean(s1)
            state.entries.append((arm_id, session.running_mean()))
            arm_id = session.advance()
        state.recompute_min()
        self.initial_min = state.min_mean

        while arm_id is not None:
            alpha = draw_alpha(state.beat_count, params.epsilon, session.rng, params.alpha_rule)
            outcome = challenge(session, state.min_mean, alpha, state.beat_count, params)
            if outcome.replaced:
                evicted_id, evicted_mean = state.entries[state.min_entry]
                remaining = tuple(mean for i, (_, mean) in enumerate(state.entries) if i != state.min_entry)
                # вытеснение минимума и пересчёт top^o выполняются одним шагом
                state.entries[state.min_entry] = (arm_id, outcome.estimate)
                state.recompute_min()
                state.beat_count = 1
                self.trace.append(EvictionEvent(
                    inserted_id=arm_id,
                    inserted_mean=outcome.estimate,
                    evicted_id=evicted_id,
                    evicted_mean=evicted_mean,
                    alpha=alpha,
                    remaining_means=remaining,
                    min_mean_after=state.min_mean,
                    round_index=outcome.round_index,
                    budget=outcome.budget,
                    threshold=outcome.threshold,
                ))
                logger.debug(f"Рука {arm_id} вытеснила руку {evicted_id} из top-{k}")
            else:
                state.beat_count += 1
            arm_id = session.advance()

        return sorted(arm for arm, _ in state.entries)


def run_eps_kai(session: StreamSession, k: int, params: ScheduleParams) -> list[int]:
    """Алгоритм ε-KAI; k переопределяет params.k."""
    if k < 1:
        raise InvalidParamsError(f"k должно быть >= 1, получено: {k}")
    if params.k != k:
        params = params.model_copy(update={"k": k})
    return EpsKaiService(params).run(session)
