import logging

from bandit.errors import InvalidInputError, InvalidParamsError, StaleSessionError
from bandit.schedules import uniform_pulls
from bandit.stream import StreamSession

logger = logging.getLogger(__name__)


class UniformService:
    """Наивный базовый алгоритм: одинаковое число вытягиваний каждой руки за один проход."""

    def __init__(self, epsilon: float, delta: float):
        if not 0.0 < epsilon < 1.0 or not 0.0 < delta < 1.0:
            raise InvalidParamsError(f"ε и δ должны лежать в (0, 1): ε={epsilon}, δ={delta}")
        self.epsilon = epsilon
        self.delta = delta

    def run(self, session: StreamSession) -> int:
        if session.n == 0:
            raise InvalidInputError("Пустой поток рук.")
        if session.pass_count != 0:
            raise StaleSessionError(f"Сессия уже использована: проходов {session.pass_count}")

        per_arm = uniform_pulls(session.n, self.epsilon, self.delta)
        best_id, best_mean = 0, -1.0
        arm_id = session.begin_pass()
        while arm_id is not None:
            estimate, _ = session.sample_mean(per_arm)
            # строгое сравнение: при равенстве остаётся меньший id
            if estimate > best_mean:
                best_id, best_mean = arm_id, estimate
            arm_id = session.advance()
        return best_id


def uniform_baseline(session: StreamSession, eps: float, delta: float) -> int:
    return UniformService(eps, delta).run(session)
