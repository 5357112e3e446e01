import logging
from typing import NamedTuple, Optional

import numpy as np

from bandit.errors import InvalidParamsError, NoCurrentArmError
from bandit.instance import BanditInstance
from config import AUDIT_LOG_ENABLED

logger = logging.getLogger(__name__)

# предел размера пачки: numpy.binomial и счётчики рук в int64
MAX_PULL_COUNT = int(np.iinfo(np.int64).max)


class PullRecord(NamedTuple):
    pass_index: int
    arm_id: int
    batch_size: int


class StreamSession:
    """
    Окно доступа к потоку рук.

    Вытягивать можно только руку под курсором; курсор движется только вперёд,
    возврат к началу возможен лишь через новый проход (begin_pass), который
    увеличивает счётчик проходов. Все вытягивания попадают в журнал pull_log.
    Сессия однопоточная: её можно передавать между потоками, но не разделять.
    """

    def __init__(
        self,
        instance: BanditInstance,
        seed: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
        audit_enabled: bool = AUDIT_LOG_ENABLED,
    ):
        """
        :param instance: Экземпляр бандита.
        :param seed: Сид генератора (игнорируется, если передан rng).
        :param rng: Готовый генератор numpy.
        :param audit_enabled: Вести ли журнал вытягиваний.
        """
        self.instance = instance
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.audit_enabled = audit_enabled
        self.cursor: Optional[int] = None  # None: конец потока или проход не начат
        self.pass_count = 0
        self.pull_log: list[PullRecord] = []
        self.total_pulls = 0
        self._per_arm = np.zeros(instance.n + 1, dtype=np.int64)
        self._acc_sum = 0.0
        self._acc_count = 0

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def at_end(self) -> bool:
        return self.cursor is None

    def sample_mean(self, count: int) -> tuple[float, int]:
        """
        Вытягивает руку под курсором count раз.
        :param count: Размер пачки (>= 1).
        :return: (эмпирическое среднее пачки, count).
        """
        if self.cursor is None:
            raise NoCurrentArmError("Нет текущей руки: курсор в конце потока или проход не начат.")
        count = int(count)
        if count < 1:
            raise InvalidParamsError(f"Размер пачки должен быть >= 1, получено: {count}")
        if count > MAX_PULL_COUNT:
            raise InvalidParamsError(f"Размер пачки {count} превышает предел {MAX_PULL_COUNT}")

        arm = self.instance.arms[self.cursor - 1]
        batch_sum = arm.dist.draw_sum(self.rng, count)

        self._acc_sum += batch_sum
        self._acc_count += count
        self.total_pulls += count
        self._per_arm[self.cursor] += count
        if self.audit_enabled:
            self.pull_log.append(PullRecord(self.pass_count, self.cursor, count))
        return batch_sum / count, count

    def running_mean(self) -> float:
        """Среднее по всем вытягиваниям текущей руки с момента прихода курсора."""
        if self._acc_count == 0:
            raise NoCurrentArmError("Текущая рука ещё не вытягивалась.")
        return self._acc_sum / self._acc_count

    @property
    def running_count(self) -> int:
        return self._acc_count

    def advance(self) -> Optional[int]:
        """
        Сдвигает курсор на следующую руку.
        :return: id новой руки или None в конце потока.
        """
        self._clear_accumulator()
        if self.cursor is None:
            return None
        self.cursor = self.cursor + 1 if self.cursor < self.n else None
        return self.cursor

    def begin_pass(self) -> Optional[int]:
        """Начинает новый проход: курсор на первой руке."""
        self.pass_count += 1
        self._clear_accumulator()
        self.cursor = 1 if self.n > 0 else None
        logger.debug(f"Начат проход {self.pass_count}")
        return self.cursor

    def seek(self, target_id: int) -> int:
        """
        Переводит курсор на target_id. Если рука позади курсора, сначала
        начинается новый проход. Вытягиваний не делает.
        """
        if not 1 <= target_id <= self.n:
            raise InvalidParamsError(f"Недопустимый id руки: {target_id}")
        if self.cursor == target_id:
            return target_id
        if self.cursor is None or self.cursor > target_id:
            self.begin_pass()
        self._clear_accumulator()
        self.cursor = target_id
        return target_id

    def audit_summary(self) -> dict[int, int]:
        """Суммарные вытягивания по рукам (только руки с ненулевым числом)."""
        return {arm_id: int(c) for arm_id, c in enumerate(self._per_arm) if arm_id and c}

    def pulls_of(self, arm_id: int) -> int:
        return int(self._per_arm[arm_id])

    def _clear_accumulator(self):
        self._acc_sum = 0.0
        self._acc_count = 0
