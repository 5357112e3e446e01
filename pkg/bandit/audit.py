"""
Проверки модели доступа и трасс алгоритмов по журналу сессии.
Каждая функция возвращает список нарушений; пустой список означает, что проверка пройдена.
"""
from itertools import groupby
from typing import Sequence

from bandit.stream import StreamSession

TOLERANCE = 1e-12


def access_model_violations(session: StreamSession) -> list[str]:
    """Внутри каждого прохода id вытягиваемых рук не убывают; сумма пачек равна total_pulls."""
    violations = []
    last_seen: dict[int, int] = {}
    for record in session.pull_log:
        previous = last_seen.get(record.pass_index, 0)
        if record.arm_id < previous:
            violations.append(f"проход {record.pass_index}: рука {record.arm_id} после руки {previous}")
        last_seen[record.pass_index] = record.arm_id
    logged = sum(record.batch_size for record in session.pull_log)
    if logged != session.total_pulls:
        violations.append(f"сумма пачек {logged} != total_pulls {session.total_pulls}")
    return violations


def single_pass_violations(session: StreamSession) -> list[str]:
    """Ровно один проход, вытягивания каждой руки идут одним непрерывным блоком."""
    violations = []
    if session.pass_count != 1:
        violations.append(f"проходов {session.pass_count}, ожидался 1")
    blocks = [arm_id for arm_id, _ in groupby(record.arm_id for record in session.pull_log)]
    if len(blocks) != len(set(blocks)):
        violations.append("вытягивания руки разорваны другими руками")
    return violations


def eps_bai_trace_violations(trace: Sequence, epsilon: float) -> list[str]:
    """Рост оценки кандидата не меньше ε/4 при каждой замене и s_ℓ > τ_j в момент замены."""
    violations = []
    for event in trace:
        if event.new_mean < event.previous_mean + epsilon / 4 - TOLERANCE:
            violations.append(f"замена рукой {event.arm_id}: рост оценки меньше ε/4")
        if event.budget <= event.threshold:
            violations.append(f"замена рукой {event.arm_id} при s_ℓ={event.budget} <= τ_j={event.threshold}")
    return violations


def eps_kai_trace_violations(trace: Sequence, epsilon: float, k: int, initial_min: float) -> list[str]:
    """
    Вытесняется минимум; вставленная оценка выше вытесненной на α >= ε/4;
    минимум множества после t+k вставок выше минимума после t вставок на ε/4.
    """
    violations = []
    minima = [initial_min]
    for event in trace:
        if any(event.evicted_mean > mean + TOLERANCE for mean in event.remaining_means):
            violations.append(f"вытеснена рука {event.evicted_id}, не являвшаяся минимумом")
        if event.alpha < epsilon / 4 - TOLERANCE:
            violations.append(f"α={event.alpha} меньше ε/4")
        if event.inserted_mean < event.evicted_mean + event.alpha - TOLERANCE:
            violations.append(f"рука {event.inserted_id} вставлена без запаса α")
        if event.budget <= event.threshold:
            violations.append(f"вставка руки {event.inserted_id} при s_ℓ <= τ_j")
        minima.append(event.min_mean_after)
    for t in range(1, len(minima) - k):
        if minima[t + k] < minima[t] + epsilon / 4 - TOLERANCE:
            violations.append(f"минимум после {t + k} вставок вырос меньше чем на ε/4 относительно {t}")
    return violations


def id_bai_round_violations(session: StreamSession, rounds: Sequence, returned_id: int) -> list[str]:
    """Невыжившие не вытягиваются, кандидат раунда переживает раунд, не больше 3 проходов на раунд."""
    violations = []
    for index, state in enumerate(rounds):
        passes = state.last_pass - state.first_pass + 1
        if passes > 3:
            violations.append(f"раунд {state.r}: {passes} проходов")
        for record in session.pull_log:
            if state.first_pass <= record.pass_index <= state.last_pass and record.arm_id not in state.survivors:
                violations.append(f"раунд {state.r}: вытянута выбывшая рука {record.arm_id}")
                break
        survivors_next = rounds[index + 1].survivors if index + 1 < len(rounds) else frozenset([returned_id])
        if state.candidate_r not in survivors_next:
            violations.append(f"раунд {state.r}: кандидат {state.candidate_r} выбыл в своём раунде")
    return violations
