import datetime
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from bandit.generator import InstanceSpec
from bandit.instance import BanditInstance
from bandit.schedules import ScheduleParams, alpha_quarter_probability, budget_s, draw_alpha, threshold_tau
from bandit.stream import StreamSession
from config import ID_BAI_BOUND_RATIO_K
from runners.models import TrialConfig
from runners.sweep_runner import run_sweep
from runners.trial_runner import run_trials
from services.eps_bai_service import EpsBaiService, restricted_eps_bai
from services.eps_kai_service import EpsKaiService
from services.id_bai_service import IdBaiService
from utils.database import fetch_latest_metric, initialize_database, save_acceptance_result

logger = logging.getLogger(__name__)

# допустимый рост отношения pulls / instance_bound относительно базовой линии
REGRESSION_TOLERANCE = 1.25
LINEAR_GROWTH_LIMIT = 2.0


@dataclass
class CriterionResult:
    criterion: str
    passed: bool
    metric: Optional[float]
    detail: str


def eps_bai_config(parallelism: int = 1, trials: int = 200, n: int = 50, alpha_rule: str = "randomized") -> TrialConfig:
    return TrialConfig(
        algo="eps-bai",
        instance=InstanceSpec(n=n, profile="one-gap", mu_top=0.6, gap=0.25, order="ascending"),
        epsilon=0.25, delta=0.1, C=100, alpha_rule=alpha_rule,
        trials=trials, base_seed=0, parallelism=parallelism,
    )


def eps_kai_config(parallelism: int = 1, trials: int = 200) -> TrialConfig:
    return TrialConfig(
        algo="eps-kai",
        instance=InstanceSpec(profile="explicit", means=(0.6,) * 5 + (0.35,) * 45, order="ascending"),
        epsilon=0.25, delta=0.1, k=5, C=100, alpha_rule="randomized",
        trials=trials, base_seed=0, parallelism=parallelism,
    )


def id_bai_config(parallelism: int = 1, trials: int = 100, second_mean: float = 0.5) -> TrialConfig:
    return TrialConfig(
        algo="id-bai",
        instance=InstanceSpec(profile="explicit", means=(0.7, second_mean) + (0.3,) * 18, order="random"),
        delta=0.1, C=100, alpha_rule="randomized", batch_variant="pseudocode",
        trials=trials, base_seed=0, parallelism=parallelism,
    )


def id_bai_pass_bound(gap: float) -> float:
    """3 прохода на раунд × (первый раунд с ε_r <= Δ_2/3, плюс запас в два раунда)."""
    return 3 * (math.ceil(math.log2(3 / (4 * gap))) + 2)


def pac_result(criterion: str, report) -> CriterionResult:
    delta = report.params["delta"]
    limit = delta + report.failure_ci95
    return CriterionResult(
        criterion, report.failure_rate <= limit, report.failure_rate,
        f"failure_rate={report.failure_rate:.4f}, порог {limit:.4f}",
    )


async def check_eps_bai(parallelism: int) -> list[CriterionResult]:
    aggregate, reports = await run_trials(eps_bai_config(parallelism))
    single_pass = all(report.pass_count == 1 for report in reports)
    broken = sum(1 for report in reports if not report.invariants_ok)
    return [
        pac_result("1", aggregate),
        CriterionResult("2", single_pass and broken == 0, float(broken),
                        f"один проход во всех испытаниях: {single_pass}, нарушений модели доступа: {broken}"),
    ]


def per_arm_growth(points) -> float:
    """Отношение mean_pulls/n в последней точке sweep к первой."""
    first, last = points[0], points[-1]
    return (last.report.mean_pulls / last.value) / (first.report.mean_pulls / first.value)


async def check_linear_complexity(parallelism: int) -> CriterionResult:
    points = await run_sweep(eps_bai_config(parallelism, trials=50), "n", ["50", "200", "800"])
    per_arm = {point.value: point.report.mean_pulls / point.value for point in points}
    ratio = per_arm_growth(points)

    # контраст: равномерная схема тратит ln(2n/δ) на руку, рост должен быть виден
    uniform_config = eps_bai_config(parallelism, trials=50).model_copy(update={"algo": "uniform"})
    uniform_ratio = per_arm_growth(await run_sweep(uniform_config, "n", ["50", "800"]))

    # диагностика: фиксированный α = ε/2
    diagnostic = await run_sweep(eps_bai_config(parallelism, trials=50, alpha_rule="fixed-half"), "n", ["50", "800"])
    fixed_ratio = per_arm_growth(diagnostic)
    logger.info(f"Диагностика fixed-half: отношение pulls/n (800 к 50) = {fixed_ratio:.3f}")

    return CriterionResult(
        "3", ratio <= LINEAR_GROWTH_LIMIT and ratio < uniform_ratio, ratio,
        f"pulls/n: {', '.join(f'n={n}: {v:.1f}' for n, v in per_arm.items())}; "
        f"отношение {ratio:.3f} (uniform: {uniform_ratio:.3f}, fixed-half: {fixed_ratio:.3f})",
    )


async def check_eps_kai(parallelism: int) -> list[CriterionResult]:
    aggregate, reports = await run_trials(eps_kai_config(parallelism))
    shape_ok = all(len(report.returned_ids) == 5 and report.pass_count == 1 for report in reports)
    pac = pac_result("4", aggregate)
    pac.passed = pac.passed and shape_ok
    pac.detail += f"; |returned| == 5 и один проход: {shape_ok}"
    broken = sum(1 for report in reports if not report.invariants_ok)
    return [
        pac,
        CriterionResult("5", broken == 0, float(broken), f"испытаний с нарушением инвариантов множества: {broken}"),
    ]


async def check_id_bai(parallelism: int, db_path: Optional[str]) -> list[CriterionResult]:
    config = id_bai_config(parallelism)
    aggregate, _ = await run_trials(config)
    narrow, _ = await run_trials(id_bai_config(parallelism, second_mean=0.65))

    wide_bound = id_bai_pass_bound(0.2)
    narrow_bound = id_bai_pass_bound(0.05)
    passes_ok = aggregate.mean_passes <= wide_bound and narrow.mean_passes <= narrow_bound

    baseline = fetch_latest_metric("8", db_path) if db_path else None
    baseline = baseline if baseline is not None else ID_BAI_BOUND_RATIO_K
    ratio = aggregate.bound_ratio
    return [
        pac_result("6", aggregate),
        CriterionResult(
            "7", passes_ok, aggregate.mean_passes,
            f"Δ_2=0.2: {aggregate.mean_passes:.2f} <= {wide_bound:g}; Δ_2=0.05: {narrow.mean_passes:.2f} <= {narrow_bound:g}",
        ),
        CriterionResult(
            "8", ratio is not None and ratio <= REGRESSION_TOLERANCE * baseline, ratio,
            f"mean_pulls/instance_bound={ratio:.1f}, база {baseline:.1f}",
        ),
    ]


def step_through_mismatches() -> list[str]:
    """Пошаговые сценарии на детерминированных наградах."""
    mismatches = []
    params = ScheduleParams(epsilon=0.4, delta=0.01, C=100)

    session = StreamSession(BanditInstance.from_means([0.9, 0.1], "deterministic"), seed=0)
    returned = EpsBaiService(params).run(session)
    if returned != 1 or session.total_pulls != 2 * budget_s(1, params):
        mismatches.append(f"ε-BAI (0.9, 0.1): рука {returned}, вытягиваний {session.total_pulls}")

    session = StreamSession(BanditInstance.from_means([0.1, 0.9], "deterministic"), seed=0)
    service = EpsBaiService(params)
    returned = service.run(session)
    if returned != 2 or session.pulls_of(2) != 3685 or [e.round_index for e in service.trace] != [2]:
        mismatches.append(f"ε-BAI (0.1, 0.9): рука {returned}, вытягиваний руки 2 {session.pulls_of(2)}")

    session = StreamSession(BanditInstance.from_means([0.2, 0.1, 0.9], "deterministic"), seed=0)
    kai = EpsKaiService(params.model_copy(update={"k": 2}))
    returned_k = kai.run(session)
    if returned_k != [1, 3] or [e.evicted_id for e in kai.trace] != [2]:
        mismatches.append(f"ε-KAI (0.2, 0.1, 0.9): {returned_k}")

    session = StreamSession(BanditInstance.from_means([0.5, 0.1, 0.5, 0.5, 0.9], "deterministic"), seed=0)
    returned = restricted_eps_bai(session, {2, 5}, 0.4, 0.01, 100)
    if returned != 5 or any(session.pulls_of(arm) for arm in (1, 3, 4)):
        mismatches.append(f"ε-BAI по {{2, 5}}: рука {returned}")

    session = StreamSession(BanditInstance.from_means([0.7, 0.2], "deterministic"), seed=0)
    id_bai = IdBaiService(0.1, C=100, alpha_rule="randomized", batch_variant="pseudocode")
    returned = id_bai.run(session)
    if returned != 1 or session.pass_count > 3 or len(id_bai.rounds) != 1:
        mismatches.append(f"ID-BAI (0.7, 0.2): рука {returned}, проходов {session.pass_count}")

    session = StreamSession(BanditInstance.from_means([0.7, 0.69, 0.2], "deterministic"), seed=0)
    id_bai = IdBaiService(0.1, C=100, alpha_rule="randomized", batch_variant="pseudocode")
    returned = id_bai.run(session)
    if returned != 1 or len(id_bai.rounds) > 8 or 3 in id_bai.rounds[1].survivors:
        mismatches.append(f"ID-BAI (0.7, 0.69, 0.2): рука {returned}, раундов {len(id_bai.rounds)}")
    return mismatches


def schedule_mismatches() -> list[str]:
    mismatches = []
    params = ScheduleParams(epsilon=0.4, delta=0.01, C=100)
    expected = {
        "budget_s(0)": (budget_s(0, params), 0),
        "budget_s(1)": (budget_s(1, params), 1843),
        "budget_s(2)": (budget_s(2, params), 3685),
        "threshold_tau(1)": (threshold_tau(1, params), 1843),
        "threshold_tau(10)": (threshold_tau(10, params), 2764),
    }
    for name, (actual, target) in expected.items():
        if actual != target:
            mismatches.append(f"{name} = {actual}, ожидалось {target}")

    rng = np.random.default_rng(0)
    draws = [draw_alpha(10, 0.4, rng) for _ in range(100_000)]
    frequency = sum(1 for alpha in draws if alpha == 0.1) / len(draws)
    if abs(frequency - 1 / (math.log(10) + 1)) > 0.01:
        mismatches.append(f"частота α=ε/4 при j=10: {frequency:.4f}")
    if alpha_quarter_probability(10 ** 6) >= 0.07:
        mismatches.append("Pr(α=ε/4) при j=10^6 не меньше 0.07")
    return mismatches


async def check_replay(parallelism: int) -> CriterionResult:
    first, _ = await run_trials(eps_bai_config(1))
    second, _ = await run_trials(eps_bai_config(1))
    parallel, _ = await run_trials(eps_bai_config(max(parallelism, 8)))
    same_seed = first.model_dump_json() == second.model_dump_json()
    same_parallel = first.model_dump_json() == parallel.model_dump_json()
    return CriterionResult(
        "11", same_seed and same_parallel, None,
        f"повтор с тем же сидом: {same_seed}; parallelism 1 vs 8: {same_parallel}",
    )


async def run_acceptance_suite(parallelism: int = 1, db_path: Optional[str] = None) -> list[CriterionResult]:
    """
    Полный приёмочный прогон. При заданном db_path вердикты сохраняются в базу,
    а критерий 8 сравнивается с последней сохранённой метрикой.
    """
    if db_path:
        initialize_database(db_path)

    results: list[CriterionResult] = []
    results += await check_eps_bai(parallelism)
    results.append(await check_linear_complexity(parallelism))
    results += await check_eps_kai(parallelism)
    results += await check_id_bai(parallelism, db_path)

    mismatches = step_through_mismatches()
    results.append(CriterionResult("9", not mismatches, float(len(mismatches)), "; ".join(mismatches) or "все сценарии совпали"))
    mismatches = schedule_mismatches()
    results.append(CriterionResult("10", not mismatches, float(len(mismatches)), "; ".join(mismatches) or "все значения совпали"))
    results.append(await check_replay(parallelism))

    date = datetime.datetime.now().strftime("%Y-%m-%d")
    for result in results:
        if result.passed:
            logger.info(f"Критерий {result.criterion}: пройден ({result.detail})")
        else:
            logger.error(f"Критерий {result.criterion}: НЕ пройден ({result.detail})")
        if db_path:
            save_acceptance_result(date, result.criterion, result.passed, result.metric, result.detail, db_path)
    return results
