import asyncio
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import numpy as np

from bandit.audit import (
    access_model_violations,
    eps_bai_trace_violations,
    eps_kai_trace_violations,
    id_bai_round_violations,
    single_pass_violations,
)
from bandit.errors import ConfigError, InvalidInstanceError
from bandit.generator import generate_instance
from bandit.instance import BanditInstance
from bandit.oracles import instance_bound, verdict, worst_case_bound
from bandit.schedules import ScheduleParams
from bandit.stream import StreamSession
from runners.models import ALGORITHMS, AggregateReport, TrialConfig, TrialReport
from services.eps_bai_service import EpsBaiService
from services.eps_kai_service import EpsKaiService
from services.id_bai_service import IdBaiService
from services.uniform_service import UniformService

logger = logging.getLogger(__name__)

Z_95 = 1.96


def trial_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Независимые генераторы для экземпляра и для сессии, оба из сида испытания."""
    instance_seq, session_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(instance_seq), np.random.default_rng(session_seq)


def build_instance(config: TrialConfig, seed: int) -> BanditInstance:
    instance_rng, _ = trial_rngs(seed)
    spec = config.instance
    if config.algo == "id-bai" and not spec.require_unique_best:
        spec = spec.model_copy(update={"require_unique_best": True})
    return generate_instance(spec, instance_rng)


def schedule_params(config: TrialConfig) -> ScheduleParams:
    k = config.k if config.algo == "eps-kai" else 1
    return ScheduleParams(
        epsilon=config.epsilon,
        delta=config.delta,
        k=k,
        C=config.C,
        alpha_rule=config.alpha_rule,
        allow_small_c=config.C < 100,
    )


def run_single_trial(config: TrialConfig, index: int) -> TrialReport:
    """
    Одно испытание с сидом base_seed + index: свежая сессия, алгоритм, вердикт оракула,
    проверки журнала. Функция верхнего уровня, чтобы её можно было отдать в пул процессов.
    """
    seed = config.base_seed + index
    _, session_rng = trial_rngs(seed)
    instance = build_instance(config, seed)
    session = StreamSession(instance, rng=session_rng, audit_enabled=config.audit)

    violations: list[str] = []
    rounds = None
    if config.algo == "eps-bai":
        service = EpsBaiService(schedule_params(config))
        returned = [service.run(session)]
        result = verdict(instance, returned, "eps-best", eps=config.epsilon)
        if config.audit:
            violations += single_pass_violations(session)
            violations += eps_bai_trace_violations(service.trace, config.epsilon)
    elif config.algo == "eps-kai":
        service = EpsKaiService(schedule_params(config))
        returned = service.run(session)
        result = verdict(instance, returned, "eps-top-k", eps=config.epsilon, k=config.k)
        if config.audit:
            violations += single_pass_violations(session)
            violations += eps_kai_trace_violations(service.trace, config.epsilon, config.k, service.initial_min)
    elif config.algo == "id-bai":
        service = IdBaiService(config.delta, C=config.C, alpha_rule=config.alpha_rule, batch_variant=config.batch_variant)
        returned = [service.run(session)]
        rounds = len(service.rounds)
        result = verdict(instance, returned, "exact-best")
        if config.audit:
            violations += id_bai_round_violations(session, service.rounds, returned[0])
    elif config.algo == "uniform":
        returned = [UniformService(config.epsilon, config.delta).run(session)]
        result = verdict(instance, returned, "eps-best", eps=config.epsilon)
        if config.audit:
            violations += single_pass_violations(session)
    else:
        raise ConfigError(f"Неизвестный алгоритм: {config.algo}")

    if config.audit:
        violations = access_model_violations(session) + violations

    return TrialReport(
        algo=config.algo,
        params={
            "epsilon": config.epsilon,
            "delta": config.delta,
            "k": config.k,
            "C": config.C,
            "alpha_rule": config.alpha_rule,
            "batch_variant": config.batch_variant,
        },
        seed=seed,
        returned_ids=list(result.returned_ids),
        total_pulls=session.total_pulls,
        pass_count=session.pass_count,
        correct=result.correct,
        invariants_ok=(not violations) if config.audit else None,
        violations=violations,
        rounds=rounds,
        audit=session.audit_summary() if config.verbose else None,
    )


def normalizing_bound(config: TrialConfig) -> Optional[float]:
    """Нормировка mean_pulls: оценка по экземпляру для id-bai, худший случай для остальных."""
    instance = build_instance(config, config.base_seed)
    if config.algo == "id-bai":
        try:
            return instance_bound(instance, config.delta)
        except InvalidInstanceError as e:
            logger.warning(f"Оценка по экземпляру не определена: {e}")
            return None
    k = config.k if config.algo == "eps-kai" else 1
    return worst_case_bound(instance.n, config.epsilon, config.delta, k)


def aggregate_reports(config: TrialConfig, reports: list[TrialReport]) -> AggregateReport:
    """Свёртка в порядке индексов испытаний."""
    trials = len(reports)
    failures = sum(1 for report in reports if not report.correct)
    failure_rate = failures / trials
    pulls = np.array([report.total_pulls for report in reports], dtype=float)
    passes = np.array([report.pass_count for report in reports], dtype=float)
    pulls_ci95 = Z_95 * float(pulls.std(ddof=1)) / math.sqrt(trials) if trials > 1 else 0.0
    mean_pulls = float(pulls.mean())

    bound = normalizing_bound(config)
    return AggregateReport(
        algo=config.algo,
        params=config.params_echo(),
        trials=trials,
        failure_rate=failure_rate,
        failure_ci95=Z_95 * math.sqrt(failure_rate * (1.0 - failure_rate) / trials),
        mean_pulls=mean_pulls,
        pulls_ci95=pulls_ci95,
        mean_passes=float(passes.mean()),
        bound_ratio=mean_pulls / bound if bound else None,
        invariant_failures=sum(1 for report in reports if report.invariants_ok is False),
        per_trial=reports if config.per_trial else None,
    )


async def run_trials(config: TrialConfig) -> tuple[AggregateReport, list[TrialReport]]:
    """
    Серия испытаний. При parallelism > 1 испытания идут в пуле процессов;
    результат не зависит от параллелизма, так как каждое испытание сидируется по индексу.
    """
    if config.algo not in ALGORITHMS:
        raise ConfigError(f"Неизвестный алгоритм: {config.algo}. Доступны: {', '.join(ALGORITHMS)}")

    if config.alpha_rule != "randomized":
        logger.warning(f"Экспериментальное правило α: {config.alpha_rule}")

    logger.info(f"Запуск {config.trials} испытаний {config.algo} (parallelism={config.parallelism})")
    try:
        if config.parallelism <= 1:
            reports = [run_single_trial(config, index) for index in range(config.trials)]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=config.parallelism) as executor:
                futures = [
                    loop.run_in_executor(executor, run_single_trial, config, index)
                    for index in range(config.trials)
                ]
                reports = list(await asyncio.gather(*futures))
    except Exception as e:
        logger.error(f"Серия {config.algo} прервана (base_seed={config.base_seed}): {e}")
        raise

    aggregate = aggregate_reports(config, reports)
    logger.info(
        f"{config.algo}: failure_rate={aggregate.failure_rate:.4f}, "
        f"mean_pulls={aggregate.mean_pulls:.1f}, mean_passes={aggregate.mean_passes:.2f}"
    )
    if aggregate.invariant_failures:
        logger.error(f"{config.algo}: нарушения инвариантов в {aggregate.invariant_failures} испытаниях")
    return aggregate, reports
