import asyncio

import numpy as np
import pytest

from bandit.errors import ConfigError, InvalidSpecError
from bandit.generator import InstanceSpec, generate_instance
from bandit.oracles import instance_bound, worst_case_bound
from runners.models import TrialConfig
from runners.sweep_runner import parse_vary, run_sweep, with_value
from runners.trial_runner import build_instance, run_single_trial, run_trials

LINEAR_DETERMINISTIC = InstanceSpec(n=5, profile="linear", order="ascending", distribution="deterministic")


def config(**overrides) -> TrialConfig:
    fields = {
        "algo": "eps-bai",
        "instance": LINEAR_DETERMINISTIC,
        "trials": 3,
        "C": 100,
        "alpha_rule": "randomized",
        "batch_variant": "pseudocode",
        "parallelism": 1,
    }
    fields.update(overrides)
    return TrialConfig(**fields)


def test_one_gap_ascending():
    instance = generate_instance(InstanceSpec(n=3, profile="one-gap", mu_top=0.7, gap=0.2, order="ascending"))
    assert instance.means == pytest.approx([0.5, 0.5, 0.7])
    assert instance.has_unique_best()


def test_explicit_descending():
    instance = generate_instance(InstanceSpec(profile="explicit", means=(0.1, 0.9), order="descending"))
    assert instance.means.tolist() == [0.9, 0.1]


def test_linear_ascending():
    instance = generate_instance(InstanceSpec(n=5, profile="linear", mu_lo=0.1, mu_hi=0.9, order="ascending"))
    assert instance.means == pytest.approx([0.1, 0.3, 0.5, 0.7, 0.9])


def test_random_order_is_seeded():
    spec = InstanceSpec(n=6, profile="linear", order="random")
    first = generate_instance(spec, np.random.default_rng(3)).means
    second = generate_instance(spec, np.random.default_rng(3)).means
    assert first.tolist() == second.tolist()
    fixed = spec.model_copy(update={"order_seed": 8})
    assert generate_instance(fixed, np.random.default_rng(1)).means.tolist() == \
        generate_instance(fixed, np.random.default_rng(2)).means.tolist()


def test_beta_distribution_means():
    instance = generate_instance(InstanceSpec(profile="explicit", means=(0.2, 0.6), distribution="beta", concentration=4.0))
    assert instance.means == pytest.approx([0.2, 0.6])
    assert instance.best_arm_ids(1) == [2]


@pytest.mark.parametrize("spec", [
    InstanceSpec(profile="explicit", means=(0.5, 1.2)),
    InstanceSpec(n=3, profile="one-gap", mu_top=0.1, gap=0.3),
    InstanceSpec(profile="explicit", means=(0.5, 0.5), require_unique_best=True),
    InstanceSpec(profile="linear"),
])
def test_invalid_specs(spec):
    with pytest.raises(InvalidSpecError):
        generate_instance(spec, np.random.default_rng(0))


def test_deterministic_instance_never_fails():
    aggregate, reports = asyncio.run(run_trials(config(trials=4)))
    assert aggregate.failure_rate == 0.0
    assert aggregate.failure_ci95 == 0.0
    assert all(report.invariants_ok for report in reports)
    assert [report.seed for report in reports] == [0, 1, 2, 3]


def test_beta_rewards_through_trials():
    beta = InstanceSpec(profile="explicit", means=(0.2, 0.8), distribution="beta", concentration=4.0)
    aggregate, reports = asyncio.run(run_trials(config(trials=3, instance=beta)))
    assert aggregate.failure_rate == 0.0
    assert all(report.returned_ids == [2] for report in reports)
    assert all(report.invariants_ok for report in reports)


def test_single_trial_mirrors_report():
    aggregate, [report] = asyncio.run(run_trials(config(trials=1, instance=InstanceSpec(n=8, profile="linear"))))
    assert aggregate.trials == 1
    assert aggregate.mean_pulls == report.total_pulls
    assert aggregate.mean_passes == report.pass_count
    assert aggregate.failure_rate == (0.0 if report.correct else 1.0)
    assert aggregate.pulls_ci95 == 0.0


def test_replay_gives_identical_json():
    spec = InstanceSpec(n=10, profile="one-gap", order="random")
    first, _ = asyncio.run(run_trials(config(trials=5, instance=spec)))
    second, _ = asyncio.run(run_trials(config(trials=5, instance=spec)))
    assert first.model_dump_json() == second.model_dump_json()


def test_parallel_matches_serial():
    spec = InstanceSpec(n=10, profile="one-gap", order="random")
    serial, _ = asyncio.run(run_trials(config(trials=6, instance=spec)))
    parallel, _ = asyncio.run(run_trials(config(trials=6, instance=spec, parallelism=3)))
    assert serial.model_dump_json() == parallel.model_dump_json()


def test_trial_replayable_in_isolation():
    spec = InstanceSpec(n=10, profile="one-gap", order="random")
    _, reports = asyncio.run(run_trials(config(trials=4, instance=spec)))
    assert run_single_trial(config(trials=4, instance=spec), 2) == reports[2]


def test_unknown_algorithm():
    with pytest.raises(ConfigError):
        asyncio.run(run_trials(config(algo="thompson")))


@pytest.mark.parametrize("algo", ["eps-bai", "eps-kai", "id-bai", "uniform"])
def test_every_algorithm_runs(algo):
    spec = InstanceSpec(profile="explicit", means=(0.2, 0.9, 0.5, 0.1), distribution="deterministic")
    aggregate, reports = asyncio.run(run_trials(config(algo=algo, k=2, instance=spec, trials=2)))
    assert aggregate.failure_rate == 0.0
    assert aggregate.invariant_failures == 0
    assert aggregate.bound_ratio > 0
    if algo == "eps-kai":
        assert reports[0].returned_ids == [2, 3]
    else:
        assert reports[0].returned_ids == [2]
    if algo == "id-bai":
        assert reports[0].rounds == 1
    else:
        assert reports[0].pass_count == 1


def test_bound_normalization():
    spec = InstanceSpec(profile="explicit", means=(0.2, 0.9, 0.5, 0.1), distribution="deterministic")
    id_bai = config(algo="id-bai", instance=spec, trials=1)
    aggregate, _ = asyncio.run(run_trials(id_bai))
    assert aggregate.bound_ratio == pytest.approx(aggregate.mean_pulls / instance_bound(build_instance(id_bai, 0), 0.1))
    eps_bai = config(instance=spec, trials=1)
    aggregate, _ = asyncio.run(run_trials(eps_bai))
    assert aggregate.bound_ratio == pytest.approx(aggregate.mean_pulls / worst_case_bound(4, 0.25, 0.1))


def test_id_bai_requires_unique_best():
    spec = InstanceSpec(profile="explicit", means=(0.9, 0.9, 0.1), distribution="deterministic")
    with pytest.raises(InvalidSpecError):
        asyncio.run(run_trials(config(algo="id-bai", instance=spec, trials=1)))


def test_report_extras_behind_flags():
    aggregate, reports = asyncio.run(run_trials(config(trials=2, per_trial=True, verbose=True)))
    assert aggregate.per_trial == reports
    assert sum(reports[0].audit.values()) == reports[0].total_pulls
    plain, plain_reports = asyncio.run(run_trials(config(trials=2)))
    assert plain.per_trial is None
    assert plain_reports[0].audit is None
    assert "parallelism" not in plain.params


def test_audit_can_be_disabled():
    _, reports = asyncio.run(run_trials(config(trials=1, audit=False)))
    assert reports[0].invariants_ok is None
    assert reports[0].total_pulls > 0


def test_parse_vary():
    assert parse_vary("n=50,200, 800") == ("n", ["50", "200", "800"])
    for expression in ["n", "bogus=1,2", "n="]:
        with pytest.raises(ConfigError):
            parse_vary(expression)


def test_with_value_targets_instance_fields():
    base = config(instance=InstanceSpec(n=5, profile="one-gap"))
    assert with_value(base, "n", "40").instance.n == 40
    assert with_value(base, "eps", "0.1").epsilon == 0.1
    assert with_value(base, "gap", "0.3").instance.gap == 0.3
    assert base.instance.n == 5


def test_sweep_one_point_per_value():
    base = config(trials=2)
    points = asyncio.run(run_sweep(base, "n", ["4", "6"]))
    assert [point.value for point in points] == [4, 6]
    assert points[1].report.params["instance"]["n"] == 6
