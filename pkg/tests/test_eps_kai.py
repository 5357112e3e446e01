import pytest

from bandit.audit import eps_kai_trace_violations, single_pass_violations
from bandit.errors import InvalidInputError, InvalidParamsError, StaleSessionError
from bandit.instance import BanditInstance
from bandit.oracles import check_eps_topk
from bandit.schedules import ScheduleParams, budget_s
from bandit.stream import StreamSession
from services.eps_bai_service import EpsBaiService
from services.eps_kai_service import EpsKaiService, TopKState, run_eps_kai
from tests.helpers import deterministic_session


def test_all_arms_returned_when_n_equals_k(small_params):
    session = deterministic_session([0.3, 0.1, 0.2])
    assert run_eps_kai(session, 3, small_params) == [1, 2, 3]
    params = small_params.model_copy(update={"k": 3})
    assert session.total_pulls == 3 * budget_s(1, params)
    assert session.pass_count == 1


def test_k_one_matches_eps_bai(small_params):
    kai_session = deterministic_session([0.1, 0.9])
    bai_session = deterministic_session([0.1, 0.9])
    kai = EpsKaiService(small_params)
    bai = EpsBaiService(small_params)
    assert kai.run(kai_session) == [bai.run(bai_session)] == [2]
    assert kai_session.pull_log == bai_session.pull_log
    assert [event.round_index for event in kai.trace] == [event.round_index for event in bai.trace] == [2]


def test_minimum_is_evicted(small_params):
    session = deterministic_session([0.2, 0.1, 0.9])
    service = EpsKaiService(small_params.model_copy(update={"k": 2}))
    assert service.run(session) == [1, 3]
    [event] = service.trace
    assert event.evicted_id == 2
    assert event.inserted_id == 3
    assert event.round_index == 2
    assert event.budget == 3962
    assert event.threshold == 1981
    assert session.pulls_of(3) == 3962
    assert service.initial_min == pytest.approx(0.1)


def test_min_entry_tie_prefers_lower_id():
    state = TopKState(entries=[(4, 0.5), (2, 0.5), (7, 0.9)])
    state.recompute_min()
    assert state.min_id == 2
    assert state.min_mean == 0.5


def test_set_invariants_hold_on_random_runs():
    params = ScheduleParams(epsilon=0.25, delta=0.1, k=3)
    instance = BanditInstance.from_means([0.1, 0.2, 0.3, 0.35, 0.4, 0.5, 0.55, 0.6, 0.7, 0.8])
    for seed in range(5):
        session = StreamSession(instance, seed=seed)
        service = EpsKaiService(params)
        returned = service.run(session)
        assert len(returned) == 3
        assert len(service.state.entries) == 3
        assert single_pass_violations(session) == []
        assert eps_kai_trace_violations(service.trace, params.epsilon, 3, service.initial_min) == []


def test_pac_on_small_instance():
    params = ScheduleParams(epsilon=0.25, delta=0.1, k=2)
    instance = BanditInstance.from_means([0.35] * 8 + [0.6, 0.6])
    failures = 0
    for seed in range(20):
        session = StreamSession(instance, seed=seed)
        failures += not check_eps_topk(instance, EpsKaiService(params).run(session), 2, params.epsilon)
    assert failures <= 4


def test_too_few_arms(small_params):
    session = deterministic_session([0.5, 0.6])
    with pytest.raises(InvalidInputError):
        run_eps_kai(session, 3, small_params)


def test_k_must_be_positive(small_params):
    with pytest.raises(InvalidParamsError):
        run_eps_kai(deterministic_session([0.5]), 0, small_params)


def test_stale_session(small_params):
    session = deterministic_session([0.5, 0.6, 0.7])
    run_eps_kai(session, 2, small_params)
    with pytest.raises(StaleSessionError):
        run_eps_kai(session, 2, small_params)
