import pytest

from bandit.schedules import ScheduleParams


@pytest.fixture
def small_params() -> ScheduleParams:
    """ε=0.4, δ=0.01, C=100: s_1 = τ_1 = 1843, s_2 = 3685."""
    return ScheduleParams(epsilon=0.4, delta=0.01, C=100)


@pytest.fixture
def db_path(tmp_path) -> str:
    return str(tmp_path / "database" / "runs.db")
