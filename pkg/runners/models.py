from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from bandit.generator import InstanceSpec
from bandit.schedules import AlphaRule, BatchVariant
from config import ALPHA_RULE, DEFAULT_BASE_SEED, DEFAULT_PARALLELISM, ID_BAI_BATCH_VARIANT, SCHEDULE_C

ALGORITHMS = ("eps-bai", "eps-kai", "id-bai", "uniform")


class TrialConfig(BaseModel):
    """Конфигурация серии испытаний Монте-Карло."""

    model_config = ConfigDict(frozen=True)

    algo: str
    instance: InstanceSpec
    epsilon: float = Field(default=0.25, gt=0.0, lt=1.0)
    delta: float = Field(default=0.1, gt=0.0, lt=1.0)
    k: int = Field(default=1, ge=1)
    C: float = Field(default=SCHEDULE_C, ge=1.0)
    alpha_rule: AlphaRule = ALPHA_RULE
    batch_variant: BatchVariant = ID_BAI_BATCH_VARIANT
    trials: int = Field(default=100, ge=1)
    base_seed: int = DEFAULT_BASE_SEED
    parallelism: int = Field(default=DEFAULT_PARALLELISM, ge=1)
    audit: bool = True
    per_trial: bool = False
    verbose: bool = False

    def params_echo(self) -> dict[str, Any]:
        """Параметры для отчёта; параллелизм в отчёт не попадает."""
        return self.model_dump(mode="json", exclude={"parallelism", "per_trial", "verbose"})


class TrialReport(BaseModel):
    algo: str
    params: dict[str, Any]
    seed: int
    returned_ids: list[int]
    total_pulls: int
    pass_count: int
    correct: bool
    invariants_ok: Optional[bool] = None
    violations: list[str] = Field(default_factory=list)
    rounds: Optional[int] = None
    audit: Optional[dict[int, int]] = None


class AggregateReport(BaseModel):
    algo: str
    params: dict[str, Any]
    trials: int
    failure_rate: float
    failure_ci95: float
    mean_pulls: float
    pulls_ci95: float
    mean_passes: float
    bound_ratio: Optional[float] = None
    invariant_failures: int = 0
    per_trial: Optional[list[TrialReport]] = None


class SweepPoint(BaseModel):
    key: str
    value: Any
    report: AggregateReport
