import math
from dataclasses import asdict, dataclass, field
from typing import Optional

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one trial, stored one per line in the record store.

    ``geometry`` and ``indices`` are plain mappings so a stored record
    is checked as written, including corrupted values. ``wall_time`` is
    the one field that changes between reruns of a seed; it is left out
    of equality and of the aggregate tables.
    """

    run_id: str
    seed: int
    algorithm_id: str
    success: bool = False
    converged: bool = False
    updates_to_convergence: Optional[int] = None
    n_updates: int = 0
    cadence: str = "per_episode"
    optimal_return: Optional[float] = None
    final_return: Optional[float] = None
    geometry: dict = field(default_factory=dict)
    indices: dict = field(default_factory=dict)
    reported_esl: Optional[float] = None
    state_visits: list = field(default_factory=list)
    failed: bool = False
    error: str = ""
    wall_time: float = field(default=0.0, compare=False)
    schema_version: int = SCHEMA_VERSION

    @property
    def esl(self) -> Optional[float]:
        return self.indices.get("esl")

    @property
    def omr(self) -> Optional[float]:
        return self.indices.get("omr")

    @property
    def eta_sub(self) -> Optional[float]:
        return self.indices.get("eta_sub")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        return cls(**data)


def _clean(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


@dataclass(frozen=True)
class AggregateRow:
    algorithm_id: str
    esl_mean: Optional[float]
    esl_std: Optional[float]
    omr_mean: Optional[float]
    omr_std: Optional[float]
    uc_mean: Optional[float]
    uc_std: Optional[float]
    sr: float
    n_trials: int = 0
    n_esl_defined: int = 0
    n_omr_defined: int = 0
    n_converged: int = 0
    n_failed: int = 0

    CSV_COLUMNS = ("algo", "esl_mean", "esl_std", "omr_mean", "omr_std", "uc_mean", "uc_std", "sr")

    def csv_row(self) -> dict:
        return {
            "algo": self.algorithm_id,
            "esl_mean": _clean(self.esl_mean),
            "esl_std": _clean(self.esl_std),
            "omr_mean": _clean(self.omr_mean),
            "omr_std": _clean(self.omr_std),
            "uc_mean": _clean(self.uc_mean),
            "uc_std": _clean(self.uc_std),
            "sr": self.sr,
        }

    def as_dict(self) -> dict:
        return {key: _clean(value) for key, value in asdict(self).items()}

    @property
    def n_excluded(self) -> int:
        return self.n_trials - self.n_esl_defined

    def summary(self) -> str:
        def fmt(mean, std):
            return "undefined" if mean is None else f"{mean:.3f} ± {std:.3f}"

        return (
            f"{self.algorithm_id}: ESL {fmt(self.esl_mean, self.esl_std)} "
            f"(n_defined={self.n_esl_defined}/{self.n_trials}), "
            f"OMR {fmt(self.omr_mean, self.omr_std)}, "
            f"UC {fmt(self.uc_mean, self.uc_std)}, SR {self.sr:.1f}%"
        )
