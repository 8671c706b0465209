"""
Data models for Weibull tail-coefficient estimation

Records shared by the estimators, the AMSE machinery and the Monte Carlo engine.
"""

import math
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.errors import DomainError, ValidationError


class EstimatorVariant(str, Enum):
    """Normalization T_n used in the estimator family"""
    V1 = "V1"  # mu_0(log(n/k))
    V2 = "V2"  # Riemann sum of mu_0's integral form
    V3 = "V3"  # 1/log(n/k)

    @classmethod
    def parse_list(cls, text: str) -> List["EstimatorVariant"]:
        """Parse 'V1,V3' (case-insensitive) preserving order, without duplicates"""
        variants: List[EstimatorVariant] = []
        for token in text.split(","):
            token = token.strip().upper()
            if not token:
                continue
            try:
                variant = cls(token)
            except ValueError:
                raise DomainError(f"Unknown estimator variant: {token!r}", argument="variant", value=token)
            if variant not in variants:
                variants.append(variant)
        return variants


class BiasSign(str, Enum):
    """Ultimate sign of the bias function b"""
    ULTIMATELY_NONNEG = "ultimately_nonneg"
    ULTIMATELY_NONPOS = "ultimately_nonpos"
    ZERO = "zero"


class SortedSample(BaseModel):
    """Strictly positive observations in ascending order"""
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...] = Field(..., description="Order statistics X_{1,n} <= ... <= X_{n,n}")

    @model_validator(mode="after")
    def _check_invariants(self) -> "SortedSample":
        _validate_order_statistics(np.asarray(self.values, dtype=float))
        return self

    @classmethod
    def from_values(cls, values: Iterable[float], presorted: bool = False) -> "SortedSample":
        """Build a sample from raw observations (sorted here unless presorted)"""
        array = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
        if not presorted:
            array = np.sort(array)
        _validate_order_statistics(array)
        return cls.model_construct(values=tuple(array.tolist()))

    @property
    def n(self) -> int:
        return len(self.values)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @cached_property
    def log_values(self) -> np.ndarray:
        return np.log(self.array)

    def order_statistic(self, rank: int) -> float:
        """X_{rank,n}, 1-based"""
        return self.values[rank - 1]


def _validate_order_statistics(array: np.ndarray) -> None:
    if array.ndim != 1 or array.size < 3:
        raise DomainError(
            f"need at least 3 observations, got {array.size}", argument="n", value=int(array.size)
        )
    bad = np.flatnonzero(~np.isfinite(array) | (array <= 0))
    if bad.size:
        index = int(bad[0])
        raise DomainError(
            f"observations must be finite and > 0; value {array[index]!r} at position {index + 1}",
            argument="values", value=float(array[index]), details={"position": index + 1}
        )
    if np.any(np.diff(array) < 0):
        raise DomainError("observations must be in non-decreasing order", argument="values")


class EstimatePoint(BaseModel):
    """theta_hat for one (k, variant), with the normalization and bias term used"""
    k: int
    variant: EstimatorVariant
    t_n: float
    a_n: float
    theta_hat: float
    quantile_hat: Optional[float] = None
    tau: Optional[float] = None
    p: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> "EstimatePoint":
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.t_n > 0:
            raise ValueError("t_n must be > 0")
        return self


class AMSEPoint(BaseModel):
    """One evaluation of (theta a_n + b(log(n/k)))^2 + theta^2/k"""
    k: int
    variant: EstimatorVariant
    bias_sq: float = Field(..., ge=0)
    variance: float = Field(..., gt=0)
    total: float

    @model_validator(mode="after")
    def _check_total(self) -> "AMSEPoint":
        if self.total != self.bias_sq + self.variance:
            raise ValueError("total must equal bias_sq + variance")
        return self


class CurvePoint(BaseModel):
    """A (k, value) pair with its bias/variance split"""
    k: int
    value: float
    bias_sq: float
    variance: float


class CurveSeries(BaseModel):
    """(k -> value) table; the unit of CSV and SVG output"""
    label: str
    variant: EstimatorVariant
    estimator: str = Field(..., description="'mse', 'amse' or 'qmse'")
    points: List[CurvePoint] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def _check_points(cls, points: List[CurvePoint]) -> List[CurvePoint]:
        ks = [point.k for point in points]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("k must be strictly increasing")
        if not all(math.isfinite(point.value) for point in points):
            raise ValueError("curve values must be finite")
        return points

    @property
    def ks(self) -> np.ndarray:
        return np.array([point.k for point in self.points], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([point.value for point in self.points], dtype=float)

    def value_at(self, k: int) -> float:
        for point in self.points:
            if point.k == k:
                return point.value
        raise KeyError(k)


class OrderingCase(str, Enum):
    """Which branch of the AMSE comparison applies"""
    NEG_BIAS_ALPHA_GT_THETA = "neg_bias_alpha_gt_theta"
    NEG_BIAS_ALPHA_LT_THETA = "neg_bias_alpha_lt_theta"
    POS_BIAS_BETA_GT_THETA = "pos_bias_beta_gt_theta"
    POS_BIAS_BETA_LT_THETA = "pos_bias_beta_lt_theta"
    ZERO_BIAS = "zero_bias"


class OrderingVerdict(BaseModel):
    """Predicted AMSE ordering of the three estimators"""
    model: str
    case: OrderingCase
    ranking: List[EstimatorVariant] = Field(..., description="Best first")
    best_only: bool = Field(..., description="True when only the best estimator is determined")
    alpha_or_beta: float
    theta: float
    probe_n: int
    k: Optional[int] = None

    @property
    def predicted_order(self) -> str:
        best, second, third = (variant.value for variant in self.ranking)
        if self.best_only:
            return f"{best} < min({second}, {third})"
        return f"{best} < {second} < {third}"

    def holds_for(self, values: Dict[EstimatorVariant, float]) -> bool:
        """Check the prediction against AMSE (or MSE) values keyed by variant"""
        best, second, third = self.ranking
        if self.best_only:
            return values[best] < min(values[second], values[third])
        return values[best] < values[second] < values[third]

    def to_report(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["predicted_order"] = self.predicted_order
        if math.isinf(self.alpha_or_beta):
            data["alpha_or_beta"] = "inf"
        return data


class ConditionResult(BaseModel):
    """One sequence condition evaluated along an n-grid"""
    name: str
    description: str
    ratios: List[float]
    final_value: float
    holds: bool


class SequenceConditionReport(BaseModel):
    """Growth-condition verdicts for an intermediate sequence rule"""
    n_grid: List[int]
    k_values: List[int]
    conditions: List[ConditionResult]

    def condition(self, name: str) -> ConditionResult:
        for result in self.conditions:
            if result.name == name:
                return result
        raise KeyError(name)


class AgreementReport(BaseModel):
    """How often pointwise curve values respect a predicted ordering"""
    model: str
    case: OrderingCase
    share: float
    k_values: List[int]
    disagreements: List[int] = Field(default_factory=list)


class NormalityDiagnostic(BaseModel):
    """Standardized residuals compared with N(0, 1)"""
    model: str
    variant: EstimatorVariant
    n: int
    k: int
    p: Optional[float] = None
    replications: int
    seed: int
    ks_distance: float
    ks_pvalue: float
    critical_value_1pct: float
    z_mean: float
    z_variance: float

    @property
    def passes_ks(self) -> bool:
        return self.ks_distance < self.critical_value_1pct


class RunConfig(BaseModel):
    """Resolved settings for one CLI invocation"""
    subcommand: Literal["estimate", "simulate", "amse", "compare", "figures", "diagnose"]
    model: Optional[str] = None
    n: int = 500
    replications: int = 200
    k_min: int = 2
    k_max: int = 150
    p: Optional[float] = None
    seed: int = 0
    variants: List[EstimatorVariant] = Field(default_factory=lambda: list(EstimatorVariant))
    input_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    emit_svg: bool = False
    log_y: bool = False
    workers: int = 1
    k_rule: str = "log"
    simulate: bool = False

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        if self.subcommand == "estimate" and self.input_path is None:
            raise ValidationError("estimate requires --input", field="input")
        if self.subcommand in ("simulate", "amse", "compare", "diagnose") and not self.model:
            raise ValidationError(f"{self.subcommand} requires --model", field="model")
        if self.k_min < 2 or self.k_max < self.k_min:
            raise ValidationError(
                f"need 2 <= k-min <= k-max, got k-min={self.k_min}, k-max={self.k_max}", field="k_min"
            )
        if self.subcommand != "estimate" and self.k_max >= self.n:
            raise ValidationError(f"k-max must be < n, got k-max={self.k_max}, n={self.n}", field="k_max")
        if self.replications < 2:
            raise ValidationError(f"replications must be >= 2, got {self.replications}", field="replications")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}", field="workers")
        if not 0 <= self.seed <= (1 << 64) - 1:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}", field="seed")
        if not self.variants:
            raise ValidationError("at least one variant is required", field="variants")
        return self

    @property
    def k_range(self) -> range:
        return range(self.k_min, self.k_max + 1)


class RunManifest(BaseModel):
    """Echo of a run's plan, written next to its outputs"""
    tool: str = "weibull-tail-estimators"
    version: str
    subcommand: str
    models: List[str]
    n: int
    replications: Optional[int] = None
    k_min: int
    k_max: int
    variants: List[EstimatorVariant]
    seed: Optional[int] = None
    p: Optional[float] = None
    quadrature_nodes: int
    files: List[str] = Field(default_factory=list)
