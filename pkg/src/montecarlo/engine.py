"""
Replicated sampling engine for MSE curves

Each replication draws one sample from its own seeded stream and evaluates every
(variant, k) estimate from it. Replications run serially or on a process pool and
are always stacked in replication order, so results do not depend on the worker count.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.config import DEFAULT_SEED
from ..core.errors import DomainError, NumericalError
from ..distributions.base import WeibullTailModel
from ..distributions.sampling import draw_sample, extreme_quantile
from ..distributions.streams import MASK64, replication_generator
from ..estimators.weibull_tail import numerator_path, t_n
from ..models.tail_models import CurvePoint, CurveSeries, EstimatorVariant

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int], None]


class ExperimentPlan(BaseModel):
    """N replications of size-n samples, estimated over a k range"""
    model_config = ConfigDict(frozen=True)

    model: WeibullTailModel
    n: int = Field(default=500, ge=3)
    replications: int = Field(default=200, ge=2)
    k_min: int = 2
    k_max: int = 150
    variants: List[EstimatorVariant] = Field(default_factory=lambda: list(EstimatorVariant))
    seed: int = Field(default=DEFAULT_SEED, ge=0, le=MASK64)

    @model_validator(mode="after")
    def _check_k_range(self) -> "ExperimentPlan":
        if not 2 <= self.k_min <= self.k_max <= self.n - 1:
            raise DomainError(
                f"k range [{self.k_min}, {self.k_max}] must lie in [2, n-1] with n={self.n}",
                argument="k_range", value=[self.k_min, self.k_max], details={"n": self.n}
            )
        if not self.variants:
            raise DomainError("at least one estimator variant is required", argument="variants")
        return self

    @property
    def k_range(self) -> range:
        return range(self.k_min, self.k_max + 1)


class ReplicationBatch(NamedTuple):
    """Per-replication estimates: theta (N, V, K) and log X_{n-k+1,n} (N, K)"""
    ks: np.ndarray
    variants: List[EstimatorVariant]
    theta: np.ndarray
    log_thresholds: np.ndarray


def _run_replication(
    model: WeibullTailModel,
    n: int,
    seed: int,
    ks: np.ndarray,
    normalizations: np.ndarray,
    index: int,
) -> Tuple[np.ndarray, np.ndarray]:
    sample = draw_sample(model, n, replication_generator(seed, index))
    theta = numerator_path(sample, ks)[None, :] / normalizations

    if not np.all(np.isfinite(theta)):
        _, bad_k = np.argwhere(~np.isfinite(theta))[0]
        raise NumericalError(
            f"Non-finite estimate in replication {index}",
            details={"model": model.name, "seed": seed, "replication": index, "k": int(ks[bad_k])}
        )
    return theta, sample.log_values[n - ks]


def _collect(results: Iterable[Tuple[np.ndarray, np.ndarray]], on_progress: Optional[ProgressCallback]):
    collected = []
    for result in results:
        collected.append(result)
        if on_progress:
            on_progress(len(collected))
    return collected


def run_replications(
    plan: ExperimentPlan, workers: int = 1, on_progress: Optional[ProgressCallback] = None
) -> ReplicationBatch:
    """Draw plan.replications samples and estimate theta for every (variant, k)"""
    ks = np.asarray(plan.k_range, dtype=np.int64)
    normalizations = np.array([[t_n(variant, plan.n, int(k)) for k in ks] for variant in plan.variants])
    task = partial(_run_replication, plan.model, plan.n, plan.seed, ks, normalizations)

    logger.info(
        f"Running {plan.replications} replications of {plan.model.name} "
        f"(n={plan.n}, k={plan.k_min}..{plan.k_max}, seed={plan.seed}, workers={workers})"
    )
    if workers > 1:
        chunksize = max(1, plan.replications // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = _collect(pool.map(task, range(plan.replications), chunksize=chunksize), on_progress)
    else:
        results = _collect(map(task, range(plan.replications)), on_progress)

    return ReplicationBatch(
        ks=ks,
        variants=list(plan.variants),
        theta=np.stack([theta for theta, _ in results]),
        log_thresholds=np.stack([thresholds for _, thresholds in results]),
    )


def _curves_from_errors(
    plan: ExperimentPlan, batch: ReplicationBatch, errors: np.ndarray, estimator: str
) -> List[CurveSeries]:
    total = np.mean(errors ** 2, axis=0)
    bias_sq = np.mean(errors, axis=0) ** 2
    variance = np.var(errors, axis=0)

    curves = []
    for v, variant in enumerate(batch.variants):
        curves.append(CurveSeries(
            label=f"{plan.model.name} {variant.value} {estimator}",
            variant=variant,
            estimator=estimator,
            points=[
                CurvePoint(k=int(k), value=float(total[v, i]), bias_sq=float(bias_sq[v, i]),
                           variance=float(variance[v, i]))
                for i, k in enumerate(batch.ks)
            ],
        ))
    return curves


def mse_curves(
    plan: ExperimentPlan,
    workers: int = 1,
    batch: Optional[ReplicationBatch] = None,
    on_progress: Optional[ProgressCallback] = None,
) -> List[CurveSeries]:
    """MSE(k) = (1/N) sum_i (theta_hat_i(k) - theta)^2, one curve per variant"""
    batch = batch or run_replications(plan, workers, on_progress)
    return _curves_from_errors(plan, batch, batch.theta - plan.model.theta, "mse")


def _check_p(plan: ExperimentPlan, p: float, check_regime: bool) -> None:
    upper = 1.0 / plan.n if check_regime else 1.0
    if not 0.0 < p < upper:
        raise DomainError(
            f"p must satisfy 0 < p < {upper:g}, got {p!r}", argument="p", value=p, details={"n": plan.n}
        )


def log_quantile_ratios(
    plan: ExperimentPlan,
    p: float,
    batch: ReplicationBatch,
    check_regime: bool = True,
) -> np.ndarray:
    """log(x_hat_p / x_p) per replication, variant and k"""
    _check_p(plan, p, check_regime)
    log_true = math.log(extreme_quantile(plan.model, p))
    log_tau = np.log(-math.log(p) / np.log(plan.n / batch.ks))
    return batch.log_thresholds[:, None, :] + batch.theta * log_tau[None, None, :] - log_true


def quantile_mse_curves(
    plan: ExperimentPlan,
    p: float,
    workers: int = 1,
    batch: Optional[ReplicationBatch] = None,
    check_regime: bool = True,
    on_progress: Optional[ProgressCallback] = None,
) -> List[CurveSeries]:
    """Per-variant MSE of log(x_hat_p / x_p)"""
    _check_p(plan, p, check_regime)
    batch = batch or run_replications(plan, workers, on_progress)
    return _curves_from_errors(plan, batch, log_quantile_ratios(plan, p, batch, check_regime), "qmse")


def quantile_relative_errors(
    plan: ExperimentPlan, p: float, workers: int = 1, batch: Optional[ReplicationBatch] = None
) -> np.ndarray:
    """|x_hat_p / x_p - 1| with shape (N, V, K)"""
    _check_p(plan, p, True)
    batch = batch or run_replications(plan, workers)
    return np.abs(np.expm1(log_quantile_ratios(plan, p, batch)))
