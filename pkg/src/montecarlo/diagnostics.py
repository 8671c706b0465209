"""
Normality diagnostics and curve comparison helpers
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..core.config import DEFAULT_SEED
from ..core.errors import ValidationError
from ..distributions.base import WeibullTailModel
from ..distributions.bias import bias_b
from ..estimators.weibull_tail import a_n_exact, extrapolation_ratio, log_n_over_k
from ..models.tail_models import (
    AgreementReport,
    CurveSeries,
    EstimatorVariant,
    NormalityDiagnostic,
    OrderingVerdict,
)
from .engine import ExperimentPlan, log_quantile_ratios, mse_curves, run_replications

logger = logging.getLogger(__name__)

KS_CONFIDENCE = 0.99


def _diagnostic(
    z: np.ndarray, model: WeibullTailModel, variant: EstimatorVariant, n: int, k: int, seed: int,
    p: Optional[float] = None,
) -> NormalityDiagnostic:
    result = stats.kstest(z, "norm")
    replications = int(z.size)
    diagnostic = NormalityDiagnostic(
        model=model.name,
        variant=variant,
        n=n,
        k=k,
        p=p,
        replications=replications,
        seed=seed,
        ks_distance=float(result.statistic),
        ks_pvalue=float(result.pvalue),
        critical_value_1pct=float(stats.kstwo.ppf(KS_CONFIDENCE, replications)),
        z_mean=float(np.mean(z)),
        z_variance=float(np.var(z, ddof=1)),
    )
    logger.info(
        f"{model.name} {variant.value} n={n} k={k}: KS={diagnostic.ks_distance:.4f} "
        f"(1% critical {diagnostic.critical_value_1pct:.4f})"
    )
    return diagnostic


def normality_diagnostic(
    model: WeibullTailModel,
    n: int,
    replications: int,
    k: int,
    variant: EstimatorVariant,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> NormalityDiagnostic:
    """KS distance of k^{1/2}(theta_hat - theta - b(log(n/k)) - theta a_n)/theta to N(0, 1)"""
    variant = EstimatorVariant(variant)
    plan = ExperimentPlan(
        model=model, n=n, replications=replications, k_min=k, k_max=k, variants=[variant], seed=seed
    )
    batch = run_replications(plan, workers)
    theta = model.theta
    centre = theta + bias_b(model, log_n_over_k(n, k)) + theta * a_n_exact(variant, n, k)
    z = math.sqrt(k) * (batch.theta[:, 0, 0] - centre) / theta
    return _diagnostic(z, model, variant, n, k, seed)


def quantile_normality_diagnostic(
    model: WeibullTailModel,
    n: int,
    replications: int,
    k: int,
    p: float,
    variant: EstimatorVariant,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> NormalityDiagnostic:
    """KS distance of k^{1/2}/log(tau) (x_hat_p/x_p - tau^{theta a_n})/theta to N(0, 1)"""
    variant = EstimatorVariant(variant)
    plan = ExperimentPlan(
        model=model, n=n, replications=replications, k_min=k, k_max=k, variants=[variant], seed=seed
    )
    batch = run_replications(plan, workers)
    theta = model.theta
    tau = extrapolation_ratio(n, k, p)
    ratio = np.exp(log_quantile_ratios(plan, p, batch)[:, 0, 0])
    z = math.sqrt(k) / math.log(tau) * (ratio - tau ** (theta * a_n_exact(variant, n, k))) / theta
    return _diagnostic(z, model, variant, n, k, seed, p=p)


def argmin_k(series: CurveSeries) -> int:
    """k at which the curve is smallest (first one on ties)"""
    if not series.points:
        raise ValidationError(f"Curve '{series.label}' is empty", field="series")
    return int(series.ks[int(np.argmin(series.values))])


def _aligned(a: CurveSeries, b: CurveSeries) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not np.array_equal(a.ks, b.ks):
        raise ValidationError(f"Curves '{a.label}' and '{b.label}' have different k grids", field="series")
    return a.ks, a.values, b.values


def sign_changes(series_a: CurveSeries, series_b: CurveSeries) -> List[int]:
    """k values at which a - b takes the opposite sign to the last non-zero difference"""
    ks, a, b = _aligned(series_a, series_b)
    changes: List[int] = []
    previous = 0.0
    for k, difference in zip(ks, np.sign(a - b)):
        if difference == 0:
            continue
        if previous and difference != previous:
            changes.append(int(k))
        previous = difference
    return changes


def dominance_share(
    target: CurveSeries, others: Sequence[CurveSeries], k_window: Optional[Tuple[int, int]] = None
) -> float:
    """Share of k in k_window where target lies strictly above every other curve"""
    for other in others:
        _aligned(target, other)
    ks = target.ks
    lo, hi = k_window or (int(ks[0]), int(ks[-1]))
    mask = (ks >= lo) & (ks <= hi)
    if not mask.any():
        raise ValidationError(f"k window [{lo}, {hi}] contains no curve points", field="k_window")
    ceiling = np.max(np.stack([other.values for other in others]), axis=0)
    return float(np.mean(target.values[mask] > ceiling[mask]))


def ordering_share_of_curves(
    curves: Sequence[CurveSeries], verdict: OrderingVerdict, k_window: Optional[Tuple[int, int]] = None
) -> AgreementReport:
    """How often the curves (one per variant) follow verdict's ordering"""
    by_variant: Dict[EstimatorVariant, CurveSeries] = {curve.variant: curve for curve in curves}
    missing = [variant.value for variant in verdict.ranking if variant not in by_variant]
    if missing:
        raise ValidationError(f"Ordering needs curves for {', '.join(missing)}", field="variants")

    reference = by_variant[verdict.ranking[0]]
    ks = reference.ks
    lo, hi = k_window or (int(ks[0]), int(ks[-1]))
    selected = [int(k) for k in ks if lo <= k <= hi]
    disagreements = [
        k for k in selected
        if not verdict.holds_for({variant: curve.value_at(k) for variant, curve in by_variant.items()})
    ]
    share = 1.0 - len(disagreements) / len(selected) if selected else 0.0
    return AgreementReport(
        model=verdict.model, case=verdict.case, share=share, k_values=selected, disagreements=disagreements
    )


def empirical_ordering_share(
    plan: ExperimentPlan, verdict: OrderingVerdict, workers: int = 1
) -> AgreementReport:
    """Share of k at which simulated MSE curves follow the predicted ordering"""
    plan = plan.model_copy(update={"variants": list(EstimatorVariant)})
    return ordering_share_of_curves(mse_curves(plan, workers), verdict)
