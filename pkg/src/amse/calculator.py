"""
Asymptotic mean-square error of the estimator family

    AMSE = (theta a_n + b(log(n/k)))^2 + theta^2 / k
"""

import logging
from typing import Iterable, List

from ..core.errors import ErrorHandler
from ..distributions.base import WeibullTailModel
from ..distributions.bias import bias_b
from ..estimators.weibull_tail import a_n_exact, log_n_over_k
from ..models.tail_models import AMSEPoint, CurvePoint, CurveSeries, EstimatorVariant

logger = logging.getLogger(__name__)


def amse(model: WeibullTailModel, n: int, k: int, variant: EstimatorVariant) -> AMSEPoint:
    """AMSE at (n, k) with the exact a_n"""
    variant = EstimatorVariant(variant)
    k = ErrorHandler.require_k_range(k, n)
    theta = model.theta
    bias = theta * a_n_exact(variant, n, k) + bias_b(model, log_n_over_k(n, k))
    bias_sq = bias * bias
    variance = theta * theta / k
    return AMSEPoint(k=k, variant=variant, bias_sq=bias_sq, variance=variance, total=bias_sq + variance)


def amse_points(
    model: WeibullTailModel, n: int, k_range: Iterable[int], variant: EstimatorVariant
) -> List[AMSEPoint]:
    return [amse(model, n, int(k), variant) for k in k_range]


def amse_curve(
    model: WeibullTailModel, n: int, k_range: Iterable[int], variant: EstimatorVariant
) -> CurveSeries:
    """One AMSE point per k, as a curve"""
    variant = EstimatorVariant(variant)
    points = amse_points(model, n, k_range, variant)
    logger.debug(f"AMSE curve for {model.name} {variant.value}: {len(points)} points")
    return CurveSeries(
        label=f"{model.name} {variant.value} amse",
        variant=variant,
        estimator="amse",
        points=[
            CurvePoint(k=point.k, value=point.total, bias_sq=point.bias_sq, variance=point.variance)
            for point in points
        ],
    )


def amse_curves(
    model: WeibullTailModel, n: int, k_range: Iterable[int], variants: Iterable[EstimatorVariant]
) -> List[CurveSeries]:
    ks = list(k_range)
    return [amse_curve(model, n, ks, variant) for variant in variants]
