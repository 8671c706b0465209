"""
Weibull tail-coefficient estimators and the extreme quantile estimator

    theta_hat = (1/T_n) (1/k) sum_{i=1..k} (log X_{n-i+1,n} - log X_{n-k+1,n})
    x_hat_p   = X_{n-k+1,n} (log(1/p) / log(n/k))^theta_hat

T_n is one of three normalizations (EstimatorVariant); a_n = mu_0(log(n/k))/T_n - 1
is the bias it induces.
"""

import logging
import math
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..core.errors import DomainError, ErrorHandler, NumericalError, UndefinedRateError
from ..distributions.base import WeibullTailModel
from ..distributions.bias import bias_b
from ..models.tail_models import EstimatePoint, EstimatorVariant, SortedSample
from ..specfun.functions import mu_0

logger = logging.getLogger(__name__)


def log_n_over_k(n: int, k: int) -> float:
    return math.log(n / k)


@lru_cache(maxsize=4096)
def _t_n(variant: EstimatorVariant, n: int, k: int) -> float:
    log_ratio = log_n_over_k(n, k)
    if variant is EstimatorVariant.V1:
        return mu_0(log_ratio)
    if variant is EstimatorVariant.V2:
        i = np.arange(1, k + 1, dtype=float)
        return float(np.mean(np.log1p(-np.log(i / k) / log_ratio)))
    return 1.0 / log_ratio


def t_n(variant: EstimatorVariant, n: int, k: int) -> float:
    """Normalization T_n for 2 <= k < n"""
    k = ErrorHandler.require_k_range(k, n)
    return _t_n(EstimatorVariant(variant), int(n), k)


def a_n_exact(variant: EstimatorVariant, n: int, k: int) -> float:
    """mu_0(log(n/k))/T_n - 1 (exactly 0 for V1)"""
    variant = EstimatorVariant(variant)
    normalization = t_n(variant, n, k)
    if variant is EstimatorVariant.V1:
        return 0.0
    return mu_0(log_n_over_k(n, k)) / normalization - 1.0


def _check_k_values(k_values: Iterable[int], n: int) -> np.ndarray:
    ks = [ErrorHandler.require_k_range(k, n) for k in k_values]
    return np.asarray(ks, dtype=np.int64)


def numerator_path(sample: SortedSample, k_values: Iterable[int]) -> np.ndarray:
    """(1/k) sum of the top-k log-excesses over X_{n-k+1,n}, for each k"""
    ks = _check_k_values(k_values, sample.n)
    descending = sample.log_values[::-1]
    # sum_{i<=k} (L_i - L_k) = sum_{j<k} j (L_j - L_{j+1}); every term is >= 0
    gaps = descending[:-1] - descending[1:]
    weighted = np.cumsum(np.arange(1, sample.n) * gaps)
    return weighted[ks - 2] / ks


def theta_hat_path(
    sample: SortedSample, k_values: Sequence[int], variant: EstimatorVariant
) -> np.ndarray:
    """theta_hat for every k in k_values, sharing one cumulative sum"""
    variant = EstimatorVariant(variant)
    numerators = numerator_path(sample, k_values)
    normalizations = np.array([_t_n(variant, sample.n, int(k)) for k in k_values])
    return numerators / normalizations


def theta_hat(sample: SortedSample, k: int, variant: EstimatorVariant) -> EstimatePoint:
    """Estimate theta from the k largest order statistics"""
    variant = EstimatorVariant(variant)
    k = ErrorHandler.require_k_range(k, sample.n)
    value = float(theta_hat_path(sample, [k], variant)[0])
    if not math.isfinite(value):
        raise NumericalError("Non-finite estimate", details={"k": k, "variant": variant.value})
    return EstimatePoint(
        k=k,
        variant=variant,
        t_n=t_n(variant, sample.n, k),
        a_n=a_n_exact(variant, sample.n, k),
        theta_hat=value,
    )


def extrapolation_ratio(n: int, k: int, p: float) -> float:
    """tau = log(1/p) / log(n/k)"""
    return -math.log(p) / log_n_over_k(n, k)


def quantile_hat_unchecked(
    sample: SortedSample, k: int, p: float, variant: EstimatorVariant
) -> float:
    """Extreme quantile estimate for any p in (0, 1), including tau < 1"""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}", argument="p", value=p)
    estimate = theta_hat(sample, k, variant)
    threshold = sample.order_statistic(sample.n - k + 1)
    return threshold * extrapolation_ratio(sample.n, k, p) ** estimate.theta_hat


def quantile_hat(sample: SortedSample, k: int, p: float, variant: EstimatorVariant) -> float:
    """Extreme quantile estimate; requires 0 < p < 1/n"""
    if not 0.0 < p < 1.0 / sample.n:
        raise DomainError(
            f"p must satisfy 0 < p < 1/n = {1.0 / sample.n:g}, got {p!r}",
            argument="p", value=p, details={"n": sample.n}
        )
    return quantile_hat_unchecked(sample, k, p, variant)


def estimate_table(
    sample: SortedSample,
    k_values: Sequence[int],
    variants: Sequence[EstimatorVariant],
    p: Optional[float] = None,
) -> List[EstimatePoint]:
    """EstimatePoint rows ordered by k then variant; quantile columns filled when p is given"""
    if p is not None and not 0.0 < p < 1.0 / sample.n:
        raise DomainError(
            f"p must satisfy 0 < p < 1/n = {1.0 / sample.n:g}, got {p!r}",
            argument="p", value=p, details={"n": sample.n}
        )

    ks = [int(k) for k in _check_k_values(k_values, sample.n)]
    paths = {variant: theta_hat_path(sample, ks, variant) for variant in variants}

    rows: List[EstimatePoint] = []
    for position, k in enumerate(ks):
        threshold = sample.order_statistic(sample.n - k + 1)
        tau = extrapolation_ratio(sample.n, k, p) if p is not None else None
        for variant in variants:
            value = float(paths[variant][position])
            if not math.isfinite(value):
                raise NumericalError("Non-finite estimate", details={"k": k, "variant": variant.value})
            rows.append(EstimatePoint(
                k=k,
                variant=variant,
                t_n=_t_n(variant, sample.n, k),
                a_n=a_n_exact(variant, sample.n, k),
                theta_hat=value,
                quantile_hat=threshold * tau ** value if tau is not None else None,
                tau=tau,
                p=p,
            ))
    logger.debug(f"Computed {len(rows)} estimates for n={sample.n}")
    return rows


def optimal_k(n: int, lam: float, model: WeibullTailModel) -> int:
    """round((lam / b(log n))^2) clamped into [2, n - 1]"""
    n = ErrorHandler.require_positive_int(n, "n", minimum=3)
    if lam == 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be a finite non-zero real, got {lam!r}", argument="lambda", value=lam)
    b = bias_b(model, math.log(n))
    if b == 0.0:
        raise UndefinedRateError(
            f"b(log n) = 0 for {model.display_name}: every intermediate sequence has the same rate",
            argument="model", value=model.name, details={"n": n}
        )
    k = round((lam / b) ** 2) if abs(lam / b) < 1e154 else n - 1
    return int(min(max(k, 2), n - 1))
