"""
Quantiles, distribution functions and seeded sampling for tail models
"""

import logging
import math

import numpy as np

from ..core.errors import DomainError, ErrorHandler
from ..models.tail_models import SortedSample
from .base import WeibullTailModel, check_unit_interval
from .streams import open_uniforms, replication_generator

logger = logging.getLogger(__name__)


def quantile(model: WeibullTailModel, u: float) -> float:
    """F^{-1}(u) for u in (0, 1)"""
    check_unit_interval(u)
    return float(model.quantile_array(np.array([u]))[0])


def upper_quantile(model: WeibullTailModel, q: float) -> float:
    """F^{-1}(1 - q), computed from the tail probability q"""
    check_unit_interval(q, "q")
    return float(model.upper_quantile_array(np.array([q]))[0])


def cdf(model: WeibullTailModel, x: float) -> float:
    if not x > 0:
        return 0.0
    return float(model.cdf_array(np.array([x]))[0])


def logpdf(model: WeibullTailModel, x: float) -> float:
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"x must lie in the support (0, inf), got {x!r}", argument="x", value=x)
    return float(model.logpdf_array(np.array([x]))[0])


def draw_sample(model: WeibullTailModel, n: int, rng: np.random.Generator) -> SortedSample:
    """n inverse-transform draws from rng, sorted"""
    values = np.sort(model.quantile_array(open_uniforms(rng, n)))
    return SortedSample.from_values(values, presorted=True)


def sample(model: WeibullTailModel, n: int, seed: int, index: int = 0) -> SortedSample:
    """Deterministic sample of size n for (model, seed, index)"""
    ErrorHandler.require_positive_int(n, "n", minimum=3)
    logger.debug(f"Sampling {model.name} n={n} seed={seed} index={index}")
    return draw_sample(model, n, replication_generator(seed, index))


def extreme_quantile(model: WeibullTailModel, p: float) -> float:
    """x_p with 1 - F(x_p) = p"""
    check_unit_interval(p, "p")
    return model.upper_quantile_from_log(math.log(p))
