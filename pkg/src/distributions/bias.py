"""
The bias function b(x) of the second-order condition
"""

import math
from typing import Iterable

import numpy as np

from ..core.errors import DomainError
from .base import WeibullTailModel


class BiasFunction:
    """Callable x -> b(x) bound to one model"""

    def __init__(self, model: WeibullTailModel):
        self.model = model

    def __call__(self, x: float) -> float:
        return bias_b(self.model, x)

    def evaluate(self, xs: Iterable[float]) -> np.ndarray:
        return np.array([bias_b(self.model, float(x)) for x in xs])


def bias_b(model: WeibullTailModel, x: float) -> float:
    """Exact b(x) through the model's quantile and density; 0 for Weibull models"""
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"x must be a finite real > 0, got {x!r}", argument="x", value=x)
    return model.bias(x)
