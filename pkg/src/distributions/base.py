"""
Base class for Weibull tail-distributions
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Dict

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.errors import DomainError, SaturationError
from ..models.tail_models import BiasSign

logger = logging.getLogger(__name__)

# exp(LOG_TAIL_FLOOR) is still a normal double
LOG_TAIL_FLOOR = -700.0

# Below this tail log-probability the quantile is taken through the upper tail
COMPLEMENTARY_PATH_THRESHOLD = math.log(2.0)


def format_param(value: float) -> str:
    return f"{value:g}"


class WeibullTailModel(BaseModel, ABC):
    """
    A distribution whose inverse cumulative hazard is t^theta times a slowly
    varying function.

    Subclasses supply the array-level quantile, upper quantile, cdf and log-density;
    the bias function of the second-order condition is derived from those.
    """
    model_config = ConfigDict(frozen=True)

    family: str

    @property
    @abstractmethod
    def params(self) -> Dict[str, float]:
        """Named parameters in the order used by 'family:p1,p2' specs"""

    @property
    @abstractmethod
    def theta(self) -> float:
        """True Weibull tail-coefficient"""

    @property
    @abstractmethod
    def rho(self) -> float:
        """Second-order parameter (-inf when the bias vanishes)"""

    @property
    @abstractmethod
    def bias_sign(self) -> BiasSign:
        """Ultimate sign of the bias function"""

    @property
    @abstractmethod
    def display_name(self) -> str:
        """Conventional notation, e.g. Gamma(1.5,1)"""

    @property
    def name(self) -> str:
        """File-safe identifier, e.g. gamma_1.5_1"""
        return "_".join([self.family, *(format_param(v) for v in self.params.values())])

    @property
    def spec(self) -> str:
        """CLI form, e.g. gamma:1.5,1"""
        return f"{self.family}:" + ",".join(format_param(v) for v in self.params.values())

    @abstractmethod
    def quantile_array(self, u: np.ndarray) -> np.ndarray:
        """F^{-1}(u) for u in (0, 1)"""

    @abstractmethod
    def upper_quantile_array(self, q: np.ndarray) -> np.ndarray:
        """F^{-1}(1 - q) computed from the tail probability q"""

    @abstractmethod
    def cdf_array(self, x: np.ndarray) -> np.ndarray:
        """F(x)"""

    @abstractmethod
    def logpdf_array(self, x: np.ndarray) -> np.ndarray:
        """log f(x) on the support"""

    def upper_quantile_from_log(self, log_q: float) -> float:
        """F^{-1}(1 - e^{log_q}); models with a log-scale tail inverse override this"""
        if log_q < LOG_TAIL_FLOOR:
            raise SaturationError(
                f"Tail probability exp({log_q:g}) is not resolvable for {self.display_name}",
                details={"model": self.name, "log_tail_probability": log_q}
            )
        return float(self.upper_quantile_array(np.array([math.exp(log_q)]))[0])

    def bias(self, x: float) -> float:
        """b(x) = x e^{-x} / (y f(y)) - theta with y = F^{-1}(1 - e^{-x}), evaluated in log space"""
        if x < COMPLEMENTARY_PATH_THRESHOLD:
            y = float(self.quantile_array(np.array([-math.expm1(-x)]))[0])
        else:
            y = self.upper_quantile_from_log(-x)

        if not (math.isfinite(y) and y > 0):
            raise SaturationError(
                f"F^{{-1}}(1 - e^{{-x}}) saturated at x={x:g} for {self.display_name}",
                details={"model": self.name, "x": x, "quantile": y}
            )

        log_density = float(self.logpdf_array(np.array([y]))[0])
        log_ratio = math.log(x) - x - math.log(y) - log_density
        if not math.isfinite(log_ratio) or log_ratio > 700:
            raise SaturationError(
                f"Bias function is not resolvable at x={x:g} for {self.display_name}",
                details={"model": self.name, "x": x, "quantile": y, "log_density": log_density}
            )
        return math.exp(log_ratio) - self.theta

    def __str__(self) -> str:
        return self.display_name


def check_unit_interval(u: float, argument: str = "u") -> float:
    if not (0.0 < u < 1.0):
        raise DomainError(f"{argument} must lie in (0, 1), got {u!r}", argument=argument, value=u)
    return float(u)
