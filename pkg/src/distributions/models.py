"""
The absolute Gaussian, Gamma and Weibull tail-distributions
"""

import math
from typing import Dict, Literal

import numpy as np
from pydantic import model_validator
from scipy import optimize, special
from scipy.stats import norm

from ..core.errors import DomainError, NumericalError
from ..models.tail_models import BiasSign
from .base import WeibullTailModel, format_param

# Relative tolerance for numerical inversion
INVERSION_RTOL = 1e-12


def _require_positive(value: float, argument: str) -> None:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{argument} must be a finite real > 0, got {value!r}", argument=argument, value=value)


def _check_inversion(values: np.ndarray, model: WeibullTailModel) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NumericalError(
            f"Quantile inversion failed for {model.display_name}",
            details={"model": model.name}
        )
    return values


class AbsNormalModel(WeibullTailModel):
    """|N(mu, sigma^2)|; theta = 1/2, rho = -1"""
    family: Literal["absnormal"] = "absnormal"
    mu: float = 0.0
    sigma: float = 1.0

    @model_validator(mode="after")
    def _check_params(self) -> "AbsNormalModel":
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}", argument="mu", value=self.mu)
        _require_positive(self.sigma, "sigma")
        return self

    @property
    def params(self) -> Dict[str, float]:
        return {"mu": self.mu, "sigma": self.sigma}

    @property
    def theta(self) -> float:
        return 0.5

    @property
    def rho(self) -> float:
        return -1.0

    @property
    def bias_sign(self) -> BiasSign:
        return BiasSign.ULTIMATELY_NONNEG

    @property
    def display_name(self) -> str:
        return f"|N({format_param(self.mu)},{format_param(self.sigma)})|"

    def _survival(self, x: np.ndarray) -> np.ndarray:
        return special.ndtr((self.mu - x) / self.sigma) + special.ndtr((-x - self.mu) / self.sigma)

    def _invert(self, target: float, upper: bool) -> float:
        # Root of F(y) = target (or of 1 - F(y) = target when upper) on [0, |mu| + 40 sigma]
        def objective(y: float) -> float:
            if upper:
                return float(self._survival(np.float64(y))) - target
            return float(self.cdf_array(np.float64(y))) - target

        hi = abs(self.mu) + 40.0 * self.sigma
        try:
            return optimize.brentq(objective, 0.0, hi, xtol=1e-300, rtol=INVERSION_RTOL, maxiter=500)
        except (ValueError, RuntimeError) as e:
            raise NumericalError(
                f"Quantile inversion did not converge for {self.display_name}",
                details={"model": self.name, "target": target}, cause=e
            )

    def quantile_array(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.mu == 0.0:
            with np.errstate(all="ignore"):
                z = np.where(u <= 0.5, special.ndtri((1.0 + u) / 2.0), -special.ndtri((1.0 - u) / 2.0))
            return _check_inversion(self.sigma * z, self)
        return np.array([self._invert(float(v), upper=False) for v in u.ravel()]).reshape(u.shape)

    def upper_quantile_array(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self.mu == 0.0:
            return _check_inversion(-self.sigma * special.ndtri(q / 2.0), self)
        return np.array([self._invert(float(v), upper=True) for v in q.ravel()]).reshape(q.shape)

    def upper_quantile_from_log(self, log_q: float) -> float:
        if self.mu == 0.0:
            return float(-self.sigma * special.ndtri_exp(log_q - math.log(2.0)))
        return super().upper_quantile_from_log(log_q)

    def cdf_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.mu == 0.0:
            return special.erf(x / (self.sigma * math.sqrt(2.0)))
        return special.ndtr((x - self.mu) / self.sigma) - special.ndtr((-x - self.mu) / self.sigma)

    def logpdf_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.logaddexp(
            norm.logpdf((x - self.mu) / self.sigma), norm.logpdf((x + self.mu) / self.sigma)
        ) - math.log(self.sigma)


class GammaModel(WeibullTailModel):
    """Gamma(shape, rate); theta = 1, rho = -1, bias sign set by shape vs 1"""
    family: Literal["gamma"] = "gamma"
    shape: float
    rate: float = 1.0

    @model_validator(mode="after")
    def _check_params(self) -> "GammaModel":
        _require_positive(self.shape, "shape")
        _require_positive(self.rate, "rate")
        return self

    @property
    def params(self) -> Dict[str, float]:
        return {"shape": self.shape, "rate": self.rate}

    @property
    def theta(self) -> float:
        return 1.0

    @property
    def rho(self) -> float:
        return -1.0

    @property
    def bias_sign(self) -> BiasSign:
        if self.shape < 1.0:
            return BiasSign.ULTIMATELY_NONNEG
        if self.shape > 1.0:
            return BiasSign.ULTIMATELY_NONPOS
        return BiasSign.ZERO

    @property
    def display_name(self) -> str:
        return f"Γ({format_param(self.shape)},{format_param(self.rate)})"

    def quantile_array(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        lower = special.gammaincinv(self.shape, u)
        upper = special.gammainccinv(self.shape, 1.0 - u)
        return _check_inversion(np.where(u <= 0.5, lower, upper) / self.rate, self)

    def upper_quantile_array(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return _check_inversion(special.gammainccinv(self.shape, q) / self.rate, self)

    def cdf_array(self, x: np.ndarray) -> np.ndarray:
        return special.gammainc(self.shape, self.rate * np.asarray(x, dtype=float))

    def logpdf_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return (
            self.shape * math.log(self.rate) + (self.shape - 1.0) * np.log(x)
            - self.rate * x - special.gammaln(self.shape)
        )


class WeibullModel(WeibullTailModel):
    """Weibull(shape, scale); theta = 1/shape and the bias vanishes identically"""
    family: Literal["weibull"] = "weibull"
    shape: float
    scale: float = 1.0

    @model_validator(mode="after")
    def _check_params(self) -> "WeibullModel":
        _require_positive(self.shape, "shape")
        _require_positive(self.scale, "scale")
        return self

    @property
    def params(self) -> Dict[str, float]:
        return {"shape": self.shape, "scale": self.scale}

    @property
    def theta(self) -> float:
        return 1.0 / self.shape

    @property
    def rho(self) -> float:
        return -math.inf

    @property
    def bias_sign(self) -> BiasSign:
        return BiasSign.ZERO

    @property
    def display_name(self) -> str:
        return f"W({format_param(self.shape)},{format_param(self.scale)})"

    def quantile_array(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)

    def upper_quantile_array(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return self.scale * (-np.log(q)) ** (1.0 / self.shape)

    def upper_quantile_from_log(self, log_q: float) -> float:
        return self.scale * (-log_q) ** (1.0 / self.shape)

    def cdf_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return -np.expm1(-((x / self.scale) ** self.shape))

    def logpdf_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        z = x / self.scale
        return math.log(self.shape) - math.log(self.scale) + (self.shape - 1.0) * np.log(z) - z ** self.shape

    def bias(self, x: float) -> float:
        return 0.0
