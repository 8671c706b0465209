"""
Special functions behind the estimators: K_rho, the exponential integral E1 and
the moments mu_rho(t), sigma_rho^2(t).

    K_rho(lambda) = int_1^lambda u^{rho-1} du
    mu_rho(t)     = int_0^inf K_rho(1 + x/t) e^{-x} dx
    sigma_rho^2(t) = int_0^inf (K_rho(1 + x/t) - mu_rho(t))^2 e^{-x} dx

mu_0(t) = e^t E1(t) and is evaluated in that scaled form so it never overflows.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import integrate

from ..core.config import QuadratureConfig
from ..core.errors import DomainError, NumericalError
from .quadrature import laguerre_integrate

logger = logging.getLogger(__name__)

# |rho| below this is treated as rho = 0
RHO_ZERO_THRESHOLD = 1e-12

E1_SERIES_LIMIT = 1.0
_EPS = np.finfo(float).eps
_FPMIN = np.finfo(float).tiny / _EPS
_MAX_ITERATIONS = 500


def _require_positive_t(t: float) -> None:
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be a finite real > 0, got {t!r}", argument="t", value=t)


def _require_rho(rho: float) -> None:
    if not (math.isfinite(rho) and rho <= 0):
        raise DomainError(f"rho must be a finite real <= 0, got {rho!r}", argument="rho", value=rho)


def _k_rho(lam: np.ndarray, rho: float) -> np.ndarray:
    log_lam = np.log(lam)
    if abs(rho) < RHO_ZERO_THRESHOLD:
        return log_lam
    return np.expm1(rho * log_lam) / rho


def k_rho(lam: float, rho: float) -> float:
    """K_rho(lambda): log(lambda) for rho = 0, (lambda^rho - 1)/rho for rho < 0"""
    if not (math.isfinite(lam) and lam >= 1):
        raise DomainError(f"lambda must be >= 1, got {lam!r}", argument="lambda", value=lam)
    _require_rho(rho)
    return float(_k_rho(np.float64(lam), rho))


def _e1_series(t: float) -> float:
    # E1(t) = -gamma - log t - sum_{k>=1} (-t)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITERATIONS):
        term *= -t / k
        contribution = term / k
        total += contribution
        if abs(contribution) < _EPS * abs(total):
            return -np.euler_gamma - math.log(t) - total
    raise NumericalError("E1 series did not converge", details={"t": t})


def _scaled_e1_continued_fraction(t: float) -> float:
    # Modified Lentz evaluation of e^t E1(t)
    b = t + 1.0
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITERATIONS):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise NumericalError("E1 continued fraction did not converge", details={"t": t})


def exp_integral_e1(t: float) -> float:
    """E1(t) = int_1^inf e^{-tu}/u du, series for t <= 1 and continued fraction above"""
    _require_positive_t(t)
    if t <= E1_SERIES_LIMIT:
        return _e1_series(t)
    value = math.exp(-t) * _scaled_e1_continued_fraction(t)
    if value == 0.0:
        raise NumericalError(
            f"E1({t!r}) underflows double precision; use scaled_exp_integral_e1 for e^t E1(t)",
            details={"t": t},
        )
    return value


def scaled_exp_integral_e1(t: float) -> float:
    """e^t E1(t), evaluated jointly"""
    _require_positive_t(t)
    if t <= E1_SERIES_LIMIT:
        return math.exp(t) * _e1_series(t)
    return _scaled_e1_continued_fraction(t)


def laguerre_moment(t: float, rho: float, q: int = 1, cfg: Optional[QuadratureConfig] = None) -> float:
    """int_0^inf K_rho^q(1 + x/t) e^{-x} dx by Gauss-Laguerre quadrature"""
    _require_positive_t(t)
    _require_rho(rho)
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise DomainError(f"q must be an integer >= 1, got {q!r}", argument="q", value=q)
    return laguerre_integrate(lambda x: _k_rho(1.0 + x / t, rho) ** q, cfg)


def mu_rho(t: float, rho: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """mu_rho(t); closed form e^t E1(t) when rho = 0"""
    _require_positive_t(t)
    _require_rho(rho)
    if abs(rho) < RHO_ZERO_THRESHOLD:
        return scaled_exp_integral_e1(t)
    return laguerre_moment(t, rho, 1, cfg)


def mu_0(t: float) -> float:
    return mu_rho(t, 0.0)


def sigma_rho_sq(t: float, rho: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """Variance of K_rho(1 + E/t) for E standard exponential, in centred form"""
    cfg = cfg or QuadratureConfig()
    mean = mu_rho(t, rho, cfg)
    value = laguerre_integrate(lambda x: (_k_rho(1.0 + x / t, rho) - mean) ** 2, cfg)
    if not value > 0:
        raise NumericalError(
            f"sigma_rho^2 evaluated to {value!r}",
            details={"t": t, "rho": rho, "node_count": cfg.node_count}
        )
    return value


def mu0_riemann_form(t: float) -> float:
    """mu_0(t) as int_0^1 log(1 - log(x)/t) dx, by adaptive quadrature"""
    _require_positive_t(t)
    value, _ = integrate.quad(lambda x: math.log1p(-math.log(x) / t), 0.0, 1.0, epsabs=1e-13, limit=400)
    return float(value)
