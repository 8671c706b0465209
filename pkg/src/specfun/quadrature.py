"""
Gauss-Laguerre integration of e^{-x}-weighted integrals over [0, inf)
"""

import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy import integrate

from ..core.config import QuadratureConfig
from ..core.errors import NumericalError

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=16)
def laguerre_rule(node_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the node_count-point rule (read-only arrays)"""
    nodes, weights = laggauss(node_count)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _apply_rule(func: Integrand, node_count: int) -> float:
    nodes, weights = laguerre_rule(node_count)
    return float(np.dot(weights, func(nodes)))


def laguerre_integrate(func: Integrand, cfg: Optional[QuadratureConfig] = None) -> float:
    """
    Integrate func(x) e^{-x} over [0, inf).

    func must accept and return numpy arrays. The rule with cfg.node_count nodes is
    checked against the doubled rule; when they differ by more than cfg.abs_tol the
    integral is recomputed adaptively.
    """
    cfg = cfg or QuadratureConfig()

    coarse = _apply_rule(func, cfg.node_count)
    fine = _apply_rule(func, 2 * cfg.node_count)
    if np.isfinite(fine) and abs(fine - coarse) <= cfg.abs_tol:
        return fine

    logger.debug(
        f"Gauss-Laguerre self-check failed ({abs(fine - coarse):.3e} > {cfg.abs_tol:.1e}), "
        f"falling back to adaptive quadrature"
    )
    value, error = integrate.quad(
        lambda x: float(func(np.array([x]))[0]) * np.exp(-x),
        0.0, np.inf, epsabs=cfg.abs_tol, epsrel=1e-12, limit=400
    )
    if not np.isfinite(value):
        raise NumericalError(
            "Adaptive quadrature returned a non-finite value",
            details={"node_count": cfg.node_count, "estimate": value}
        )
    if error > 100 * cfg.abs_tol:
        logger.warning(f"Adaptive quadrature error estimate {error:.2e} exceeds tolerance {cfg.abs_tol:.1e}")
    return float(value)
