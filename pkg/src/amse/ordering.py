"""
AMSE ordering of the three normalizations and admissibility of intermediate sequences

The ordering depends on the ultimate sign of b and on a finite-n surrogate of
    alpha = -4 lim b(log n) k / log k      (b ultimately negative)
    beta  =  2 lim x b(x)                  (b ultimately positive)
compared with theta.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ..core.errors import (
    DomainError,
    ErrorHandler,
    IndeterminateSignError,
    UndefinedRateError,
    ValidationError,
)
from ..distributions.base import WeibullTailModel
from ..distributions.bias import BiasFunction, bias_b
from ..models.tail_models import (
    AgreementReport,
    BiasSign,
    ConditionResult,
    EstimatorVariant,
    OrderingCase,
    OrderingVerdict,
    SequenceConditionReport,
)
from .calculator import amse

logger = logging.getLogger(__name__)

KRule = Callable[[int], int]

# |b| below this on the whole probe window counts as identically zero
ZERO_BIAS_TOL = 1e-12
PROBE_POINTS = 25
# A ratio decays when its last value is at most this fraction of its first
DECAY_FACTOR = 0.75

K_RULE_NAMES = ("log", "sqrt", "half", "sqrt-b", "inv-b")

V1, V2, V3 = EstimatorVariant.V1, EstimatorVariant.V2, EstimatorVariant.V3


def _clamp(k: float, n: int) -> int:
    return int(min(max(math.floor(k), 2), n - 1))


def resolve_k_rule(name: str, model: Optional[WeibullTailModel] = None) -> KRule:
    """Named intermediate sequence n -> k, clamped into [2, n - 1]"""
    key = name.strip().lower()
    if key == "log":
        return lambda n: _clamp(math.log(n), n)
    if key == "sqrt":
        return lambda n: _clamp(math.isqrt(n), n)
    if key == "half":
        return lambda n: _clamp(n // 2, n)
    if key not in ("sqrt-b", "inv-b"):
        raise ValidationError(
            f"Unknown k-rule '{name}' (expected one of {', '.join(K_RULE_NAMES)})", field="k_rule"
        )
    if model is None:
        raise ValidationError(f"k-rule '{key}' needs a model", field="k_rule")

    def bias_rule(n: int) -> int:
        b = bias_b(model, math.log(n))
        if b == 0.0:
            raise UndefinedRateError(
                f"k-rule '{key}' is undefined when b(log n) = 0",
                argument="model", value=model.name, details={"n": n}
            )
        if key == "sqrt-b":
            return _clamp(min((1.0 / b) ** 2, float(n)), n)
        if b > 0:
            raise DomainError(
                "k-rule 'inv-b' needs b(log n) < 0", argument="model", value=model.name, details={"n": n, "b": b}
            )
        return _clamp(min(-1.0 / b, float(n)), n)

    return bias_rule


def as_k_rule(rule: Union[str, KRule], model: Optional[WeibullTailModel] = None) -> KRule:
    return resolve_k_rule(rule, model) if isinstance(rule, str) else rule


def probe_bias_sign(model: WeibullTailModel, n: int) -> BiasSign:
    """Sign of b on [log n, 10 log n]; mixed signs are an error"""
    xs = np.geomspace(math.log(n), 10.0 * math.log(n), PROBE_POINTS)
    values = BiasFunction(model).evaluate(xs)

    if np.all(np.abs(values) <= ZERO_BIAS_TOL):
        sign = BiasSign.ZERO
    elif np.all(values >= -ZERO_BIAS_TOL):
        sign = BiasSign.ULTIMATELY_NONNEG
    elif np.all(values <= ZERO_BIAS_TOL):
        sign = BiasSign.ULTIMATELY_NONPOS
    else:
        raise IndeterminateSignError(
            f"b changes sign on [{xs[0]:.3g}, {xs[-1]:.3g}] for {model.display_name}",
            argument="model", value=model.name,
            details={"n": n, "min_b": float(values.min()), "max_b": float(values.max())}
        )

    if sign is not model.bias_sign:
        logger.warning(
            f"Probed bias sign {sign.value} for {model.name} at n={n} differs from declared {model.bias_sign.value}"
        )
    return sign


def classify_ordering(
    model: WeibullTailModel, n: int, k_rule: Union[str, KRule] = "log"
) -> OrderingVerdict:
    """Predicted AMSE ordering from finite-n surrogates of alpha or beta"""
    n = ErrorHandler.require_positive_int(n, "n", minimum=3)
    theta = model.theta
    sign = probe_bias_sign(model, n)
    b = bias_b(model, math.log(n))

    if sign is BiasSign.ZERO:
        return OrderingVerdict(
            model=model.name, case=OrderingCase.ZERO_BIAS, ranking=[V1, V2, V3], best_only=True,
            alpha_or_beta=0.0, theta=theta, probe_n=n,
        )

    if sign is BiasSign.ULTIMATELY_NONPOS:
        k = ErrorHandler.require_k_range(as_k_rule(k_rule, model)(n), n)
        alpha = -4.0 * b * k / math.log(k)
        logger.info(f"{model.name}: alpha surrogate {alpha:.4g} at n={n}, k={k} (theta={theta:g})")
        if alpha > theta:
            return OrderingVerdict(
                model=model.name, case=OrderingCase.NEG_BIAS_ALPHA_GT_THETA, ranking=[V2, V1, V3],
                best_only=False, alpha_or_beta=alpha, theta=theta, probe_n=n, k=k,
            )
        return OrderingVerdict(
            model=model.name, case=OrderingCase.NEG_BIAS_ALPHA_LT_THETA, ranking=[V1, V2, V3],
            best_only=True, alpha_or_beta=alpha, theta=theta, probe_n=n, k=k,
        )

    beta = 2.0 * math.log(n) * b
    logger.info(f"{model.name}: beta surrogate {beta:.4g} at n={n} (theta={theta:g})")
    if beta > theta:
        return OrderingVerdict(
            model=model.name, case=OrderingCase.POS_BIAS_BETA_GT_THETA, ranking=[V3, V1, V2],
            best_only=False, alpha_or_beta=beta, theta=theta, probe_n=n,
        )
    return OrderingVerdict(
        model=model.name, case=OrderingCase.POS_BIAS_BETA_LT_THETA, ranking=[V1, V2, V3],
        best_only=True, alpha_or_beta=beta, theta=theta, probe_n=n,
    )


def ordering_agreement(
    model: WeibullTailModel,
    n: int,
    k_values: Sequence[int],
    k_rule: Union[str, KRule] = "log",
    verdict: Optional[OrderingVerdict] = None,
) -> AgreementReport:
    """Share of k at which the pointwise AMSE values follow the predicted ordering"""
    verdict = verdict or classify_ordering(model, n, k_rule)
    disagreements: List[int] = []
    for k in k_values:
        values: Dict[EstimatorVariant, float] = {
            variant: amse(model, n, int(k), variant).total for variant in EstimatorVariant
        }
        if not verdict.holds_for(values):
            disagreements.append(int(k))

    share = 1.0 - len(disagreements) / len(k_values) if len(k_values) else 0.0
    if disagreements:
        logger.info(f"{model.name}: ordering fails at {len(disagreements)} of {len(k_values)} k values")
    return AgreementReport(
        model=model.name, case=verdict.case, share=share,
        k_values=[int(k) for k in k_values], disagreements=disagreements,
    )


def _decays(ns: np.ndarray, ratios: np.ndarray) -> bool:
    slope = np.polyfit(np.log(ns), ratios, 1)[0]
    return bool(ratios[-1] <= DECAY_FACTOR * ratios[0] and slope < 0)


def check_sequence_conditions(n_grid: Sequence[int], k_rule: Union[str, KRule]) -> SequenceConditionReport:
    """
    Evaluate along n_grid
        C.1  k/n -> 0
        C.2  log(k)/log(n) -> 0
        C.3  k^{1/2}/log(n/k) -> 0 (together with C.1)
    """
    ns = np.asarray([int(n) for n in n_grid], dtype=float)
    if ns.size < 2 or np.any(np.diff(ns) <= 0):
        raise ValidationError("n_grid must hold at least two strictly increasing sizes", field="n_grid")

    rule = as_k_rule(k_rule)
    ks = np.asarray([rule(int(n)) for n in ns], dtype=float)

    c1 = ks / ns
    c2 = np.log(ks) / np.log(ns)
    c3 = np.sqrt(ks) / np.log(ns / ks)

    c1_holds = _decays(ns, c1)
    conditions = [
        ConditionResult(
            name="C1", description="k/n -> 0",
            ratios=c1.tolist(), final_value=float(c1[-1]), holds=c1_holds,
        ),
        ConditionResult(
            name="C2", description="log(k)/log(n) -> 0",
            ratios=c2.tolist(), final_value=float(c2[-1]), holds=_decays(ns, c2),
        ),
        ConditionResult(
            name="C3", description="k^(1/2)/log(n/k) -> 0",
            ratios=c3.tolist(), final_value=float(c3[-1]), holds=c1_holds and _decays(ns, c3),
        ),
    ]
    return SequenceConditionReport(
        n_grid=[int(n) for n in ns], k_values=[int(k) for k in ks], conditions=conditions
    )


_CONDITION_FOR_VARIANT = {V1: "C1", V2: "C2", V3: "C3"}


def admissible_variants(report: SequenceConditionReport) -> List[EstimatorVariant]:
    """Variants whose consistency condition holds for the sequence"""
    return [
        variant for variant, name in _CONDITION_FOR_VARIANT.items() if report.condition(name).holds
    ]
