"""
Unit tests for AMSE curves, the ordering classifier and sequence conditions
"""

import math

import pytest

from src.amse.calculator import amse, amse_curve, amse_curves
from src.amse.ordering import (
    admissible_variants,
    check_sequence_conditions,
    classify_ordering,
    ordering_agreement,
    probe_bias_sign,
    resolve_k_rule,
)
from src.core.errors import DomainError, IndeterminateSignError, UndefinedRateError, ValidationError
from src.distributions.bias import bias_b
from src.distributions.catalog import catalog, parse_model_spec
from src.distributions.models import AbsNormalModel, GammaModel, WeibullModel
from src.estimators.weibull_tail import a_n_exact
from src.models.tail_models import BiasSign, EstimatorVariant, OrderingCase

V1, V2, V3 = EstimatorVariant.V1, EstimatorVariant.V2, EstimatorVariant.V3

CONDITION_GRID = [10 ** e for e in range(2, 10)]


class OscillatingBiasModel(WeibullModel):
    """Weibull sampling with a bias that keeps changing sign"""

    def bias(self, x: float) -> float:
        return math.sin(x) / x


class TestAMSE:
    """Test cases for the AMSE formula"""

    def test_weibull_v1_is_variance_only(self):
        """Test AMSE = theta^2/k exactly when a_n = 0 and b = 0"""
        model = WeibullModel(shape=2.5, scale=2.5)
        for k in (2, 50, 150):
            point = amse(model, 500, k, V1)
            assert point.bias_sq == 0.0
            assert point.total == pytest.approx(model.theta ** 2 / k, rel=1e-15)

    def test_composition(self):
        """Test bias_sq composes a_n and b at (500, 50)"""
        model = AbsNormalModel()
        point = amse(model, 500, 50, V3)
        expected = (0.5 * a_n_exact(V3, 500, 50) + bias_b(model, math.log(10.0))) ** 2
        assert point.bias_sq == pytest.approx(expected, rel=1e-15)
        assert point.variance == 0.25 / 50
        assert point.total == point.bias_sq + point.variance

    def test_difference_identity(self):
        """Test AMSE(V2) - AMSE(V1) = theta a_2 (theta a_2 + 2 b)"""
        model = GammaModel(shape=1.5)
        n, k = 500, 40
        theta = model.theta
        a2 = a_n_exact(V2, n, k)
        b = bias_b(model, math.log(n / k))
        difference = amse(model, n, k, V2).total - amse(model, n, k, V1).total
        assert difference == pytest.approx(theta * a2 * (theta * a2 + 2.0 * b), rel=1e-9, abs=1e-15)

    def test_curve(self):
        """Test a curve over k = 2..150 has 149 points"""
        curve = amse_curve(GammaModel(shape=0.5), 500, range(2, 151), V2)
        assert len(curve.points) == 149
        assert curve.estimator == "amse"
        assert curve.label == "gamma_0.5_1 V2 amse"
        assert list(curve.ks) == list(range(2, 151))

    def test_curves_per_variant(self):
        """Test one curve per requested variant, in order"""
        curves = amse_curves(AbsNormalModel(), 500, range(2, 20), [V3, V1])
        assert [curve.variant for curve in curves] == [V3, V1]

    def test_k_out_of_range(self):
        """Test k >= n"""
        with pytest.raises(DomainError):
            amse(AbsNormalModel(), 100, 100, V1)


class TestOrdering:
    """Test cases for the ordering classifier"""

    def test_positive_bias_models(self):
        """Test |N(0,1)| and Gamma(0.5,1) predict V3 < V1 < V2"""
        for spec in ("absnormal:0,1", "gamma:0.5,1"):
            verdict = classify_ordering(parse_model_spec(spec), 500)
            assert verdict.case is OrderingCase.POS_BIAS_BETA_GT_THETA
            assert verdict.predicted_order == "V3 < V1 < V2"
            assert verdict.alpha_or_beta > verdict.theta

    def test_positive_bias_agreement(self):
        """Test the pointwise AMSE ordering on k = 10..150"""
        for model in (AbsNormalModel(), GammaModel(shape=0.5)):
            report = ordering_agreement(model, 500, list(range(10, 151)))
            assert report.share >= 0.9

    def test_zero_bias_models(self):
        """Test Weibull models predict V1 best"""
        for model in (WeibullModel(shape=2.5, scale=2.5), WeibullModel(shape=0.4, scale=0.4)):
            verdict = classify_ordering(model, 500)
            assert verdict.case is OrderingCase.ZERO_BIAS
            assert verdict.predicted_order == "V1 < min(V2, V3)"
            for k in range(2, 151):
                first = amse(model, 500, k, V1).total
                assert first <= amse(model, 500, k, V2).total
                assert first <= amse(model, 500, k, V3).total

    def test_catalog_agreement(self):
        """Test every catalog model follows its predicted ordering on k = 10..150"""
        for model in catalog():
            report = ordering_agreement(model, 500, list(range(10, 151)))
            assert report.share >= 0.8, (model.name, report.disagreements)

    def test_negative_bias_alpha_case(self):
        """Test Gamma(1.5,1) with the sqrt-b rule predicts V2 < V1 < V3"""
        model = GammaModel(shape=1.5)
        verdict = classify_ordering(model, 500, resolve_k_rule("sqrt-b", model))
        assert verdict.case is OrderingCase.NEG_BIAS_ALPHA_GT_THETA
        assert verdict.ranking == [V2, V1, V3]
        assert verdict.predicted_order == "V2 < V1 < V3"
        assert verdict.k is not None
        expected = -4.0 * bias_b(model, math.log(500)) * verdict.k / math.log(verdict.k)
        assert verdict.alpha_or_beta == pytest.approx(expected)
        assert verdict.alpha_or_beta > verdict.theta

    def test_probe_sign(self):
        """Test the probed sign agrees with the declared sign for the catalog"""
        assert probe_bias_sign(AbsNormalModel(), 500) is BiasSign.ULTIMATELY_NONNEG
        assert probe_bias_sign(GammaModel(shape=1.5), 500) is BiasSign.ULTIMATELY_NONPOS
        assert probe_bias_sign(WeibullModel(shape=2.5, scale=2.5), 500) is BiasSign.ZERO

    def test_indeterminate_sign(self):
        """Test a sign-changing bias cannot be classified"""
        with pytest.raises(IndeterminateSignError):
            classify_ordering(OscillatingBiasModel(shape=1.0), 500)

    def test_holds_for(self):
        """Test strict and best-only orderings"""
        verdict = classify_ordering(AbsNormalModel(), 500)
        assert verdict.holds_for({V3: 1.0, V1: 2.0, V2: 3.0})
        assert not verdict.holds_for({V3: 1.0, V1: 3.0, V2: 2.0})
        zero = classify_ordering(WeibullModel(shape=1.0), 500)
        assert zero.holds_for({V1: 1.0, V2: 3.0, V3: 2.0})
        assert not zero.holds_for({V1: 2.0, V2: 3.0, V3: 2.0})

    def test_report(self):
        """Test the JSON view carries the predicted order"""
        report = classify_ordering(AbsNormalModel(), 500).to_report()
        assert report["predicted_order"] == "V3 < V1 < V2"
        assert report["case"] == "pos_bias_beta_gt_theta"
        assert report["ranking"] == ["V3", "V1", "V2"]


class TestKRules:
    """Test cases for intermediate sequence rules"""

    def test_named_rules(self):
        """Test log, sqrt and half"""
        assert resolve_k_rule("log")(500) == 6
        assert resolve_k_rule("sqrt")(500) == 22
        assert resolve_k_rule("half")(500) == 250
        assert resolve_k_rule("log")(3) == 2

    def test_bias_rules(self):
        """Test sqrt-b and inv-b use b(log n)"""
        model = GammaModel(shape=1.5)
        b = bias_b(model, math.log(500))
        assert resolve_k_rule("sqrt-b", model)(500) == math.floor(1.0 / b ** 2)
        assert resolve_k_rule("inv-b", model)(500) == math.floor(-1.0 / b)

    def test_rule_errors(self):
        """Test unknown rules and rules without a usable bias"""
        with pytest.raises(ValidationError):
            resolve_k_rule("cubic")
        with pytest.raises(ValidationError):
            resolve_k_rule("sqrt-b")
        with pytest.raises(UndefinedRateError):
            resolve_k_rule("sqrt-b", WeibullModel(shape=2.0))(500)
        with pytest.raises(DomainError):
            resolve_k_rule("inv-b", AbsNormalModel())(500)


class TestSequenceConditions:
    """Test cases for the consistency conditions on k_n"""

    def test_log_rule_is_admissible_for_all(self):
        """Test k = log n satisfies every condition"""
        report = check_sequence_conditions(CONDITION_GRID, "log")
        assert all(condition.holds for condition in report.conditions)
        assert admissible_variants(report) == [V1, V2, V3]
        assert report.k_values[0] == 4

    def test_sqrt_rule(self):
        """Test k = sqrt(n) only satisfies k/n -> 0"""
        report = check_sequence_conditions(CONDITION_GRID, "sqrt")
        assert report.condition("C1").holds
        assert not report.condition("C2").holds
        assert not report.condition("C3").holds
        assert admissible_variants(report) == [V1]

    def test_half_rule(self):
        """Test k = n/2 satisfies nothing"""
        report = check_sequence_conditions(CONDITION_GRID, "half")
        assert admissible_variants(report) == []

    def test_custom_callable(self):
        """Test a plain callable works as a rule"""
        report = check_sequence_conditions(CONDITION_GRID, lambda n: 10)
        assert admissible_variants(report) == [V1, V2, V3]

    def test_grid_validation(self):
        """Test the grid must grow"""
        with pytest.raises(ValidationError):
            check_sequence_conditions([100], "log")
        with pytest.raises(ValidationError):
            check_sequence_conditions([1000, 100], "log")
