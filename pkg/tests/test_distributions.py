"""
Unit tests for the tail models, sampling and the bias function
"""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from src.core.config import DEFAULT_SEED
from src.core.errors import ConfigurationError, DomainError, SaturationError
from src.distributions import catalog as catalog_module
from src.distributions.bias import BiasFunction, bias_b
from src.distributions.catalog import catalog, parse_model_spec, register_family, registered_families
from src.distributions.models import AbsNormalModel, GammaModel, WeibullModel
from src.distributions.sampling import cdf, extreme_quantile, logpdf, quantile, sample, upper_quantile
from src.distributions.streams import open_uniforms, replication_generator
from src.models.tail_models import BiasSign


class TestQuantiles:
    """Test cases for F^{-1}"""

    def setup_method(self):
        """Set up test fixtures"""
        self.models = [
            GammaModel(shape=0.5),
            GammaModel(shape=1.5),
            AbsNormalModel(),
            AbsNormalModel(mu=1.0, sigma=2.0),
            WeibullModel(shape=2.5, scale=2.5),
            WeibullModel(shape=0.4, scale=0.4),
        ]
        self.grid = np.linspace(0.01, 0.99, 99)

    def test_weibull_closed_form(self):
        """Test W(2.5,2.5) at u = 1 - 1/e"""
        assert quantile(WeibullModel(shape=2.5, scale=2.5), 1.0 - math.exp(-1.0)) == pytest.approx(2.5, rel=1e-14)

    def test_gamma_median(self):
        """Test the Gamma(1.5,1) median against scipy"""
        value = quantile(GammaModel(shape=1.5), 0.5)
        assert value == pytest.approx(stats.gamma.ppf(0.5, 1.5), rel=1e-12)
        assert value == pytest.approx(stats.chi2.ppf(0.5, 3) / 2.0, rel=1e-12)

    def test_absnormal_quantile(self):
        """Test |N(0,1)| at u = 0.95 is the 0.975 normal quantile"""
        assert quantile(AbsNormalModel(), 0.95) == pytest.approx(1.959964, abs=1e-6)

    def test_round_trip_through_cdf(self):
        """Test F(F^{-1}(u)) = u on a u-grid"""
        for model in self.models:
            for u in self.grid:
                assert cdf(model, quantile(model, u)) == pytest.approx(u, abs=1e-10)

    def test_cdf_matches_integrated_density(self):
        """Test the cdf against the integral of exp(logpdf)"""
        for model in self.models:
            x = quantile(model, 0.7)
            integral, _ = integrate.quad(lambda y: math.exp(logpdf(model, y)), 0.0, x, epsabs=1e-12, limit=200)
            assert integral == pytest.approx(0.7, abs=1e-7)

    def test_strictly_increasing(self):
        """Test quantiles increase along a 100-point grid"""
        grid = np.linspace(0.005, 0.995, 100)
        for model in self.models:
            values = model.quantile_array(grid)
            assert np.all(np.diff(values) > 0)

    def test_density_positive(self):
        """Test the density is positive on the support"""
        for model in self.models:
            values = model.logpdf_array(model.quantile_array(self.grid))
            assert np.all(np.isfinite(values))

    def test_upper_quantile_matches_quantile(self):
        """Test F^{-1}(1 - q) agrees with F^{-1}(u) where both resolve"""
        for model in self.models:
            for q in (0.3, 0.05, 1e-3):
                assert upper_quantile(model, q) == pytest.approx(quantile(model, 1.0 - q), rel=1e-9)

    def test_domain_errors(self):
        """Test u outside (0, 1)"""
        for u in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DomainError):
                quantile(GammaModel(shape=1.5), u)


class TestExtremeQuantile:
    """Test cases for the log-scale tail inverse"""

    def test_weibull_closed_form(self):
        """Test x_p = log(1/p) for W(1,1)"""
        assert extreme_quantile(WeibullModel(shape=1.0), 1e-4) == pytest.approx(math.log(1e4), rel=1e-14)

    def test_deep_tail(self):
        """Test tail probabilities far below machine epsilon"""
        assert extreme_quantile(AbsNormalModel(), 1e-200) == pytest.approx(stats.norm.isf(0.5e-200), rel=1e-10)
        assert extreme_quantile(GammaModel(shape=1.5), 1e-200) == pytest.approx(
            stats.gamma.isf(1e-200, 1.5), rel=1e-10
        )

    def test_saturation_below_floor(self):
        """Test the generic path refuses e^{-750}"""
        with pytest.raises(SaturationError):
            GammaModel(shape=1.5).upper_quantile_from_log(-750.0)


class TestSampling:
    """Test cases for seeded sampling"""

    def test_deterministic(self):
        """Test the same (model, n, seed) gives identical samples"""
        model = GammaModel(shape=0.5)
        first = sample(model, 200, seed=123)
        second = sample(model, 200, seed=123)
        assert first.values == second.values
        assert sample(model, 200, seed=124).values != first.values

    def test_sorted(self):
        """Test the output is in ascending order"""
        values = sample(AbsNormalModel(), 1000, seed=7).array
        assert np.all(np.diff(values) >= 0)

    def test_exponential_mean(self):
        """Test the W(1,1) sample mean is within 3/sqrt(n) of 1"""
        n = 10 ** 5
        values = sample(WeibullModel(shape=1.0), n, seed=DEFAULT_SEED).array
        assert abs(values.mean() - 1.0) < 3.0 / math.sqrt(n)

    def test_replication_streams_differ(self):
        """Test replication indices give different streams"""
        a = open_uniforms(replication_generator(5, 0), 10)
        b = open_uniforms(replication_generator(5, 1), 10)
        assert not np.array_equal(a, b)

    def test_uniforms_stay_open(self):
        """Test uniforms never hit 0 or 1"""
        u = open_uniforms(replication_generator(0), 100000)
        assert u.min() > 0.0 and u.max() < 1.0

    def test_minimum_size(self):
        """Test n < 3 is rejected"""
        with pytest.raises(DomainError):
            sample(WeibullModel(shape=1.0), 2, seed=1)


class TestBiasFunction:
    """Test cases for b(x)"""

    def test_weibull_is_zero(self):
        """Test b vanishes identically for Weibull models"""
        for model in (WeibullModel(shape=2.5, scale=2.5), WeibullModel(shape=0.4, scale=0.4)):
            assert bias_b(model, 7.0) == 0.0
            assert np.all(BiasFunction(model).evaluate([0.5, 20.0, 500.0]) == 0.0)

    def test_absnormal_expansion(self):
        """Test b(50) is near log(50)/200 for |N(0,1)|"""
        assert bias_b(AbsNormalModel(), 50.0) == pytest.approx(math.log(50.0) / 200.0, rel=0.2)

    def test_absnormal_limit(self):
        """Test x b(x) / log(x) -> 1/4"""
        x = 1000.0
        assert x * bias_b(AbsNormalModel(), x) / math.log(x) == pytest.approx(0.25, rel=0.1)

    def test_gamma_against_scipy(self):
        """Test b(50) for Gamma(1.5,1) through scipy's tail inverse"""
        x = 50.0
        y = stats.gamma.isf(math.exp(-x), 1.5)
        expected = x * math.exp(-x) / (y * stats.gamma.pdf(y, 1.5)) - 1.0
        value = bias_b(GammaModel(shape=1.5), x)
        assert value == pytest.approx(expected, rel=1e-8)
        assert value < 0
        assert value == pytest.approx(-0.5 * math.log(x) / x, rel=0.25)

    def test_small_x_uses_direct_quantile(self):
        """Test b agrees across the switch between quantile paths"""
        model = GammaModel(shape=1.5)
        below = bias_b(model, math.log(2.0) * (1 - 1e-9))
        above = bias_b(model, math.log(2.0) * (1 + 1e-9))
        assert below == pytest.approx(above, abs=1e-6)

    def test_sign_matches_declared(self):
        """Test sign of b on [20, 200]"""
        xs = np.linspace(20.0, 200.0, 19)
        for model in catalog():
            values = BiasFunction(model).evaluate(xs)
            if model.bias_sign is BiasSign.ULTIMATELY_NONNEG:
                assert np.all(values >= 0)
            elif model.bias_sign is BiasSign.ULTIMATELY_NONPOS:
                assert np.all(values <= 0)
            else:
                assert np.all(values == 0)

    def test_gamma_saturates(self):
        """Test x beyond the resolvable tail"""
        with pytest.raises(SaturationError):
            bias_b(GammaModel(shape=0.5), 800.0)

    def test_domain_error(self):
        """Test x <= 0"""
        with pytest.raises(DomainError):
            bias_b(AbsNormalModel(), 0.0)


class TestCatalog:
    """Test cases for the model catalog and spec parsing"""

    def test_five_models(self):
        """Test the reference models and their parameters"""
        models = {model.name: model for model in catalog()}
        assert list(models) == ["gamma_0.5_1", "gamma_1.5_1", "absnormal_0_1", "weibull_2.5_2.5", "weibull_0.4_0.4"]
        assert models["absnormal_0_1"].theta == 0.5
        assert models["gamma_0.5_1"].theta == 1.0
        assert models["gamma_0.5_1"].bias_sign is BiasSign.ULTIMATELY_NONNEG
        assert models["gamma_1.5_1"].bias_sign is BiasSign.ULTIMATELY_NONPOS
        assert models["weibull_0.4_0.4"].theta == pytest.approx(2.5)
        assert models["weibull_2.5_2.5"].rho == -math.inf

    def test_display_names(self):
        """Test conventional notation"""
        names = [model.display_name for model in catalog()]
        assert names == ["Γ(0.5,1)", "Γ(1.5,1)", "|N(0,1)|", "W(2.5,2.5)", "W(0.4,0.4)"]

    def test_extra_models(self):
        """Test the catalog is extensible"""
        models = catalog([GammaModel(shape=3.0)])
        assert len(models) == 6
        assert models[-1].spec == "gamma:3,1"

    def test_parse_model_spec(self):
        """Test family:params strings"""
        assert parse_model_spec("gamma:1.5,1") == GammaModel(shape=1.5, rate=1.0)
        assert parse_model_spec("absnormal:0,1") == AbsNormalModel()
        assert parse_model_spec("absnormal") == AbsNormalModel()
        assert parse_model_spec(" Weibull:2.5,2.5 ").theta == pytest.approx(0.4)

    def test_parse_errors(self):
        """Test unknown families, bad numbers and arity"""
        with pytest.raises(ConfigurationError):
            parse_model_spec("pareto:1")
        with pytest.raises(ConfigurationError):
            parse_model_spec("gamma:abc")
        with pytest.raises(ConfigurationError):
            parse_model_spec("gamma:1,2,3")
        with pytest.raises(ConfigurationError):
            parse_model_spec("gamma")

    def test_invalid_parameters(self):
        """Test non-positive shape is a domain error"""
        with pytest.raises(DomainError):
            parse_model_spec("gamma:-1,1")

    def test_register_family(self):
        """Test a user-defined family becomes parseable"""
        register_family("exponential", lambda rate=1.0: GammaModel(shape=1.0, rate=rate))
        try:
            assert "exponential" in registered_families()
            model = parse_model_spec("exponential:2")
            assert model.bias_sign is BiasSign.ZERO
        finally:
            catalog_module._FAMILIES.pop("exponential", None)
