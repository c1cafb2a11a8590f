import math

import numpy as np
import pytest

from lincond import quadrature
from lincond.densities import DensityModel, parse_density
from lincond.errors import ConfigError, DomainError

from conftest import random_family_models


class TestClosedForms:
    @pytest.mark.parametrize(
        "model,x,expected",
        [
            (DensityModel.exponential(1.0), 0.5, math.exp(-0.5)),
            (DensityModel.gamma(1.0, 1.0), 2.0, math.exp(-2.0)),
            (DensityModel.lognormal(0.0, 1.0), 1.0, 1.0 / math.sqrt(2 * math.pi)),
        ],
    )
    def test_pdf_values(self, model, x, expected):
        assert abs(model.pdf(x) - expected) <= 1e-14 * abs(expected)

    @pytest.mark.parametrize(
        "model,x,expected",
        [
            (DensityModel.exponential(1.0), 1.0, -math.exp(-1.0)),
            (DensityModel.gamma(2.0, 1.0), 1.0, 0.0),
            (DensityModel.weibull(2.0, 1.0), 1.0 / math.sqrt(2.0), 0.0),
        ],
    )
    def test_pdf_derivative_values(self, model, x, expected):
        assert abs(model.pdf_derivative(x) - expected) <= 1e-14

    @pytest.mark.parametrize(
        "model,x,expected",
        [
            (DensityModel.exponential(1.0), 4.0, 4.0),
            (DensityModel.gamma(3.0, 1.0), 2.0, 0.0),
            (DensityModel.lognormal(0.0, 1.0), 1.0, 1.0),
        ],
    )
    def test_lin_closed_values(self, model, x, expected):
        assert abs(model.lin_function_closed(x) - expected) <= 1e-14

    def test_domain_errors(self, family_examples):
        for model in family_examples:
            with pytest.raises(DomainError):
                model.pdf(0.0)
            with pytest.raises(DomainError):
                model.pdf_derivative(-1.0)
            with pytest.raises(DomainError):
                model.lin_function_closed(0.0)

    def test_array_evaluation_matches_scalars(self, family_examples):
        xs = np.geomspace(0.05, 20.0, 13)
        for model in family_examples:
            np.testing.assert_allclose(
                model.pdf(xs), [model.pdf(float(x)) for x in xs], rtol=1e-14
            )
            np.testing.assert_allclose(
                model.lin_function_closed(xs),
                [model.lin_function_closed(float(x)) for x in xs],
                rtol=1e-14,
            )


class TestFamilyInvariants:
    def test_lin_closed_is_minus_x_fprime_over_f(self):
        grid = np.geomspace(1e-2, 1e2, 25)
        for model in random_family_models(3):
            for x in grid:
                x = float(x)
                direct = -x * model.pdf_derivative(x) / model.pdf(x)
                closed = model.lin_function_closed(x)
                assert abs(direct - closed) <= 1e-10 * max(1.0, abs(closed))

    def test_lin_strictly_increasing(self):
        grid = np.geomspace(1e-2, 1e2, 25)
        for model in random_family_models(3):
            vals = model.lin_function_closed(grid)
            assert np.all(np.diff(vals) > 0.0)

    def test_lin_growth_heuristic(self):
        # growth of more than 10 across a 1e4-wide grid needs parameters
        # that vary fast enough at desk scale: L of lognormal(mu, sigma)
        # climbs only ln(1e4)/sigma^2 across any such grid
        rng = np.random.default_rng(12)
        grid = np.geomspace(1e-2, 1e2, 25)
        models = []
        for _ in range(3):
            models.append(DensityModel.exponential(rng.uniform(0.2, 4.0)))
            models.append(
                DensityModel.gamma(rng.uniform(0.5, 5.0), rng.uniform(0.2, 4.0))
            )
            models.append(
                DensityModel.weibull(rng.uniform(0.75, 1.3), rng.uniform(0.8, 1.5))
            )
            models.append(
                DensityModel.lognormal(rng.uniform(-1.0, 1.0), rng.uniform(0.4, 0.9))
            )
        for model in models:
            vals = model.lin_function_closed(grid)
            assert np.all(np.diff(vals) > 0.0)
            assert vals[-1] > vals[0] + 10.0

    def test_normalization(self, family_examples):
        for model in family_examples:
            res = quadrature.integrate_halfline(model.pdf)
            assert res.converged
            assert abs(res.value - 1.0) <= 1e-8

    def test_derivative_agrees_with_numeric(self):
        grid = np.geomspace(0.01, 100.0, 17)
        for model in random_family_models(2, seed=7):
            for x in grid:
                x = float(x)
                numeric = quadrature.differentiate(
                    model.pdf, x, scale_hint=0.4 * x
                )
                closed = model.pdf_derivative(x)
                scale = max(abs(closed), abs(model.pdf(x)) / x)
                assert abs(numeric - closed) <= 1e-6 * scale


class TestParsing:
    @pytest.mark.parametrize(
        "text,family,params",
        [
            ("exp:1", "exponential", (1.0,)),
            ("exponential:2.5", "exponential", (2.5,)),
            ("gamma:2,1", "gamma", (2.0, 1.0)),
            ("weibull:2,1", "weibull", (2.0, 1.0)),
            ("lognormal:0,1", "lognormal", (0.0, 1.0)),
            ("lognormal:-0.5,0.75", "lognormal", (-0.5, 0.75)),
        ],
    )
    def test_valid_specs(self, text, family, params):
        model = parse_density(text)
        assert model.family == family
        assert model.params == params

    @pytest.mark.parametrize(
        "text",
        [
            "gamma:0,-1",  # invalid parameters
            "gamma:2",  # wrong arity
            "gamma:2,1,3",
            "gauss:0,1",  # unknown family
            "exp",  # missing colon
            "exp:abc",  # non-numeric
            "weibull:2,",
            "exp:-3",
        ],
    )
    def test_invalid_specs(self, text):
        with pytest.raises(ConfigError):
            parse_density(text)

    def test_constructor_validation(self):
        with pytest.raises(DomainError):
            DensityModel.gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            DensityModel.weibull(1.0, -2.0)
        with pytest.raises(DomainError):
            DensityModel.lognormal(0.0, 0.0)

    def test_spec_string_roundtrip(self, family_examples):
        for model in family_examples:
            again = parse_density(model.spec_string())
            assert again == model
