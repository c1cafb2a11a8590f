import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lincond.errors import DomainError, NonFiniteEvaluation
from lincond.quadrature import (
    QuadratureSpec,
    differentiate,
    integrate_finite,
    integrate_halfline,
)

coeff = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


class TestIntegrateFinite:
    def test_constant(self):
        res = integrate_finite(lambda x: 1.0, 0.0, 1.0)
        assert abs(res.value - 1.0) <= 1e-12
        assert res.converged

    def test_linear(self):
        res = integrate_finite(lambda x: x, 0.0, 2.0)
        assert abs(res.value - 2.0) <= 1e-9

    def test_damped_oscillation_closed_form(self):
        # antiderivative of e^{-x} sin(bx) is -e^{-x}(sin bx + b cos bx)/(1+b^2)
        b = 50.0
        exact = (b - math.exp(-10.0) * (b * math.cos(500.0) + math.sin(500.0))) / (
            1.0 + b * b
        )
        res = integrate_finite(lambda x: math.exp(-x) * math.sin(b * x), 0.0, 10.0)
        assert res.converged
        assert abs(res.value - exact) <= 1e-8 * abs(exact)

    def test_reversed_bounds_rejected(self):
        with pytest.raises(DomainError):
            integrate_finite(lambda x: x, 1.0, 0.0)
        with pytest.raises(DomainError):
            integrate_finite(lambda x: x, 1.0, 1.0)

    def test_non_finite_integrand(self):
        with pytest.raises(NonFiniteEvaluation):
            integrate_finite(lambda x: float("nan") if x > 0.5 else 1.0, 0.0, 1.0)

    def test_budget_exhaustion_reports_not_converged(self):
        spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=2)
        res = integrate_finite(lambda x: math.sin(40.0 * x) ** 2, 0.0, 10.0, spec)
        assert not res.converged
        assert res.error_estimate > 0.0

    def test_error_estimate_within_tolerance_when_converged(self):
        spec = QuadratureSpec()
        res = integrate_finite(lambda x: math.exp(-x * x), -3.0, 5.0, spec)
        assert res.converged
        assert res.error_estimate <= max(spec.abs_tol, spec.rel_tol * abs(res.value))

    def test_breakpoints_resolve_kinks(self):
        f = lambda x: abs(x - 0.3125)
        whole = integrate_finite(f, 0.0, 1.0, breakpoints=[0.3125])
        exact = 0.3125**2 / 2 + (1 - 0.3125) ** 2 / 2
        assert abs(whole.value - exact) <= 1e-12

    @given(c1=st.tuples(coeff, coeff, coeff), c2=st.tuples(coeff, coeff, coeff),
           a=coeff, b=coeff)
    @settings(max_examples=60, deadline=None)
    def test_linearity_on_polynomials(self, c1, c2, a, b):
        f = lambda x: c1[0] + c1[1] * x + c1[2] * x * x
        g = lambda x: c2[0] + c2[1] * x + c2[2] * x * x
        combo = integrate_finite(lambda x: a * f(x) + b * g(x), 0.0, 1.0)
        parts = a * integrate_finite(f, 0.0, 1.0).value
        parts += b * integrate_finite(g, 0.0, 1.0).value
        assert abs(combo.value - parts) <= 1e-11


class TestIntegrateHalfline:
    def test_unit_exponential_mass(self):
        res = integrate_halfline(lambda t: math.exp(-t))
        assert res.converged
        assert abs(res.value - 1.0) <= 1e-9

    def test_gamma_two_mass(self):
        # Gamma(2) = 1! = 1
        res = integrate_halfline(lambda t: t * math.exp(-t))
        assert abs(res.value - 1.0) <= 1e-9

    def test_lognormal_mass(self):
        c = 1.0 / math.sqrt(2.0 * math.pi)
        res = integrate_halfline(
            lambda t: c * math.exp(-0.5 * math.log(t) ** 2) / t
        )
        assert abs(res.value - 1.0) <= 1e-8

    def test_log_center_reaches_displaced_mass(self):
        # mass near t = e^20, far outside the default window
        mu = 20.0
        c = 1.0 / math.sqrt(2.0 * math.pi)
        res = integrate_halfline(
            lambda t: c * math.exp(-0.5 * (math.log(t) - mu) ** 2) / t,
            log_center=mu,
        )
        assert abs(res.value - 1.0) <= 1e-8

    def test_breakpoints_forwarded(self):
        # integrand with a kink at t = 2:
        # int e^-t (1 + |t-2|) dt = 1 + (1 + e^-2) + e^-2 = 2 + 2 e^-2
        res = integrate_halfline(
            lambda t: math.exp(-t) * (1.0 + abs(t - 2.0)), breakpoints=[2.0]
        )
        exact = 2.0 + 2.0 * math.exp(-2.0)
        assert abs(res.value - exact) <= 1e-9


class TestDifferentiate:
    def test_quadratic(self):
        assert abs(differentiate(lambda x: x * x, 3.0) - 6.0) <= 1e-7

    def test_exponential(self):
        d = differentiate(lambda x: math.exp(-x), 1.0)
        assert abs(d + math.exp(-1.0)) <= 1e-7

    def test_fast_oscillation_with_scale_hint(self):
        d = differentiate(lambda x: math.sin(100.0 * x), 0.0,
                          scale_hint=math.pi / 2000.0)
        assert abs(d - 100.0) <= 1e-3 * 100.0

    def test_scale_hint_validated(self):
        with pytest.raises(DomainError):
            differentiate(lambda x: x, 1.0, scale_hint=0.0)

    def test_non_finite(self):
        with pytest.raises(NonFiniteEvaluation):
            differentiate(lambda x: float("inf"), 1.0)

    @given(c=st.tuples(coeff, coeff, coeff, coeff),
           x=st.floats(min_value=-10.0, max_value=10.0))
    @settings(max_examples=150, deadline=None)
    def test_cubics_exact(self, c, x):
        # cubic in x/10 keeps values O(1): the scheme is truncation-free on
        # cubics, so only roundoff (proportional to |f|) remains
        f = lambda t: ((c[0] * (t / 10) + c[1]) * (t / 10) + c[2]) * (t / 10) + c[3]
        true = (3 * c[0] * (x / 10) ** 2 + 2 * c[1] * (x / 10) + c[2]) / 10.0
        assert abs(differentiate(f, x) - true) <= 1e-9
