"""Analytic density families on (0, inf) with closed-form Lin functions.

Every family here has an everywhere-positive, continuously differentiable
density whose Lin function L(x) = -x f'(x)/f(x) is strictly increasing
and unbounded, so each one is a valid factor for the product theorems.

Closed forms:

    exponential(rate)        L(x) = rate * x
    gamma(shape, rate)       L(x) = rate * x - (shape - 1)
    weibull(shape, scale)    L(x) = shape * (x/scale)^shape - (shape - 1)
    lognormal(mu, sigma)     L(x) = 1 + (ln x - mu) / sigma^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

_FAMILIES = {
    "exp": ("exponential", 1),
    "exponential": ("exponential", 1),
    "gamma": ("gamma", 2),
    "weibull": ("weibull", 2),
    "lognormal": ("lognormal", 2),
}

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _checked(x):
    """Validate positivity; returns (x, math-or-numpy module)."""
    if isinstance(x, np.ndarray):
        if np.any(x <= 0.0):
            raise DomainError("density evaluated at x <= 0")
        return x, np
    if not x > 0.0:
        raise DomainError(f"density evaluated at x <= 0 (x={x!r})")
    return x, math


@dataclass(frozen=True)
class DensityModel:
    """One member of the supported families; immutable once built.

    Use the classmethod constructors or :func:`parse_density`; the bare
    constructor validates but does not normalize the family tag.
    """

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in ("exponential", "gamma", "weibull", "lognormal"):
            raise DomainError(f"unknown family {self.family!r}")
        p = self.params
        if self.family == "exponential":
            if len(p) != 1 or not p[0] > 0.0:
                raise DomainError(f"exponential needs rate > 0, got {p}")
        elif self.family == "gamma":
            if len(p) != 2 or not (p[0] > 0.0 and p[1] > 0.0):
                raise DomainError(f"gamma needs shape > 0 and rate > 0, got {p}")
        elif self.family == "weibull":
            if len(p) != 2 or not (p[0] > 0.0 and p[1] > 0.0):
                raise DomainError(f"weibull needs shape > 0 and scale > 0, got {p}")
        else:
            if len(p) != 2 or not p[1] > 0.0:
                raise DomainError(f"lognormal needs sigma > 0, got {p}")

    @classmethod
    def exponential(cls, rate: float) -> "DensityModel":
        return cls("exponential", (float(rate),))

    @classmethod
    def gamma(cls, shape: float, rate: float) -> "DensityModel":
        return cls("gamma", (float(shape), float(rate)))

    @classmethod
    def weibull(cls, shape: float, scale: float) -> "DensityModel":
        return cls("weibull", (float(shape), float(scale)))

    @classmethod
    def lognormal(cls, mu: float, sigma: float) -> "DensityModel":
        return cls("lognormal", (float(mu), float(sigma)))

    # -- evaluation ------------------------------------------------------

    def log_pdf(self, x):
        """log f(x); the preferred form for product integrands, which
        would underflow if multiplied in linear space."""
        x, m = _checked(x)
        if self.family == "exponential":
            (lam,) = self.params
            return math.log(lam) - lam * x
        if self.family == "gamma":
            k, lam = self.params
            return (
                k * math.log(lam)
                - math.lgamma(k)
                + (k - 1.0) * m.log(x)
                - lam * x
            )
        if self.family == "weibull":
            k, s = self.params
            u = x / s
            return math.log(k / s) + (k - 1.0) * m.log(u) - u**k
        mu, sig = self.params
        t = (m.log(x) - mu) / sig
        return -0.5 * t * t - m.log(x) - math.log(sig) - _LOG_SQRT_2PI

    def pdf(self, x):
        lp = self.log_pdf(x)
        return np.exp(lp) if isinstance(lp, np.ndarray) else math.exp(lp)

    def pdf_log_derivative(self, x):
        """(log f)'(x) = f'(x)/f(x), in closed form."""
        x, m = _checked(x)
        if self.family == "exponential":
            (lam,) = self.params
            return -lam * (x * 0.0 + 1.0) if isinstance(x, np.ndarray) else -lam
        if self.family == "gamma":
            k, lam = self.params
            return (k - 1.0) / x - lam
        if self.family == "weibull":
            k, s = self.params
            return (k - 1.0) / x - (k / s) * (x / s) ** (k - 1.0)
        mu, sig = self.params
        return -(m.log(x) - mu) / (sig * sig * x) - 1.0 / x

    def pdf_derivative(self, x):
        return self.pdf(x) * self.pdf_log_derivative(x)

    def lin_function_closed(self, x):
        """Closed-form L(x) = -x f'(x)/f(x)."""
        x, m = _checked(x)
        if self.family == "exponential":
            (lam,) = self.params
            return lam * x
        if self.family == "gamma":
            k, lam = self.params
            return lam * x - (k - 1.0)
        if self.family == "weibull":
            k, s = self.params
            return k * (x / s) ** k - (k - 1.0)
        mu, sig = self.params
        return 1.0 + (m.log(x) - mu) / (sig * sig)

    def spec_string(self) -> str:
        return self.family + ":" + ",".join(repr(p) for p in self.params)

    def __str__(self) -> str:
        return self.spec_string()


def parse_density(text: str) -> DensityModel:
    """Parse a ``family:p1,p2`` spec string, e.g. ``gamma:2,1`` or ``exp:1``.

    Family names are lowercase; parameters are decimal literals.  Raises
    ConfigError both for bad grammar and for out-of-range parameters.
    """
    head, sep, tail = text.strip().partition(":")
    if not sep:
        raise ConfigError(f"density spec {text!r} is missing ':'")
    key = head.strip()
    if key not in _FAMILIES:
        raise ConfigError(
            f"unknown density family {key!r}; expected one of "
            f"exp, exponential, gamma, weibull, lognormal"
        )
    family, arity = _FAMILIES[key]
    parts = [p.strip() for p in tail.split(",")]
    if len(parts) != arity or any(not p for p in parts):
        raise ConfigError(
            f"family {key!r} takes {arity} comma-separated parameter(s), got {tail!r}"
        )
    try:
        params = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"non-numeric parameter in {text!r}") from exc
    try:
        return DensityModel(family, params)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
