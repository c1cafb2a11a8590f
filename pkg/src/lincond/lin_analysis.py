"""Lin's function of arbitrary density callables and grid-based condition checks.

Lin's function of a density f is L(x) = -x f'(x)/f(x).  The condition of
interest is that L is monotone increasing beyond some x0 with
L(x) -> +inf; no finite computation can decide the limit, so the report
carries an explicit divergence *heuristic* (growth of more than 10
across the grid on top of monotonicity), never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .densities import DensityModel
from .errors import DomainError, NonFiniteEvaluation, ZeroDensity

# below this the density is treated as vanished and L is undefined
_TINY_DENSITY = 1e-300

# slack for "monotone": consecutive differences may dip this far below 0
_MONOTONE_SLACK = 1e-9

# heuristic growth (in absolute L units) required to flag divergence
_DIVERGENCE_GROWTH = 10.0


@dataclass(frozen=True)
class LinConditionReport:
    """Grid evaluation of a Lin function with monotonicity verdicts."""

    grid: np.ndarray
    lin_values: np.ndarray
    monotone: bool
    monotone_violations: list = field(default_factory=list)
    divergence_heuristic: bool = False
    x0: float = 0.0

    def summary_line(self) -> str:
        return (
            f"monotone={str(self.monotone).lower()} "
            f"divergence_heuristic={str(self.divergence_heuristic).lower()}"
        )

    def write_csv(self, fh) -> None:
        fh.write("x,lin_value\n")
        for x, lv in zip(self.grid, self.lin_values):
            fh.write(f"{x:.17g},{lv:.17g}\n")


def report_from_values(grid, lin_values, x0: float) -> LinConditionReport:
    """Assemble the report verdicts from precomputed Lin values."""
    grid = np.asarray(grid, dtype=float)
    lin_values = np.asarray(lin_values, dtype=float)
    if grid.ndim != 1 or grid.shape != lin_values.shape:
        raise DomainError("grid and lin_values must be 1-d and congruent")
    if not np.all(np.diff(grid) > 0.0):
        raise DomainError("grid must be strictly ascending")

    violations = []
    for i in range(len(grid) - 1):
        diff = lin_values[i + 1] - lin_values[i]
        scale = max(1.0, abs(lin_values[i]), abs(lin_values[i + 1]))
        if diff < -_MONOTONE_SLACK * scale:
            violations.append((i, float(diff)))
    monotone = not violations
    diverges = monotone and (
        lin_values[-1] > lin_values[0] + _DIVERGENCE_GROWTH
    )
    return LinConditionReport(
        grid=grid,
        lin_values=lin_values,
        monotone=monotone,
        monotone_violations=violations,
        divergence_heuristic=bool(diverges),
        x0=float(x0),
    )


def lin_function(pdf, x: float, scale_hint: float | None = None) -> float:
    """L(x) = -x f'(x)/f(x) with f' from Richardson central differences.

    The differentiation step never exceeds x/2 so that the stencil stays
    inside (0, inf).
    """
    if not x > 0.0:
        raise DomainError(f"lin_function needs x > 0, got {x}")
    fx = pdf(x)
    if not math.isfinite(fx):
        raise NonFiniteEvaluation(f"pdf({x}) = {fx!r}")
    if fx <= _TINY_DENSITY:
        raise ZeroDensity(f"pdf({x}) = {fx!r} is numerically zero")
    hint = 0.5 * x if scale_hint is None else min(scale_hint, 0.5 * x)
    fprime = quadrature.differentiate(pdf, x, scale_hint=hint)
    return -x * fprime / fx


def check_lin_condition(
    pdf,
    x0: float,
    x_max: float,
    points: int,
    scale_hint: float | None = None,
) -> LinConditionReport:
    """Evaluate L on a geometric grid in [x0, x_max] and judge monotonicity."""
    if not (0.0 < x0 < x_max):
        raise DomainError(f"need 0 < x0 < x_max, got ({x0}, {x_max})")
    if points < 16:
        raise DomainError(f"need at least 16 grid points, got {points}")
    grid = np.geomspace(x0, x_max, points)
    values = np.array([lin_function(pdf, x, scale_hint) for x in grid])
    return report_from_values(grid, values, x0)


def tau_ratio(d: DensityModel, a: float, b: float, x: float) -> float:
    """tau(x) = f(a x)/f(b x) for 0 < a < b; increasing iff L_f increases."""
    if not (0.0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    if not x > 0.0:
        raise DomainError(f"need x > 0, got {x}")
    return math.exp(d.log_pdf(a * x) - d.log_pdf(b * x))


def tau_derivative_identity_check(
    d: DensityModel, a: float, b: float, x: float
) -> float:
    """Residual of tau'(x) = f(ax)/(x f(bx)) * [L(bx) - L(ax)].

    Returns |numeric tau' - closed form| / max(1, |closed form|); values
    above ~1e-5 indicate an inconsistency between pdf and lin closed forms.
    """
    if not (0.0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    if not x > 0.0:
        raise DomainError(f"need x > 0, got {x}")
    rhs = (
        tau_ratio(d, a, b, x)
        / x
        * (d.lin_function_closed(b * x) - d.lin_function_closed(a * x))
    )
    numeric = quadrature.differentiate(
        lambda t: tau_ratio(d, a, b, t), x, scale_hint=0.25 * x
    )
    return abs(numeric - rhs) / max(1.0, abs(rhs))
