import numpy as np
import pytest

from lincond.densities import DensityModel
from lincond.quadrature import QuadratureSpec


@pytest.fixture(scope="session")
def exp1():
    return DensityModel.exponential(1.0)


@pytest.fixture(scope="session")
def family_examples():
    """One representative of each supported family."""
    return [
        DensityModel.exponential(1.0),
        DensityModel.gamma(2.0, 1.0),
        DensityModel.weibull(2.0, 1.0),
        DensityModel.lognormal(0.0, 1.0),
    ]


@pytest.fixture(scope="session")
def tight_spec():
    """For oracle-grade integrals (finite-difference cross-checks)."""
    return QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15)


def random_family_models(n_per_family: int, seed: int = 42):
    """Random admissible parameters, kept inside the range where the pdf
    stays a normal double across the whole [1e-2, 1e2] test grid."""
    rng = np.random.default_rng(seed)
    models = []
    for _ in range(n_per_family):
        models.append(DensityModel.exponential(rng.uniform(0.2, 4.0)))
        models.append(
            DensityModel.gamma(rng.uniform(0.5, 5.0), rng.uniform(0.2, 4.0))
        )
        models.append(
            DensityModel.weibull(rng.uniform(0.5, 1.3), rng.uniform(0.8, 2.0))
        )
        models.append(
            DensityModel.lognormal(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0))
        )
    return models
