import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stringmass.model import ModelParams, calibrate
from stringmass.mufunc import GridSpec
from stringmass.spectrum import build_spectrum


@pytest.fixture(scope="session")
def resonant_params():
    return ModelParams(1.0, 1.0, 1.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def generic_params():
    return ModelParams(1.5, 0.8, 2.0, 2.5, 1.2)


@pytest.fixture(scope="session")
def generic_cal(generic_params):
    return calibrate(generic_params)


@pytest.fixture(scope="session")
def generic_spectrum(generic_params, generic_cal):
    return build_spectrum(generic_params, generic_cal, n_neg=64)


@pytest.fixture(scope="session")
def grid4096():
    return GridSpec(4096)


@pytest.fixture(scope="session")
def grid512():
    return GridSpec(512)


def random_domain_data(spec, grid, rng, n_active=6, decay=2.0):
    """Random smooth Robin-domain member as a decaying mode superposition."""
    from stringmass.dynamics import ModeCoefficients, evolve_modes

    n = min(n_active, len(spec.modes))
    q = np.zeros(len(spec.modes))
    p = np.zeros(len(spec.modes))
    q[:n] = rng.standard_normal(n) / (1.0 + np.arange(n)) ** decay
    p[:n] = rng.standard_normal(n) / (1.0 + np.arange(n)) ** decay
    coeffs = ModeCoefficients(q=q, p=p, spectrum=spec, n_grid=grid.n_grid)
    return coeffs, evolve_modes(coeffs, 0.0)
