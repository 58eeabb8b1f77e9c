import math

import numpy as np
import pytest

from capwaves.spectra import PhysicalParams


@pytest.fixture
def params_generic():
    # no 3-wave resonances at these values
    return PhysicalParams(g=1.0, kappa=1.0, depth=math.inf)


@pytest.fixture
def params_wilton():
    # kappa = g/2 makes (2; 1, 1) exactly resonant in infinite depth
    return PhysicalParams(g=1.0, kappa=0.5, depth=math.inf)


@pytest.fixture
def params_finite():
    return PhysicalParams(g=1.0, kappa=1.0, depth=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_real_coeffs(rng, m, n_modes=8, decay=1.5):
    """Zero-mean real field as spectral coefficients (conjugate-symmetric)."""
    c = np.zeros(m, dtype=complex)
    for k in range(1, n_modes + 1):
        c[k] = (rng.normal() + 1j * rng.normal()) * np.exp(-decay * k)
        c[-k] = np.conj(c[k])
    return c
