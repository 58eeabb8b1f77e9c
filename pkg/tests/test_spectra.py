import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capwaves.spectra import (
    N_CERT,
    PhysicalParams,
    certified_remainder_constant,
    g0_mult,
    lambda_mult,
    omega,
    omega_remainder,
    stable_tanh,
)

INF = math.inf

# high-precision reference values (40-digit mpmath evaluations of the
# closed formulas, frozen)
OMEGA_G1K1_H05_XI3 = 5.210992958097908727903
LAMBDA_G981_K007_H2_J5 = 0.8109667384364587325022
TANH_1 = 0.7615941559557648881195


def test_omega_zero_and_sqrt2():
    p = PhysicalParams(1.0, 1.0, INF)
    assert omega(p, 0.0) == 0.0
    assert omega(p, 1) == pytest.approx(math.sqrt(2.0), abs=1e-15)


def test_omega_finite_depth_reference():
    p = PhysicalParams(1.0, 1.0, 0.5)
    assert omega(p, 3) == pytest.approx(OMEGA_G1K1_H05_XI3, rel=1e-14)


def test_omega_even_and_monotone():
    p = PhysicalParams(2.0, 0.3, 1.7)
    xs = np.linspace(0.1, 50.0, 400)
    assert np.allclose(omega(p, xs), omega(p, -xs), rtol=0, atol=0)
    vals = omega(p, xs)
    assert np.all(np.diff(vals) > 0)


def test_lambda_value_and_evenness():
    p = PhysicalParams(1.0, 1.0, INF)
    assert lambda_mult(p, 1) == pytest.approx(2.0 ** (-0.25), rel=1e-15)
    p2 = PhysicalParams(1.0, 0.5, INF)
    assert lambda_mult(p2, 2) == lambda_mult(p2, -2)
    p3 = PhysicalParams(9.81, 0.07, 2.0)
    assert lambda_mult(p3, 5) == pytest.approx(LAMBDA_G981_K007_H2_J5, rel=1e-14)


def test_lambda_rejects_zero():
    p = PhysicalParams(1.0, 1.0, INF)
    with pytest.raises(ValueError):
        lambda_mult(p, 0)


def test_g0_values():
    assert g0_mult(PhysicalParams(1.0, 1.0, INF), 3) == 3.0
    assert g0_mult(PhysicalParams(1.0, 1.0, 0.3), 0) == 0.0
    assert g0_mult(PhysicalParams(1.0, 1.0, 1.0), 1) == pytest.approx(
        TANH_1, rel=1e-15
    )
    # even in j
    p = PhysicalParams(1.0, 1.0, 0.7)
    assert g0_mult(p, -4) == g0_mult(p, 4)


@given(st.floats(min_value=-700.0, max_value=700.0, allow_nan=False))
def test_stable_tanh_matches_libm(x):
    assert stable_tanh(x) == pytest.approx(math.tanh(x), abs=1e-16, rel=1e-15)


def test_stable_tanh_large_args_saturate():
    assert stable_tanh(1e6) == 1.0
    assert stable_tanh(-1e6) == -1.0


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(g=1.0, kappa=0.0, depth=INF)
    with pytest.raises(ValueError):
        PhysicalParams(g=-0.1, kappa=1.0, depth=INF)
    with pytest.raises(ValueError):
        PhysicalParams(g=1.0, kappa=1.0, depth=0.0)
    # g = 0 is allowed
    PhysicalParams(g=0.0, kappa=1.0, depth=INF)


def test_multiplier_identities():
    # Lambda(j)^2 (g + kappa j^2)^{1/2} = (|j| tanh(h|j|))^{1/2}
    # Omega(j) = G_j^{1/2} (g + kappa j^2)^{1/2}
    for p in (
        PhysicalParams(1.0, 1.0, INF),
        PhysicalParams(9.81, 0.07, 2.0),
        PhysicalParams(0.0, 0.4, 1.2),
    ):
        for j in (1, 2, 5, 17, 100, -3):
            lhs = lambda_mult(p, j) ** 2 * (p.g + p.kappa * j * j) ** 0.5
            rhs = (abs(j) * (1.0 if p.infinite_depth else math.tanh(p.depth * abs(j)))) ** 0.5
            assert lhs == pytest.approx(rhs, rel=1e-12)
            om = (g0_mult(p, j) * (p.g + p.kappa * j * j)) ** 0.5
            assert omega(p, j) == pytest.approx(om, rel=1e-12)


def test_remainder_pure_capillary_vanishes():
    p = PhysicalParams(0.0, 1.0, INF)
    r, c = omega_remainder(p, 4)
    assert r == 0.0
    assert c == 0.0


def test_remainder_asymptotics():
    # r(n) ~ g/(2 sqrt(kappa)) n^{-1/2} at leading order
    p = PhysicalParams(1.0, 1.0, INF)
    r, _ = omega_remainder(p, 100)
    assert r == pytest.approx(0.5 / math.sqrt(100.0), rel=1e-2)


def test_remainder_rejects_zero():
    with pytest.raises(ValueError):
        omega_remainder(PhysicalParams(1.0, 1.0, INF), 0)


@pytest.mark.parametrize(
    "p",
    [
        PhysicalParams(1.0, 1.0, 1.0),
        PhysicalParams(1.0, 1.0, INF),
        PhysicalParams(9.81, 0.07, 0.5),
    ],
)
def test_certified_constant_bounds_sweep(p):
    # brute-force sweep: |r(n)| sqrt(n) <= C for every n <= N_CERT
    c = certified_remainder_constant(p)
    worst = 0.0
    for nn in list(range(1, 200)) + [10**3, 10**4]:
        r, _ = omega_remainder(p, int(nn))
        worst = max(worst, abs(r) * math.sqrt(nn))
    assert worst <= c + 1e-15
    # stable remainder formula agrees with the naive (cancelling) difference
    for nn in (7, 123, 9999):
        lead = math.sqrt(p.kappa) * nn**1.5
        naive = omega(p, nn) - lead
        r, _ = omega_remainder(p, nn)
        assert r == pytest.approx(naive, abs=1e-12 * max(1.0, lead))
