import math

import numpy as np
import pytest

from capwaves.spectra import PhysicalParams, omega
from capwaves.transforms import (
    BonyWeylConfig,
    bony_weyl_apply,
    conj_coeffs,
    from_complex,
    good_unknown,
    grid,
    homogeneous_norm,
    mixed_norm,
    sobolev_norm,
    to_coeffs,
    to_complex,
    to_grid,
    wavenumbers,
)
from conftest import random_real_coeffs

INF = math.inf
M = 128


def test_fft_round_trip(rng):
    u = rng.normal(size=M)
    assert np.max(np.abs(to_grid(to_coeffs(u), real=True) - u)) < 1e-13


def test_conj_coeffs(rng):
    c = random_real_coeffs(rng, M)
    g = to_grid(c)
    gc = to_grid(conj_coeffs(c))
    assert np.max(np.abs(gc - np.conj(g))) < 1e-14


def test_sobolev_single_mode_and_scaling(rng):
    c = np.zeros(M, complex)
    c[1] = 1.0
    for s in (-1.0, 0.0, 2.5, 8.0):
        assert homogeneous_norm(c, s) == 1.0
    c2 = random_real_coeffs(rng, M)
    for s in (0.0, 1.5):
        assert homogeneous_norm(3.7 * c2, s) == pytest.approx(
            3.7 * homogeneous_norm(c2, s), rel=1e-14
        )


def test_h0_equals_grid_l2(rng):
    c = random_real_coeffs(rng, M)
    g = to_grid(c, real=True)
    l2 = math.sqrt(2.0 * np.pi / M * float(np.sum(g * g)))
    assert homogeneous_norm(c, 0.0) == pytest.approx(l2, rel=1e-12)


def test_mixed_norm_components(rng):
    eta = random_real_coeffs(rng, M)
    psi = random_real_coeffs(rng, M)
    s = 3.0
    assert mixed_norm(eta, psi, s) == pytest.approx(
        sobolev_norm(eta, s + 0.25, homogeneous=False)
        + homogeneous_norm(psi, s - 0.25),
        rel=1e-14,
    )


def test_complex_round_trip(params_wilton, rng):
    eta = random_real_coeffs(rng, M)
    psi = random_real_coeffs(rng, M)
    u = to_complex(params_wilton, eta, psi)
    eta2, psi2 = from_complex(params_wilton, u)
    assert np.max(np.abs(eta2 - eta)) < 1e-13
    assert np.max(np.abs(psi2 - psi)) < 1e-13


def test_h2_diagonalization(params_wilton, rng):
    # H2(eta, psi) computed on the real side equals sum Omega(j)|u_j|^2
    from capwaves.waterwaves import dno_apply

    eta_c = random_real_coeffs(rng, M)
    psi_c = random_real_coeffs(rng, M)
    eta_g, psi_g = to_grid(eta_c, real=True), to_grid(psi_c, real=True)
    dx = 2.0 * np.pi / M
    g0psi = dno_apply(params_wilton, np.zeros(M), psi_g, order=0)
    eta_x = to_grid(1j * wavenumbers(M) * eta_c, real=True)
    h2_real = (
        0.5 * dx * float(np.sum(psi_g * g0psi))
        + 0.5 * params_wilton.g * dx * float(np.sum(eta_g**2))
        + 0.5 * params_wilton.kappa * dx * float(np.sum(eta_x**2))
    )
    u = to_complex(params_wilton, eta_c, psi_c)
    h2_cplx = float(np.sum(omega(params_wilton, wavenumbers(M)) * np.abs(u) ** 2))
    assert h2_real == pytest.approx(h2_cplx, rel=1e-12)


def test_complex_coordinates_hand_value(params_wilton):
    # eta = 0, psi = cos(x): u_{+-1} = Lambda(1) psi_hat(+-1) / sqrt(2)
    from capwaves.spectra import lambda_mult

    psi_c = to_coeffs(np.cos(grid(M)))
    u = to_complex(params_wilton, np.zeros(M, complex), psi_c)
    lam = lambda_mult(params_wilton, 1)
    assert u[1] == pytest.approx(lam * psi_c[1] / math.sqrt(2.0), rel=1e-14)
    assert u[-1] == pytest.approx(np.conj(u[1]), rel=1e-12)
    mask = np.ones(M, bool)
    mask[[1, -1]] = False
    assert np.max(np.abs(u[mask])) < 1e-15


def test_bony_weyl_constant_symbol(rng):
    # only xi' = 0 survives: the kernel is diagonal, so c*u up to roundoff
    u = random_real_coeffs(rng, M)
    out = bony_weyl_apply(2.5 * np.ones(M), u)
    assert np.max(np.abs(out - 2.5 * u)) < 1e-14


def test_bony_weyl_low_symbol_high_mode_is_product():
    x = grid(M)
    u = np.zeros(M, complex)
    u[40] = 1.0
    out = bony_weyl_apply(np.cos(x), u)
    prod = to_coeffs(np.cos(x) * to_grid(u))
    assert np.max(np.abs(out - prod)) < 1e-13


def test_bony_weyl_high_symbol_low_mode_vanishes():
    x = grid(M)
    u = np.zeros(M, complex)
    u[1] = 1.0
    out = bony_weyl_apply(np.cos(40 * x), u)
    assert np.max(np.abs(out)) < 1e-13


def test_bony_weyl_translation_invariance(rng):
    theta = 0.7319
    shift = np.exp(1j * wavenumbers(M) * theta)
    a_c = random_real_coeffs(rng, M)
    u = random_real_coeffs(rng, M)
    lhs = bony_weyl_apply(to_grid(a_c * shift, real=True), shift * u)
    rhs = shift * bony_weyl_apply(to_grid(a_c, real=True), u)
    assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_bony_weyl_config_validation():
    with pytest.raises(ValueError):
        BonyWeylConfig(delta=0.0)
    with pytest.raises(ValueError):
        BonyWeylConfig(delta=1.0)


def test_good_unknown_flat_surface(params_wilton, rng):
    psi = random_real_coeffs(rng, M)
    om = good_unknown(params_wilton, np.zeros(M, complex), psi)
    assert np.max(np.abs(om - psi)) == 0.0


def test_good_unknown_quadratic_smallness(params_wilton, rng):
    eta0 = random_real_coeffs(rng, M)
    psi0 = random_real_coeffs(rng, M)
    eta0 /= homogeneous_norm(eta0, 0.0)
    psi0 /= homogeneous_norm(psi0, 0.0)
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        om = good_unknown(params_wilton, eps * eta0, eps * psi0)
        ratios.append(homogeneous_norm(om - eps * psi0, 4.0) / eps**2)
    # bounded ratio as eps -> 0 certifies the O(eps^2) correction size
    assert max(ratios) < 2.0 * min(ratios)


def test_good_unknown_close_to_plain_product(params_wilton, rng):
    # paraproduct ~ product when the symbol's frequencies sit far below the
    # argument's: low-mode psi (hence low-mode B at leading order) acting on
    # high-mode eta
    from capwaves.waterwaves import velocity_trace

    eps = 1e-2
    psi_c = np.zeros(M, complex)
    for k in (1, 2, 3):
        psi_c[k] = eps * complex(rng.normal(), rng.normal()) / k
        psi_c[-k] = np.conj(psi_c[k])
    eta_c = np.zeros(M, complex)
    for k in range(25, 36):
        eta_c[k] = eps * complex(rng.normal(), rng.normal()) * np.exp(-0.1 * k)
        eta_c[-k] = np.conj(eta_c[k])
    om = good_unknown(params_wilton, eta_c, psi_c)
    corr = psi_c - om
    b, _ = velocity_trace(
        params_wilton, to_grid(eta_c, real=True), to_grid(psi_c, real=True)
    )
    full_prod = to_coeffs(b * to_grid(eta_c, real=True))
    full_prod[0] = 0.0
    defect = homogeneous_norm(corr - full_prod, 0.0)
    assert defect < 0.10 * homogeneous_norm(full_prod, 0.0)


def test_multiplier_translation_commutes(params_wilton, rng):
    theta = 1.234
    shift = np.exp(1j * wavenumbers(M) * theta)
    eta = random_real_coeffs(rng, M)
    psi = random_real_coeffs(rng, M)
    lhs = to_complex(params_wilton, shift * eta, shift * psi)
    rhs = shift * to_complex(params_wilton, eta, psi)
    assert np.max(np.abs(lhs - rhs)) < 1e-13
