"""Fourier conventions, Sobolev norms, complex coordinates, Bony-Weyl paraproducts.

Spectral data lives in numpy arrays of coefficients u_hat(n) in FFT layout
(n = 0, 1, ..., M/2-1, -M/2, ..., -1) under the symmetric normalization

    u(x) = sum_n u_hat(n) e^{inx} / sqrt(2 pi),
    u_hat(n) = (1/sqrt(2 pi)) integral u(x) e^{-inx} dx,

so Parseval reads integral |u|^2 dx = sum |u_hat|^2.  Elements of the
homogeneous spaces carry u_hat(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectra import PhysicalParams, lambda_mult

__all__ = [
    "wavenumbers",
    "grid",
    "to_coeffs",
    "to_grid",
    "conj_coeffs",
    "project_zero_mean",
    "sobolev_norm",
    "homogeneous_norm",
    "mixed_norm",
    "to_complex",
    "from_complex",
    "BonyWeylConfig",
    "bony_weyl_apply",
    "good_unknown",
]

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@lru_cache(maxsize=None)
def wavenumbers(m: int) -> np.ndarray:
    """Integer wavenumbers in FFT layout for an M-point grid (read-only view)."""
    arr = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    arr.setflags(write=False)
    return arr


def grid(m: int) -> np.ndarray:
    """Uniform collocation points on [0, 2 pi)."""
    return 2.0 * np.pi * np.arange(m) / m


def to_coeffs(u: np.ndarray) -> np.ndarray:
    """Grid samples -> coefficients in the 1/sqrt(2 pi) convention."""
    u = np.asarray(u)
    return np.fft.fft(u) * (_SQRT_2PI / u.size)


def to_grid(coeffs: np.ndarray, real: bool = False) -> np.ndarray:
    """Coefficients -> grid samples; real=True strips roundoff imaginary parts."""
    c = np.asarray(coeffs, dtype=complex)
    u = np.fft.ifft(c) * (c.size / _SQRT_2PI)
    return u.real if real else u


def conj_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of the complex conjugate field: (ubar)_hat(n) = conj(u_hat(-n))."""
    c = np.asarray(coeffs, dtype=complex)
    out = np.conj(c[_negation_index(c.size)])
    return out


@lru_cache(maxsize=None)
def _negation_index(m: int) -> np.ndarray:
    idx = (-np.arange(m)) % m
    idx.setflags(write=False)
    return idx


def project_zero_mean(coeffs: np.ndarray) -> np.ndarray:
    out = np.array(coeffs, dtype=complex)
    out[0] = 0.0
    return out


@lru_cache(maxsize=None)
def _hom_weights(m: int, s: float) -> np.ndarray:
    n = np.abs(wavenumbers(m)).astype(float)
    w = np.zeros_like(n)
    nz = n > 0
    w[nz] = n[nz] ** (2.0 * s)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def _sob_weights(m: int, s: float) -> np.ndarray:
    n = wavenumbers(m).astype(float)
    w = (1.0 + n**2) ** s
    w.setflags(write=False)
    return w


def homogeneous_norm(coeffs: np.ndarray, s: float) -> float:
    """Hdot^s norm (sum over n != 0 of |n|^{2s} |u_hat(n)|^2)^{1/2}."""
    c = np.asarray(coeffs, dtype=complex)
    return float(np.sqrt(np.sum(_hom_weights(c.size, s) * np.abs(c) ** 2)))


def sobolev_norm(coeffs: np.ndarray, s: float, homogeneous: bool = True) -> float:
    """Sobolev norm of a coefficient array; inhomogeneous uses <n>^{2s} weights."""
    if homogeneous:
        return homogeneous_norm(coeffs, s)
    c = np.asarray(coeffs, dtype=complex)
    return float(np.sqrt(np.sum(_sob_weights(c.size, s) * np.abs(c) ** 2)))


def mixed_norm(eta_coeffs: np.ndarray, psi_coeffs: np.ndarray, s: float) -> float:
    """Size of wave data: ||eta||_{H^{s+1/4}} + ||psi||_{Hdot^{s-1/4}}."""
    return sobolev_norm(eta_coeffs, s + 0.25, homogeneous=False) + homogeneous_norm(
        psi_coeffs, s - 0.25
    )


@lru_cache(maxsize=None)
def _lambda_array(params: PhysicalParams, m: int) -> np.ndarray:
    n = wavenumbers(m)
    lam = np.ones(m)
    nz = n != 0
    lam[nz] = lambda_mult(params, n[nz])
    lam.setflags(write=False)
    return lam


def to_complex(
    params: PhysicalParams, eta_coeffs: np.ndarray, psi_coeffs: np.ndarray
) -> np.ndarray:
    """Complex symplectic variable u = (Lambda psi + i Lambda^{-1} eta)/sqrt(2).

    Inputs are zero-mean coefficient arrays of the real fields; the zero mode
    of the output is pinned to 0.
    """
    m = len(eta_coeffs)
    lam = _lambda_array(params, m)
    u = (lam * np.asarray(psi_coeffs) + 1j * np.asarray(eta_coeffs) / lam) / np.sqrt(2.0)
    u[0] = 0.0
    return u


def from_complex(params: PhysicalParams, u_coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the complex coordinates: eta = -(i/sqrt2) Lambda (u - ubar),
    psi = (1/sqrt2) Lambda^{-1} (u + ubar)."""
    u = np.asarray(u_coeffs, dtype=complex)
    ub = conj_coeffs(u)
    lam = _lambda_array(params, u.size)
    eta = -1j / np.sqrt(2.0) * lam * (u - ub)
    psi = (u + ub) / (lam * np.sqrt(2.0))
    eta[0] = 0.0
    psi[0] = 0.0
    return eta, psi


@dataclass(frozen=True)
class BonyWeylConfig:
    """Cutoff geometry for the paraproduct: chi(xi', xi) = theta(|xi'| / (delta <xi>)).

    theta is the cubic smoothstep, identically 1 on [0, 1/2] and 0 on [1, inf).
    """

    delta: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


def _smoothstep_bump(r: np.ndarray) -> np.ndarray:
    """1 on [0,1/2], 0 on [1,inf), cubic smoothstep in between."""
    t = np.clip((np.asarray(r, dtype=float) - 0.5) / 0.5, 0.0, 1.0)
    return 1.0 - t * t * (3.0 - 2.0 * t)


def bony_weyl_cutoff(xi_prime, xi, cfg: BonyWeylConfig) -> np.ndarray:
    bracket = np.sqrt(1.0 + np.asarray(xi, dtype=float) ** 2)
    return _smoothstep_bump(np.abs(xi_prime) / (cfg.delta * bracket))


def bony_weyl_apply(
    a_grid: np.ndarray,
    u_coeffs: np.ndarray,
    cfg: BonyWeylConfig = BonyWeylConfig(),
) -> np.ndarray:
    """Paraproduct of a real order-zero function symbol acting on u.

    Output coefficients: v_hat(k) = (1/sqrt(2 pi)) sum_j chi(k-j, (k+j)/2)
    a_hat(k-j) u_hat(j), with a_hat taken as zero outside the resolved band.
    A constant symbol reproduces c*u exactly (only xi' = 0 survives).
    """
    a_hat = to_coeffs(np.asarray(a_grid, dtype=float))
    u = np.asarray(u_coeffs, dtype=complex)
    m = u.size
    n = wavenumbers(m)
    k = n[:, None].astype(float)
    j = n[None, :].astype(float)
    chi = bony_weyl_cutoff(k - j, (k + j) / 2.0, cfg)
    diff = (n[:, None] - n[None, :]) % m
    a_mat = a_hat[diff]
    # wavenumbers k-j beyond the resolved band alias back; cut them off
    true_diff = n[:, None] - n[None, :]
    resolved = np.abs(true_diff) <= (m - 1) // 2
    kernel = np.where(resolved, chi * a_mat, 0.0)
    return kernel @ u / _SQRT_2PI


def good_unknown(
    params: PhysicalParams,
    eta_coeffs: np.ndarray,
    psi_coeffs: np.ndarray,
    cfg: BonyWeylConfig = BonyWeylConfig(),
) -> np.ndarray:
    """Alinhac good unknown omega = psi - Op^BW(B(eta, psi)) eta.

    B is the vertical velocity trace at the surface; omega - psi is
    quadratically small in the state size.
    """
    from .waterwaves import velocity_trace  # deferred: waterwaves imports us

    eta_g = to_grid(eta_coeffs, real=True)
    psi_g = to_grid(psi_coeffs, real=True)
    b, _ = velocity_trace(params, eta_g, psi_g)
    corr = bony_weyl_apply(b, eta_coeffs, cfg)
    omega_c = np.asarray(psi_coeffs, dtype=complex) - corr
    omega_c[0] = 0.0
    return omega_c
