"""Independent finite-difference reference for the Dirichlet-Neumann operator.

Solves the Laplace problem on the curved strip -h < y < eta(x) directly:
the strip is mapped onto the rectangle [0, 2pi) x [-1, 0] by
y = -h + (s+1)(eta(x) + h), the transformed equation

    phi_xx - 2 beta phi_xs + (beta^2 + 1/J^2) phi_ss
        + (2 (s+1) eta_x^2 / J^2 - (s+1) eta_xx / J) phi_s = 0,

with beta = (s+1) eta_x / J and J = eta + h, is discretized with
second-order central differences (periodic in x, Dirichlet phi = psi at the
surface, Neumann phi_s = 0 at the bottom via a ghost-point reflection), and
the surface flux is recovered from

    G(eta) psi = (1 + eta_x^2)/J * phi_s - eta_x phi_x   at s = 0.

This shares no code with the spectral expansion: it is the oracle that gates
the Craig-Sulem recursion.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .spectra import PhysicalParams
from .transforms import to_coeffs, to_grid, wavenumbers

__all__ = ["dno_reference"]


def _spectral_derivs(eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # derivatives of the *data* (band-limited samples, so these are exact);
    # the PDE solve itself is pure finite differences
    c = to_coeffs(eta)
    n = wavenumbers(eta.size)
    return to_grid(1j * n * c, real=True), to_grid(-(n**2) * c, real=True)


def dno_reference(
    params: PhysicalParams,
    eta: np.ndarray,
    psi: np.ndarray,
    ns: int = 128,
) -> np.ndarray:
    """G(eta)psi on the sampling grid of eta, via the mapped Laplace problem.

    `ns` vertical cells give ns+1 levels s_j = -1 + j/ns.  Requires finite
    depth (the strip map needs a bottom).
    """
    if params.infinite_depth:
        raise ValueError("the strip oracle requires finite depth")
    eta = np.asarray(eta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    nx = eta.size
    h = params.depth
    hx = 2.0 * np.pi / nx
    hs = 1.0 / ns
    s_levels = -1.0 + hs * np.arange(ns + 1)

    eta_x, eta_xx = _spectral_derivs(eta)
    jac = eta + h  # J(x) > 0 for valid states

    def unk(i: int, j: int) -> int:
        return (i % nx) * (ns + 1) + j

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    rhs_vec = np.zeros(nx * (ns + 1))

    def add(r: int, i: int, j: int, v: float) -> None:
        if j < 0:
            j = -j  # bottom ghost reflection: phi[., -1] = phi[., 1]
        rows.append(r)
        cols.append(unk(i, j))
        vals.append(v)

    for i in range(nx):
        jx = jac[i]
        ex = eta_x[i]
        exx = eta_xx[i]
        for j in range(ns + 1):
            r = unk(i, j)
            if j == ns:  # Dirichlet: phi = psi at the surface
                add(r, i, j, 1.0)
                rhs_vec[r] = psi[i]
                continue
            sp1 = s_levels[j] + 1.0
            beta = sp1 * ex / jx
            css = beta * beta + 1.0 / (jx * jx)
            cs = 2.0 * sp1 * ex * ex / (jx * jx) - sp1 * exx / jx
            # phi_xx
            add(r, i + 1, j, 1.0 / hx**2)
            add(r, i - 1, j, 1.0 / hx**2)
            add(r, i, j, -2.0 / hx**2)
            # phi_ss
            add(r, i, j + 1, css / hs**2)
            add(r, i, j - 1, css / hs**2)
            add(r, i, j, -2.0 * css / hs**2)
            # cross term -2 beta phi_xs
            cxs = -2.0 * beta / (4.0 * hx * hs)
            add(r, i + 1, j + 1, cxs)
            add(r, i - 1, j - 1, cxs)
            add(r, i + 1, j - 1, -cxs)
            add(r, i - 1, j + 1, -cxs)
            # first-order term cs * phi_s
            add(r, i, j + 1, cs / (2.0 * hs))
            add(r, i, j - 1, -cs / (2.0 * hs))

    mat = sp.csr_matrix(
        (vals, (rows, cols)), shape=(nx * (ns + 1), nx * (ns + 1))
    )
    phi = spla.spsolve(mat, rhs_vec).reshape(nx, ns + 1)

    # one-sided third-order phi_s at the surface keeps the flux error
    # subdominant to the interior O(hs^2) truncation
    phi_s = (
        11.0 * phi[:, ns] - 18.0 * phi[:, ns - 1] + 9.0 * phi[:, ns - 2] - 2.0 * phi[:, ns - 3]
    ) / (6.0 * hs)
    # the surface row is the Dirichlet datum, so its x-derivative is data too
    psi_x, _ = _spectral_derivs(psi)
    return (1.0 + eta_x**2) / jac * phi_s - eta_x * psi_x
