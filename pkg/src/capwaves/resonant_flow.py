"""Truncated resonant normal-form dynamics.

The truncated model splits the spectrum at a finite cutoff: low modes obey
dz_L/dt = i Omega(D) z_L + i dH3/dzbar (z_L), high modes rotate exactly at
their linear frequency.  Both schemes integrate in the rotating frame
w_j = exp(-i Omega(j) t) z_j, where the resonant cubic Hamiltonian is
autonomous (every kept monomial has vanishing frequency phase): high modes
are then constants, and the implicit midpoint rule conserves the quadratic
invariants to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .birkhoff import CubicHamiltonian, evaluate, hamiltonian_h2, orbit_multiplicity
from .resonance import resonance_cutoff
from .spectra import PhysicalParams, omega

__all__ = [
    "SpectralState",
    "FlowConfig",
    "Trajectory",
    "split_low_high",
    "integrate_resonant",
    "flow_diagnostics",
    "MidpointDivergence",
]


class MidpointDivergence(RuntimeError):
    """Fixed-point iteration of the implicit midpoint step failed to contract."""

    def __init__(self, step: int, iterations: int, update: float):
        super().__init__(
            f"midpoint fixed point did not converge at step {step}: "
            f"{iterations} iterations, last update {update:.3e}"
        )
        self.step = step
        self.iterations = iterations
        self.update = update


@dataclass
class SpectralState:
    """Complex Fourier coefficients z_j for 0 < |j| <= N.

    Entries at j and -j are independent: z is a general complex function,
    not the transform of a real field.  Stored as a flat array indexed by
    j + N with the j = 0 slot pinned to zero.
    """

    params: PhysicalParams
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or self.coeffs.size % 2 == 0:
            raise ValueError("coeffs must be a flat array of odd length 2N+1")
        self.coeffs[self.N] = 0.0

    @classmethod
    def zeros(cls, params: PhysicalParams, n_modes: int) -> "SpectralState":
        return cls(params=params, coeffs=np.zeros(2 * n_modes + 1, dtype=complex))

    @property
    def N(self) -> int:
        return self.coeffs.size // 2

    def mode_range(self) -> Iterator[int]:
        n = self.N
        return (j for j in range(-n, n + 1) if j != 0)

    def coeff(self, j: int) -> complex:
        if j == 0 or abs(j) > self.N:
            return 0.0 + 0.0j
        return complex(self.coeffs[j + self.N])

    def set_coeff(self, j: int, value: complex) -> None:
        if j == 0 or abs(j) > self.N:
            raise IndexError(f"mode {j} outside 0 < |j| <= {self.N}")
        self.coeffs[j + self.N] = value

    def add_to(self, j: int, value: complex) -> None:
        if j != 0 and abs(j) <= self.N:
            self.coeffs[j + self.N] += value

    def zeros_like(self) -> "SpectralState":
        return SpectralState.zeros(self.params, self.N)

    def copy(self) -> "SpectralState":
        return SpectralState(params=self.params, coeffs=self.coeffs.copy())

    def wavenumbers(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def sobolev_norm(self, s: float) -> float:
        j = self.wavenumbers().astype(float)
        w = np.abs(j) ** (2.0 * s)
        w[self.N] = 0.0
        return float(np.sqrt(np.sum(w * np.abs(self.coeffs) ** 2)))

    def momentum(self) -> float:
        j = self.wavenumbers().astype(float)
        return float(np.sum(j * np.abs(self.coeffs) ** 2))


@dataclass(frozen=True)
class FlowConfig:
    dt: float
    t_final: float
    scheme: str = "implicit-midpoint"
    record_every: int = 1
    sobolev_s: float = 8.0
    cutoff: float | None = None  # None -> min(resonance cutoff, N)
    fixed_point_tol: float = 1e-13
    max_fixed_point_iter: int = 50

    def __post_init__(self):
        if not self.dt != 0:
            raise ValueError("dt must be nonzero")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if self.scheme not in ("implicit-midpoint", "rk4-rotating-frame"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


def split_low_high(z: SpectralState, cutoff: float) -> tuple[SpectralState, SpectralState]:
    """Orthogonal split z = z_L + z_H at |j| <= cutoff."""
    low = z.zeros_like()
    high = z.zeros_like()
    j = z.wavenumbers()
    mask_low = (np.abs(j) <= cutoff) & (j != 0)
    low.coeffs[mask_low] = z.coeffs[mask_low]
    mask_high = (np.abs(j) > cutoff) & (j != 0)
    high.coeffs[mask_high] = z.coeffs[mask_high]
    return low, high


def _compile_gradient(ham: CubicHamiltonian, n_modes: int):
    """Flatten dH/dzbar into index arrays for vectorized evaluation.

    Returns (out_idx, idx_a, conj_a, idx_b, conj_b, coeff) so that
    grad[out] += coeff * f(a) * f(b), f the sigma-aware factor lookup.
    """
    out_idx, idx_a, conj_a, idx_b, conj_b, coeff = [], [], [], [], [], []
    for key, c in ham.terms.items():
        if any(abs(j) > n_modes for _, j in key):
            raise ValueError(
                f"Hamiltonian supported on |j| <= {max(abs(j) for _, j in key)} "
                f"but state truncation is N = {n_modes}"
            )
        c_tot = orbit_multiplicity(key) * c
        seen = set()
        for pos, (s, j) in enumerate(key):
            if s != -1 or (s, j) in seen:
                continue
            seen.add((s, j))
            count = sum(1 for p in key if p == (s, j))
            rest = list(key)
            del rest[pos]
            (sa, ja), (sb, jb) = rest
            out_idx.append(j + n_modes)
            idx_a.append(ja + n_modes)
            conj_a.append(sa == -1)
            idx_b.append(jb + n_modes)
            conj_b.append(sb == -1)
            coeff.append(c_tot * count)
    return (
        np.asarray(out_idx, dtype=np.intp),
        np.asarray(idx_a, dtype=np.intp),
        np.asarray(conj_a, dtype=bool),
        np.asarray(idx_b, dtype=np.intp),
        np.asarray(conj_b, dtype=bool),
        np.asarray(coeff, dtype=complex),
    )


def _gradient_func(ham: CubicHamiltonian, n_modes: int) -> Callable[[np.ndarray], np.ndarray]:
    out_idx, ia, ca, ib, cb, cf = _compile_gradient(ham, n_modes)

    def grad(c: np.ndarray) -> np.ndarray:
        g = np.zeros_like(c)
        if out_idx.size:
            va = c[ia]
            va = np.where(ca, np.conj(va), va)
            vb = c[ib]
            vb = np.where(cb, np.conj(vb), vb)
            np.add.at(g, out_idx, cf * va * vb)
        return g

    return grad


@dataclass
class Trajectory:
    """Recorded resonant-flow history.

    Low modes are stored per record in the lab frame; high modes are stored
    once in the rotating frame (where the scheme never touches them), so
    their moduli are constants of the record structure, not of floating-point
    rotation arithmetic.
    """

    params: PhysicalParams
    n_modes: int
    cutoff: float
    times: np.ndarray
    low_states: np.ndarray  # (n_records, 2N+1), lab frame, high slots zero
    high_initial: np.ndarray  # (2N+1,), rotating frame, low slots zero
    config: FlowConfig
    fixed_point_iterations: int = 0

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> SpectralState:
        t = self.times[i]
        j = np.arange(-self.n_modes, self.n_modes + 1)
        om = omega(self.params, j)
        coeffs = self.low_states[i] + self.high_initial * np.exp(1j * om * t)
        return SpectralState(params=self.params, coeffs=coeffs)

    def high_mode_moduli(self, i: int) -> np.ndarray:
        """|z_j| on the high block: exactly constant across records."""
        del i  # the rotating frame never updates the high block
        return np.abs(self.high_initial)

    def states(self) -> list[SpectralState]:
        return [self.state(i) for i in range(len(self))]


def integrate_resonant(
    params: PhysicalParams,
    h_res: CubicHamiltonian,
    z0: SpectralState,
    cfg: FlowConfig,
) -> Trajectory:
    """Integrate the split resonant system from z0 up to t_final.

    In the rotating frame the low block obeys dw/dt = i dH3/dwbar(w), an
    autonomous Hamiltonian system; the high block is constant.  The implicit
    midpoint rule (default) is symplectic and conserves the quadratic
    invariants exactly; rotating-frame RK4 is offered for speed.
    """
    n = z0.N
    cutoff = cfg.cutoff
    if cutoff is None:
        cutoff = min(resonance_cutoff(params), float(n))
    if h_res.terms and h_res.max_index() > cutoff:
        raise ValueError(
            f"resonant Hamiltonian reaches |j| = {h_res.max_index()} "
            f"beyond the low-mode cutoff {cutoff}"
        )
    grad = _gradient_func(h_res, n)
    j = np.arange(-n, n + 1)
    mask_low = (np.abs(j) <= cutoff) & (j != 0)
    mask_high = (np.abs(j) > cutoff) & (j != 0)
    om = omega(params, j)

    w = z0.coeffs.copy()  # rotating frame; at t=0 frames agree
    w_high = np.where(mask_high, w, 0.0)
    w = np.where(mask_low, w, 0.0)

    def f(c: np.ndarray) -> np.ndarray:
        g = 1j * grad(c)
        g[~mask_low] = 0.0
        return g

    # dt < 0 integrates backward in time (the rotating-frame system is
    # autonomous, so the same stepper applies with a negative step)
    n_steps = max(1, int(round(cfg.t_final / abs(cfg.dt))))
    dt = np.sign(cfg.dt) * cfg.t_final / n_steps

    times = [0.0]
    records = [np.where(mask_low, w, 0.0)]
    total_iters = 0

    for step in range(1, n_steps + 1):
        if cfg.scheme == "implicit-midpoint":
            w, iters = _midpoint_step(f, w, dt, cfg, step)
            total_iters += iters
        else:
            w = _rk4_step(f, w, dt)
        if step % cfg.record_every == 0 or step == n_steps:
            t = step * dt
            times.append(t)
            records.append(np.where(mask_low, w * np.exp(1j * om * t), 0.0))

    return Trajectory(
        params=params,
        n_modes=n,
        cutoff=cutoff,
        times=np.asarray(times),
        low_states=np.asarray(records),
        high_initial=w_high,
        config=cfg,
        fixed_point_iterations=total_iters,
    )


def _midpoint_step(f, w, dt, cfg: FlowConfig, step: int):
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    mid = w + 0.5 * dt * f(w)  # explicit Euler predictor for the midpoint
    for it in range(1, cfg.max_fixed_point_iter + 1):
        if not np.all(np.isfinite(mid.view(float))):
            raise MidpointDivergence(step, it, math.inf)
        new_mid = w + 0.5 * dt * f(mid)
        update = float(np.max(np.abs(new_mid - mid)))
        mid = new_mid
        if update <= cfg.fixed_point_tol * scale:
            return w + dt * f(mid), it
    raise MidpointDivergence(step, cfg.max_fixed_point_iter, update)


def _rk4_step(f, w, dt):
    k1 = f(w)
    k2 = f(w + 0.5 * dt * k1)
    k3 = f(w + 0.5 * dt * k2)
    k4 = f(w + dt * k3)
    return w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class FlowDiagnostics:
    times: np.ndarray
    h2_low: np.ndarray
    h3: np.ndarray
    momentum: np.ndarray
    sobolev: np.ndarray
    equiv_norm: np.ndarray

    def relative_drift(self, series: np.ndarray) -> float:
        ref = abs(series[0])
        scale = ref if ref > 0 else 1.0
        return float(np.max(np.abs(series - series[0])) / scale)


def flow_diagnostics(traj: Trajectory, h_res: CubicHamiltonian) -> FlowDiagnostics:
    """Conservation time series along a recorded trajectory.

    Per record: H2 of the low block, the resonant cubic Hamiltonian, the
    momentum sum j |z_j|^2, the homogeneous Sobolev norm, and the equivalent
    norm squared H2(z_L) + ||z_H||_{Hdot s}^2 (reported as its square root).
    """
    s = traj.config.sobolev_s
    n = len(traj)
    h2 = np.empty(n)
    h3 = np.empty(n)
    mom = np.empty(n)
    sob = np.empty(n)
    equiv = np.empty(n)
    for i in range(n):
        z = traj.state(i)
        z_low, z_high = split_low_high(z, traj.cutoff)
        h2[i] = hamiltonian_h2(traj.params, z_low)
        h3[i] = evaluate(h_res, z_low).real
        mom[i] = z.momentum()
        sob[i] = z.sobolev_norm(s)
        equiv[i] = np.sqrt(h2[i] + z_high.sobolev_norm(s) ** 2)
    return FlowDiagnostics(
        times=traj.times, h2_low=h2, h3=h3, momentum=mom, sobolev=sob, equiv_norm=equiv
    )
