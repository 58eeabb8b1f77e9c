"""Pseudo-spectral solver for the full water-wave system.

State: surface elevation eta and trace potential psi sampled on a uniform
M-point grid over [0, 2 pi), both zero-mean.  The Dirichlet-Neumann operator
is expanded about the flat surface: with the bottom-Neumann harmonic
extension written as cosh((y+h)D) sech(hD) applied to the trace at y = 0, the
vertical derivatives at the surface give the multiplier family

    C_0 = Id,  C_m = D^m (m even),  C_m = D^{m-1} G0 (m odd),  G0 = D tanh(hD),

and matching the Dirichlet datum order by order in eta yields

    psi = sum_a (eta^a / a!) C_a f        (defines f = f0 + f1 + ... )
    G_r(eta) psi = sum_{a+b=r} (eta^a/a!) C_{a+1} f_b
                   - eta_x sum_{a+b=r-1} (eta^a/a!) d_x C_a f_b.

Order 0 is G0 psi and order 1 reproduces D eta D psi - G0 (eta G0 psi); the
full sum is validated against an independent finite-difference solution of
the Laplace problem (see capwaves.elliptic).  Every pointwise product is
dealiased by the 2/3 rule.  Time stepping is RK4 on the rotating-frame
nonlinearity: the linearized flow is applied exactly through the multiplier
exp(i Omega dt) in the complex symplectic variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .spectra import PhysicalParams, lambda_mult, omega, stable_tanh
from .transforms import (
    from_complex,
    mixed_norm,
    to_coeffs,
    to_complex,
    to_grid,
    wavenumbers,
)

__all__ = [
    "WaveState",
    "SolverConfig",
    "WWTrajectory",
    "make_state",
    "dno_apply",
    "rhs",
    "hamiltonian",
    "velocity_trace",
    "momentum",
    "integrate_ww",
    "lifespan_experiment",
    "lifespan_seed",
    "LifespanResult",
    "UnderResolvedError",
]


class UnderResolvedError(ValueError):
    """Seed data carries spectral mass beyond the dealiasing band."""


@dataclass
class WaveState:
    """Real grid samples of (eta, psi), both zero-mean representatives."""

    eta: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        self.eta = np.asarray(self.eta, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        if self.eta.shape != self.psi.shape or self.eta.ndim != 1:
            raise ValueError("eta and psi must be 1-d arrays of equal size")

    @property
    def m(self) -> int:
        return self.eta.size

    def copy(self) -> "WaveState":
        return WaveState(self.eta.copy(), self.psi.copy())


def make_state(eta: np.ndarray, psi: np.ndarray) -> WaveState:
    """Build a WaveState, projecting out the means (mass and gauge choice)."""
    eta = np.asarray(eta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    return WaveState(eta - eta.mean(), psi - psi.mean())


@dataclass(frozen=True)
class SolverConfig:
    m: int = 256
    dno_order: int = 3
    dt: float = 2e-3
    t_final: float = 10.0
    dealias_fraction: float = 2.0 / 3.0
    filter_strength: float | None = None  # 36th-order exponential filter, off by default
    record_every: int = 50
    sobolev_s: float = 8.0
    norm_ceiling: float = 10.0
    mode_amplitudes: int = 4

    def __post_init__(self):
        if self.m < 16 or (self.m & (self.m - 1)) != 0:
            raise ValueError("grid size m must be a power of two >= 16")
        if self.dno_order not in (1, 2, 3, 4):
            raise ValueError("dno_order must be in {1, 2, 3, 4}")
        if self.dt == 0 or self.t_final <= 0:
            raise ValueError("dt must be nonzero and t_final positive")


# ---------------------------------------------------------------------------
# spectral plumbing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _dealias_mask(m: int, fraction: float) -> np.ndarray:
    n = np.abs(wavenumbers(m))
    keep = int(math.floor(fraction * (m // 2)))
    mask = n <= keep
    mask.setflags(write=False)
    return mask


def _dealias(u: np.ndarray, mask: np.ndarray) -> np.ndarray:
    c = np.fft.fft(u)
    c[~mask] = 0.0
    return np.fft.ifft(c).real


def _mult_grid(u: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    return np.fft.ifft(symbol * np.fft.fft(u)).real


def _dx(u: np.ndarray) -> np.ndarray:
    m = u.size
    return _mult_grid(u, 1j * wavenumbers(m))


class _DnoWorkspace:
    """Multiplier tables for the expansion, cached per (params, m, order)."""

    def __init__(self, params: PhysicalParams, m: int, order: int, fraction: float):
        n = wavenumbers(m)
        an = np.abs(n).astype(float)
        if params.infinite_depth:
            tanh_h = np.ones(m)
        else:
            tanh_h = stable_tanh(params.depth * an)
        self.g0 = an * tanh_h
        self.c = [np.ones(m)]
        for mm in range(1, order + 2):
            sym = an**mm * (tanh_h if mm % 2 == 1 else 1.0)
            self.c.append(sym)
        self.ik = 1j * n

        # stacked symbols for the batched surface assembly: vertical
        # derivatives C_{a+1} f_b over a+b <= order, and the tangential
        # family ik C_a f_b over a+b <= order-1
        self.vert_pairs = [
            (a, b) for r in range(order + 1) for a in range(r + 1) for b in (r - a,)
        ]
        self.vert_syms = np.stack([self.c[a + 1] for a, _ in self.vert_pairs])
        self.tang_pairs = [
            (a, b) for r in range(order) for a in range(r + 1) for b in (r - a,)
        ]
        if self.tang_pairs:
            self.tang_syms = np.stack(
                [self.ik * self.c[a] for a, _ in self.tang_pairs]
            )
        else:
            self.tang_syms = np.zeros((0, m), dtype=complex)
        self.mask = _dealias_mask(m, fraction)


_dno_cache: dict = {}


def _workspace(params: PhysicalParams, m: int, order: int, fraction: float) -> _DnoWorkspace:
    key = (params, m, order, fraction)
    ws = _dno_cache.get(key)
    if ws is None:
        ws = _DnoWorkspace(params, m, order, fraction)
        _dno_cache[key] = ws
    return ws


def _eta_powers(eta_g: np.ndarray, order: int, mask: np.ndarray) -> list[np.ndarray]:
    """Dealiased grid tables of eta^a / a! for a = 0..order."""
    out = [np.ones(eta_g.size)]
    for a in range(1, order + 1):
        out.append(_dealias(out[-1] * eta_g, mask) / a)
    return out


def _dno_core(
    ws: _DnoWorkspace,
    eta_g: np.ndarray,
    eta_x: np.ndarray,
    eta_pow: list[np.ndarray],
    psi_c: np.ndarray,
    order: int,
) -> np.ndarray:
    """Spectral coefficients of the truncated operator (zero mean, in-band).

    All products are between band-limited factors and remasked immediately
    after, so the 2/3 rule removes the aliased content exactly.
    """
    mask = ws.mask
    # Dirichlet matching: f_k = -sum_{mm=1..k} (eta^mm/mm!) C_mm f_{k-mm}
    f = [np.where(mask, psi_c, 0.0)]
    for k in range(1, order + 1):
        syms = np.stack([ws.c[mm] for mm in range(1, k + 1)])
        stack = np.stack([f[k - mm] for mm in range(1, k + 1)])
        terms = np.fft.ifft(syms * stack, axis=1).real
        acc = np.zeros(eta_g.size)
        for i, mm in enumerate(range(1, k + 1)):
            acc -= eta_pow[mm] * terms[i]
        fk = np.fft.fft(acc)
        fk[~mask] = 0.0
        f.append(fk)

    f_arr = np.stack(f)
    vert = np.fft.ifft(ws.vert_syms * f_arr[[b for _, b in ws.vert_pairs]], axis=1).real
    total = np.zeros(eta_g.size)
    for i, (a, _) in enumerate(ws.vert_pairs):
        total += eta_pow[a] * vert[i]
    if ws.tang_pairs:
        tang = np.fft.ifft(
            ws.tang_syms * f_arr[[b for _, b in ws.tang_pairs]], axis=1
        ).real
        tsum = np.zeros(eta_g.size)
        for i, (a, _) in enumerate(ws.tang_pairs):
            tsum += eta_pow[a] * tang[i]
        tsum_c = np.fft.fft(tsum)
        tsum_c[~mask] = 0.0
        total -= eta_x * np.fft.ifft(tsum_c).real
    g_c = np.fft.fft(total)
    g_c[~mask] = 0.0
    g_c[0] = 0.0
    return g_c


def dno_apply(
    params: PhysicalParams,
    eta: np.ndarray,
    psi: np.ndarray,
    order: int = 3,
    dealias_fraction: float = 2.0 / 3.0,
) -> np.ndarray:
    """Dirichlet-Neumann operator truncated at homogeneity `order` in eta.

    Returns grid samples of sum_{r <= order} G_r(eta) psi; order 0 is the
    exact flat operator D tanh(hD) psi.
    """
    eta = np.asarray(eta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    ws = _workspace(params, eta.size, order, dealias_fraction)
    eta_pow = _eta_powers(eta, order, ws.mask)
    g_c = _dno_core(ws, eta, _dx(eta), eta_pow, np.fft.fft(psi), order)
    return np.fft.ifft(g_c).real


def velocity_trace(
    params: PhysicalParams,
    eta: np.ndarray,
    psi: np.ndarray,
    order: int = 3,
    dealias_fraction: float = 2.0 / 3.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Surface velocity components B = (G(eta)psi + eta_x psi_x)/(1+eta_x^2),
    V = psi_x - eta_x B."""
    m = eta.size
    ws = _workspace(params, m, order, dealias_fraction)
    da = lambda u: _dealias(u, ws.mask)
    g = dno_apply(params, eta, psi, order, dealias_fraction)
    eta_x = _dx(np.asarray(eta, dtype=float))
    psi_x = _dx(np.asarray(psi, dtype=float))
    b = da(da(g + da(eta_x * psi_x)) / (1.0 + da(eta_x * eta_x)))
    v = psi_x - da(eta_x * b)
    return b, v


def _rhs_raw(
    params: PhysicalParams,
    eta_c: np.ndarray,
    psi_c: np.ndarray,
    cfg: SolverConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Evolution right-hand side on raw-FFT coefficient arrays.

    eta_t = G(eta) psi
    psi_t = -g eta - psi_x^2/2 + (eta_x psi_x + G(eta)psi)^2 / (2(1+eta_x^2))
            + kappa d_x( eta_x / sqrt(1+eta_x^2) )
    """
    m = eta_c.size
    ws = _workspace(params, m, cfg.dno_order, cfg.dealias_fraction)
    mask = ws.mask
    eta_g = np.fft.ifft(eta_c).real
    eta_x = np.fft.ifft(ws.ik * eta_c).real
    psi_x = np.fft.ifft(ws.ik * psi_c).real
    eta_pow = _eta_powers(eta_g, cfg.dno_order, mask)

    de_c = _dno_core(ws, eta_g, eta_x, eta_pow, psi_c, cfg.dno_order)
    g_psi = np.fft.ifft(de_c).real

    prods = np.fft.fft(np.stack([eta_x * eta_x, eta_x * psi_x, psi_x * psi_x]), axis=1)
    prods[:, ~mask] = 0.0
    eta_x2, cross, psi_x2_c = (
        np.fft.ifft(prods[0]).real,
        np.fft.ifft(prods[1]).real,
        prods[2],
    )
    num = cross + g_psi
    num2_c = np.fft.fft(num * num)
    num2_c[~mask] = 0.0
    ratio = np.fft.ifft(num2_c).real / (1.0 + eta_x2)
    ratio_c = np.fft.fft(ratio)
    cap_c = ws.ik * np.fft.fft(eta_x / np.sqrt(1.0 + eta_x2))
    dp_c = -params.g * eta_c - 0.5 * psi_x2_c + 0.5 * ratio_c + params.kappa * cap_c
    dp_c[~mask] = 0.0
    dp_c[0] = 0.0
    return de_c, dp_c


def rhs(
    params: PhysicalParams,
    state: WaveState,
    cfg: SolverConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side on grid samples: dealiased and mean-projected."""
    de_c, dp_c = _rhs_raw(
        params, np.fft.fft(state.eta), np.fft.fft(state.psi), cfg
    )
    return np.fft.ifft(de_c).real, np.fft.ifft(dp_c).real


def hamiltonian(params: PhysicalParams, state: WaveState, cfg: SolverConfig) -> float:
    """Total energy with the flat-surface capillary constant subtracted.

    H = (1/2) int psi G(eta) psi + (g/2) int eta^2
        + kappa int (sqrt(1 + eta_x^2) - 1).
    """
    m = state.m
    dx_w = 2.0 * np.pi / m
    g_psi = dno_apply(params, state.eta, state.psi, cfg.dno_order, cfg.dealias_fraction)
    kinetic = 0.5 * dx_w * float(np.sum(state.psi * g_psi))
    potential = 0.5 * params.g * dx_w * float(np.sum(state.eta**2))
    eta_x = _dx(state.eta)
    surface = params.kappa * dx_w * float(np.sum(np.sqrt(1.0 + eta_x**2) - 1.0))
    return kinetic + potential + surface


def momentum(state: WaveState) -> float:
    """Horizontal momentum integral of eta_x psi (a prime integral)."""
    dx_w = 2.0 * np.pi / state.m
    return dx_w * float(np.sum(_dx(state.eta) * state.psi))


# ---------------------------------------------------------------------------
# time integration: integrating-factor RK4 in the complex variable
# ---------------------------------------------------------------------------


@dataclass
class WWTrajectory:
    params: PhysicalParams
    config: SolverConfig
    times: np.ndarray
    eta_coeffs: np.ndarray  # (n_records, m)
    psi_coeffs: np.ndarray
    stop_reason: str  # completed | threshold | blowup
    stop_time: float

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> WaveState:
        return WaveState(
            to_grid(self.eta_coeffs[i], real=True),
            to_grid(self.psi_coeffs[i], real=True),
        )

    def mixed_norms(self) -> np.ndarray:
        s = self.config.sobolev_s
        return np.array(
            [
                mixed_norm(self.eta_coeffs[i], self.psi_coeffs[i], s)
                for i in range(len(self))
            ]
        )

    def mode_amplitudes(self, count: int | None = None) -> np.ndarray:
        """|u_k| for k = 1..count of the complex variable along the record."""
        count = count or self.config.mode_amplitudes
        out = np.empty((len(self), count))
        for i in range(len(self)):
            u = to_complex(self.params, self.eta_coeffs[i], self.psi_coeffs[i])
            out[i] = np.abs(u[1 : count + 1])
        return out


def _filter_symbol(m: int, strength: float | None, fraction: float) -> np.ndarray | None:
    if strength is None:
        return None
    n = np.abs(wavenumbers(m)).astype(float)
    cut = math.floor(fraction * (m // 2))
    return np.exp(-strength * (n / max(cut, 1)) ** 36)


def integrate_ww(
    params: PhysicalParams,
    state0: WaveState,
    cfg: SolverConfig,
    stop_threshold: float | None = None,
) -> WWTrajectory:
    """March the system with exact linear rotation and RK4 on the remainder.

    In u = (Lambda psi + i Lambda^{-1} eta)/sqrt(2) the system is
    u_t = i Omega(D) u + N(u); the stage values of classical RK4 are computed
    in the frame rotated by exp(i Omega (t - t_n)), so N = 0 reproduces the
    linear flow to machine precision.  Halts on NaN/overflow or when the
    mixed norm crosses `stop_threshold` (if given); both halt modes leave a
    diagnostic record.
    """
    m = state0.m
    n_steps = max(1, int(round(cfg.t_final / abs(cfg.dt))))
    dt = math.copysign(cfg.t_final / n_steps, cfg.dt)
    om = omega(params, wavenumbers(m))
    e_full = np.exp(1j * om * dt)
    e_half = np.exp(1j * om * dt / 2.0)
    filt = _filter_symbol(m, cfg.filter_strength, cfg.dealias_fraction)
    # the computational model lives in the dealiased band: modes beyond it
    # are not part of the truncation and stay identically zero
    band = _dealias_mask(m, cfg.dealias_fraction)

    eta_c = to_coeffs(state0.eta)
    psi_c = to_coeffs(state0.psi)
    eta_c[0] = 0.0
    psi_c[0] = 0.0
    u = to_complex(params, eta_c, psi_c)
    u[~band] = 0.0

    raw_scale = m / math.sqrt(2.0 * math.pi)  # normalized -> raw FFT coefficients

    def nonlinear(u_c: np.ndarray) -> np.ndarray:
        e_c, p_c = from_complex(params, u_c)
        de_raw, dp_raw = _rhs_raw(params, e_c * raw_scale, p_c * raw_scale, cfg)
        du = to_complex(params, de_raw / raw_scale, dp_raw / raw_scale)
        return du - 1j * om * u_c

    times = [0.0]
    records = [(eta_c.copy(), psi_c.copy())]
    stop_reason = "completed"
    stop_time = cfg.t_final

    for step in range(1, n_steps + 1):
        k1 = nonlinear(u)
        k2 = np.conj(e_half) * nonlinear(e_half * (u + 0.5 * dt * k1))
        k3 = np.conj(e_half) * nonlinear(e_half * (u + 0.5 * dt * k2))
        k4 = np.conj(e_full) * nonlinear(e_full * (u + dt * k3))
        u = e_full * (u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        u[~band] = 0.0
        if filt is not None:
            u = filt * u
        t = step * dt

        e_c, p_c = from_complex(params, u)
        norm = mixed_norm(e_c, p_c, cfg.sobolev_s)
        blowup = not np.isfinite(norm) or norm > cfg.norm_ceiling
        crossed = stop_threshold is not None and norm > stop_threshold
        if step % cfg.record_every == 0 or step == n_steps or blowup or crossed:
            times.append(t)
            records.append((e_c, p_c))
        if blowup or crossed:
            stop_reason = "blowup" if blowup else "threshold"
            stop_time = t
            break

    return WWTrajectory(
        params=params,
        config=cfg,
        times=np.asarray(times),
        eta_coeffs=np.asarray([r[0] for r in records]),
        psi_coeffs=np.asarray([r[1] for r in records]),
        stop_reason=stop_reason,
        stop_time=stop_time,
    )


# ---------------------------------------------------------------------------
# lifespan experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LifespanResult:
    epsilons: tuple[float, ...]
    lifetimes: tuple[float, ...]
    censored: tuple[bool, ...]
    fitted_exponent: float | None
    fitted_intercept: float | None
    threshold_factor: float


def lifespan_seed(
    params: PhysicalParams,
    m: int,
    s: float,
    epsilon: float,
    second_mode: float = 0.5,
) -> WaveState:
    """Seed with eta proportional to cos(x) + second_mode * cos(2x).

    The complex seed u has purely imaginary coefficients on modes 1 and 2
    chosen so the elevation comes out as the target cosine profile; psi
    follows from the inverse complex map, and both fields are rescaled so
    the mixed norm at index s equals epsilon exactly.  second_mode = 0
    gives a single-mode seed (the phase-unlocked configuration that drives
    harmonic growth at Wilton parameters).
    """
    u = np.zeros(m, dtype=complex)
    b1 = 1.0
    b2 = lambda_mult(params, 1) * b1 * second_mode / lambda_mult(params, 2)
    u[1] = 1j * b1
    u[2] = 1j * b2
    eta_c, psi_c = from_complex(params, u)
    raw = mixed_norm(eta_c, psi_c, s)
    scale = epsilon / raw
    return WaveState(
        to_grid(eta_c * scale, real=True), to_grid(psi_c * scale, real=True)
    )


def _check_resolution(state: WaveState, fraction: float) -> None:
    for name, field in (("eta", state.eta), ("psi", state.psi)):
        c = to_coeffs(field)
        mask = _dealias_mask(state.m, fraction)
        tail = np.linalg.norm(c[~mask])
        total = np.linalg.norm(c)
        if total > 0 and tail > 1e-12 * total:
            raise UnderResolvedError(
                f"{name} seed carries {tail/total:.2e} of its norm beyond M/3"
            )


def lifespan_experiment(
    params: PhysicalParams,
    epsilons: list[float],
    s: float,
    threshold_factor: float,
    cfg: SolverConfig,
    t_max_factor: float | None = None,
) -> LifespanResult:
    """Escape times from the threshold_factor * epsilon ball of the seed data.

    Each run integrates until the mixed norm first exceeds
    threshold_factor * epsilon or the time budget is exhausted (censored).
    The budget is cfg.t_final, or t_max_factor * eps^-2 when given.  The
    exponent p of T ~ eps^-p is fit by least squares on uncensored runs.
    """
    if list(epsilons) != sorted(epsilons, reverse=True):
        raise ValueError("epsilons must be descending")
    lifetimes: list[float] = []
    censored: list[bool] = []
    for eps in epsilons:
        seed = lifespan_seed(params, cfg.m, s, eps)
        _check_resolution(seed, cfg.dealias_fraction)
        t_budget = cfg.t_final if t_max_factor is None else t_max_factor / eps**2
        run_cfg = replace(cfg, t_final=t_budget, sobolev_s=s)
        traj = integrate_ww(params, seed, run_cfg, stop_threshold=threshold_factor * eps)
        lifetimes.append(traj.stop_time)
        # a blowup certainly escaped the ball: only a full time budget censors
        censored.append(traj.stop_reason == "completed")
    fit_p = fit_c = None
    xs = [math.log(1.0 / e) for e, c in zip(epsilons, censored) if not c]
    ys = [math.log(t) for t, c in zip(lifetimes, censored) if not c]
    if len(xs) >= 2:
        slope, intercept = np.polyfit(xs, ys, 1)
        fit_p, fit_c = float(slope), float(intercept)
    return LifespanResult(
        epsilons=tuple(epsilons),
        lifetimes=tuple(lifetimes),
        censored=tuple(censored),
        fitted_exponent=fit_p,
        fitted_intercept=fit_c,
        threshold_factor=threshold_factor,
    )
