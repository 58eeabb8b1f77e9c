"""Acceptance suite: one test per headline criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS lines and timings.  The slowest entry is the lifespan sweep (a few
minutes; budget 30 min); everything else finishes in seconds to ~2 minutes.
"""

import math
import time

import numpy as np
import pytest

from capwaves import birkhoff as bk
from capwaves.elliptic import dno_reference
from capwaves.resonance import (
    SignedMode,
    enumerate_resonances,
    verify_lemma_bounds,
)
from capwaves.resonant_flow import (
    FlowConfig,
    SpectralState,
    flow_diagnostics,
    integrate_resonant,
)
from capwaves.spectra import PhysicalParams, omega
from capwaves.transforms import good_unknown, grid, to_complex
from capwaves.waterwaves import (
    SolverConfig,
    integrate_ww,
    hamiltonian,
    lifespan_experiment,
    lifespan_seed,
    momentum,
)

INF = math.inf
GENERIC = PhysicalParams(1.0, 1.0, INF)
WILTON = PhysicalParams(1.0, 0.5, INF)


def report(name, ok, detail, elapsed):
    print(f"{'PASS' if ok else 'FAIL'}  {name:34s} {detail}  [{elapsed:.1f}s]")


def test_inequality_sweep():
    t0 = time.perf_counter()
    n2, n3 = np.meshgrid(
        np.arange(1, 1001, dtype=float), np.arange(1, 1001, dtype=float), indexing="ij"
    )
    mask = n3 <= n2
    lhs = (n2 + n3) ** 1.5 - n2**1.5 - n3**1.5
    violations = int(np.count_nonzero(mask & (lhs < np.sqrt(n2) / 5.0)))
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 1.0
    report("inequality-sweep", ok, f"violations={violations}", elapsed)
    assert violations == 0
    assert elapsed < 1.0


def test_resonance_ground_truth():
    t0 = time.perf_counter()
    wilton = enumerate_resonances(WILTON, 512, 1e-9)
    generic = enumerate_resonances(GENERIC, 512, 1e-9)
    elapsed = time.perf_counter() - t0
    orbit = {
        (SignedMode(1, 2), SignedMode(-1, 1), SignedMode(-1, 1)),
        (SignedMode(1, -2), SignedMode(-1, -1), SignedMode(-1, -1)),
    }
    ok = {t.modes for t in wilton} == orbit and generic == [] and elapsed < 10.0
    report(
        "resonance-ground-truth",
        ok,
        f"wilton={len(wilton)} triads, generic={len(generic)}",
        elapsed,
    )
    assert {t.modes for t in wilton} == orbit
    assert generic == []
    assert elapsed < 10.0


def test_coefficient_oracle():
    t0 = time.perf_counter()
    formula = bk.assemble_cubic_from_formula(WILTON, 20)
    expanded = bk.expand_h3_from_real(WILTON, 20)
    same_keys = set(formula.terms) == set(expanded.terms)
    worst = (
        max(abs(formula.terms[k] - expanded.terms[k]) for k in formula.terms)
        if same_keys
        else math.inf
    )
    elapsed = time.perf_counter() - t0
    ok = same_keys and worst < 1e-12 and elapsed < 30.0
    report("coefficient-oracle", ok, f"worst entry diff={worst:.2e}", elapsed)
    assert same_keys
    assert worst < 1e-12
    assert elapsed < 30.0


def test_bracket_cancellation():
    t0 = time.perf_counter()
    ham = bk.assemble_resonant_hamiltonian(WILTON, 64)
    h2 = bk.h2_table(WILTON, sorted(ham.support()))
    bracket = bk.poisson_bracket(ham, h2)
    worst = max((abs(v) for v in bracket.values()), default=0.0)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-13
    report("bracket-cancellation", ok, f"max |coeff|={worst:.2e}", elapsed)
    assert worst < 1e-13


def test_homological_residual():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(50):
        r = {}
        while len(r) < 200:
            s, sp, eps = (int(x) for x in rng.choice([1, -1], 3))
            n = int(rng.integers(1, 40)) * int(rng.choice([1, -1]))
            k = int(rng.integers(1, 40)) * int(rng.choice([1, -1]))
            mom = eps * n + sp * k
            if mom == 0:
                continue
            r[(s, sp, eps, n, k, s * mom)] = complex(rng.normal(), rng.normal())
        _, resid = bk.solve_homological(WILTON, r)
        worst = max(worst, resid)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12
    report("homological-residual", ok, f"max residual={worst:.2e}", elapsed)
    assert worst < 1e-12


def test_resonant_flow_conservation():
    t0 = time.perf_counter()
    ham = bk.assemble_resonant_hamiltonian(WILTON, 64)
    z0 = SpectralState.zeros(WILTON, 16)
    z0.set_coeff(1, 0.04 + 0.02j)
    z0.set_coeff(2, 0.01 - 0.03j)
    z0.set_coeff(7, 0.005 + 0.0j)
    z0.set_coeff(-9, 0.003j)
    cfg = FlowConfig(dt=0.01, t_final=1000.0, record_every=1000, cutoff=4.0)
    traj = integrate_resonant(WILTON, ham, z0, cfg)
    diag = flow_diagnostics(traj, ham)
    d_h2 = diag.relative_drift(diag.h2_low)
    d_h3 = diag.relative_drift(diag.h3)
    d_p = diag.relative_drift(diag.momentum)
    bit_exact = all(
        np.array_equal(traj.high_mode_moduli(i), traj.high_mode_moduli(0))
        for i in range(len(traj))
    )
    elapsed = time.perf_counter() - t0
    ok = d_h2 < 1e-8 and d_h3 < 1e-8 and d_p < 1e-8 and bit_exact and elapsed < 60.0
    report(
        "resonant-flow-conservation",
        ok,
        f"drifts H2={d_h2:.1e} H3={d_h3:.1e} P={d_p:.1e} bit-exact={bit_exact}",
        elapsed,
    )
    assert d_h2 < 1e-8 and d_h3 < 1e-8 and d_p < 1e-8
    assert bit_exact
    assert elapsed < 60.0


def test_full_solver_conservation_and_dno_oracle():
    t0 = time.perf_counter()
    m, s, eps = 256, 8.0, 0.01
    seed = lifespan_seed(GENERIC, m, s, eps)
    cfg = SolverConfig(m=m, dt=0.004, t_final=100.0, record_every=2500, sobolev_s=s)
    traj = integrate_ww(GENERIC, seed, cfg)
    h = np.array([hamiltonian(GENERIC, traj.state(i), cfg) for i in range(len(traj))])
    p = np.array([momentum(traj.state(i)) for i in range(len(traj))])
    d_h = float(np.max(np.abs(h - h[0])) / abs(h[0]))
    d_p = float(np.max(np.abs(p - p[0])) / abs(p[0]))

    pfd = PhysicalParams(1.0, 1.0, 1.0)
    x = grid(512)
    eta_f = 0.05 * np.cos(x)
    psi_f = np.sin(x) + 0.5 * np.cos(2 * x)
    from capwaves.waterwaves import dno_apply

    got = dno_apply(pfd, eta_f, psi_f, order=3)
    ref = dno_reference(pfd, eta_f, psi_f, ns=128)
    dno_rel = float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))

    elapsed = time.perf_counter() - t0
    ok = d_h < 1e-6 and d_p < 1e-8 and dno_rel < 1e-4 and elapsed < 300.0
    report(
        "full-solver-conservation",
        ok,
        f"H drift={d_h:.1e} P drift={d_p:.1e} DNO vs elliptic={dno_rel:.1e}",
        elapsed,
    )
    assert d_h < 1e-6
    assert d_p < 1e-8
    assert dno_rel < 1e-4
    assert elapsed < 300.0


def test_lifespan_scaling():
    t0 = time.perf_counter()
    cfg = SolverConfig(m=64, dt=0.02, t_final=1.0, record_every=10**9, sobolev_s=8.0)
    res = lifespan_experiment(
        GENERIC, [0.08, 0.04, 0.02], 8.0, 2.0, cfg, t_max_factor=2.0
    )
    elapsed = time.perf_counter() - t0
    all_censored = all(res.censored)
    p_ok = res.fitted_exponent is not None and res.fitted_exponent >= 1.8
    ok = (p_ok or all_censored) and elapsed < 1800.0
    detail = (
        f"all runs censored at T_max = 2 eps^-2 (T={list(res.lifetimes)})"
        if all_censored
        else f"fitted p={res.fitted_exponent:.2f}"
    )
    report("lifespan-scaling", ok, detail, elapsed)
    assert p_ok or all_censored
    assert elapsed < 1800.0


def test_normal_form_correspondence():
    t0 = time.perf_counter()
    eps, t_final, m = 0.02, 50.0, 128
    # mode-1 seed of size eps in the s=1 mixed norm: the phase-unlocked
    # configuration with visible harmonic growth over t <= 1/eps
    seed = lifespan_seed(WILTON, m, 1.0, eps, second_mode=0.0)
    cfg = SolverConfig(m=m, dt=0.01, t_final=t_final, record_every=50, sobolev_s=1.0)
    traj = integrate_ww(WILTON, seed, cfg)

    def to_z(i):
        ec, pc = traj.eta_coeffs[i], traj.psi_coeffs[i]
        return to_complex(WILTON, ec, good_unknown(WILTON, ec, pc))

    z_full = [to_z(i) for i in range(len(traj))]
    n_modes = 8
    z0 = SpectralState.zeros(WILTON, n_modes)
    for j in range(-n_modes, n_modes + 1):
        if j != 0:
            z0.set_coeff(j, z_full[0][j])
    ham = bk.assemble_resonant_hamiltonian(WILTON, 64)
    rtraj = integrate_resonant(
        WILTON, ham, z0, FlowConfig(dt=0.01, t_final=t_final, record_every=50, cutoff=4.0)
    )
    assert np.allclose(traj.times, rtraj.times)

    worst = 0.0
    for j in (1, 2):
        af = np.array([abs(z_full[i][j]) for i in range(len(traj))])
        ar = np.array([abs(rtraj.state(i).coeff(j)) for i in range(len(rtraj))])
        worst = max(worst, float(np.max(np.abs(af - ar)) / ar.max()))
    # growth of the harmonic is the signal being compared
    a2 = np.array([abs(rtraj.state(i).coeff(2)) for i in range(len(rtraj))])
    grew = a2.max() > 10.0 * max(a2[0], 1e-15)
    elapsed = time.perf_counter() - t0
    ok = worst <= 0.2 and grew
    report(
        "normal-form-correspondence",
        ok,
        f"worst rel amplitude diff={worst:.1e}, harmonic grew to {a2.max():.1e}",
        elapsed,
    )
    assert grew
    assert worst <= 0.2
