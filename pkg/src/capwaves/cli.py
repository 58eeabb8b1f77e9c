"""Command-line surface: reproducible experiments with file outputs.

Subcommands: resonances, min-gap, wilton, coeffs, verify, bnf-flow, ww-sim,
lifespan.  Every command writes CSV data plus a metadata.json echoing the
configuration, tolerances and certified constants.  Exit codes: 0 success,
1 check failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, birkhoff, resonance, resonant_flow, transforms, waterwaves
from .config import ConfigError, RunConfig, load_config
from .spectra import PhysicalParams, certified_remainder_constant

F = "%.17g"  # float serialization: 17 significant digits round-trips exactly


def _fmt(x: float) -> str:
    return F % x


def _out_dir(args, cfg: RunConfig, command: str) -> Path:
    if args.out is not None:
        d = Path(args.out)
    else:
        stamp = time.strftime("%Y%m%d-%H%M%S")
        d = Path(cfg.out_dir) / f"{command}-{stamp}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def _config_echo(cfg: RunConfig) -> dict:
    echo = {}
    for key, val in vars(cfg).items():
        if key == "params":
            continue
        if key == "ww":
            echo["ww"] = {k: v for k, v in vars(val).items()}
        elif key == "flow_seed":
            echo["flow_seed"] = {str(j): [a.real, a.imag] for j, a in val.items()}
        elif isinstance(val, tuple):
            echo[key] = list(val)
        else:
            echo[key] = val
    return echo


def _metadata(cfg: RunConfig, extra: dict) -> dict:
    p = cfg.params
    meta = {
        "version": __version__,
        "params": {
            "g": p.g,
            "kappa": p.kappa,
            "depth": "inf" if p.infinite_depth else p.depth,
        },
        "config": _config_echo(cfg),
        "resonance_tol": cfg.resonance_tol,
        "dno_order": cfg.ww.dno_order,
        "certified_remainder_constant": certified_remainder_constant(p),
        "resonance_cutoff": resonance.resonance_cutoff(p),
        "seed": cfg.seed,
        "threads": cfg.threads,
    }
    meta.update(extra)
    return meta


def _write_metadata(directory: Path, cfg: RunConfig, extra: dict) -> None:
    t0 = extra.pop("_t0", None)
    if t0 is not None:
        extra["wall_time_s"] = time.time() - t0
    with open(directory / "metadata.json", "w", encoding="utf-8") as f:
        json.dump(_metadata(cfg, extra), f, indent=2, sort_keys=True)
        f.write("\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(
                ",".join(
                    _fmt(v) if isinstance(v, float) else str(v) for v in row
                )
                + "\n"
            )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_resonances(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "resonances")
    triples = resonance.enumerate_resonances(
        cfg.params, cfg.resonance_max_j, cfg.resonance_tol
    )
    rows = []
    for t in triples:
        (s1, j1), (s2, j2), (s3, j3) = ((m.sigma, m.j) for m in t.modes)
        rows.append([s1, j1, s2, j2, s3, j3, float(t.phase)])
    _write_csv(
        out / "resonances.csv",
        ["sigma1", "j1", "sigma2", "j2", "sigma3", "j3", "phase"],
        rows,
    )
    gap, witness = resonance.min_gap(
        cfg.params, min(cfg.resonance_max_j, 256), cfg.min_gap_exclude
    )
    _write_metadata(
        out,
        cfg,
        {
            "_t0": t0,
            "command": "resonances",
            "max_j": cfg.resonance_max_j,
            "count": len(triples),
            "min_gap": gap,
        },
    )
    print(f"resonances: {len(triples)} canonical triads (max_j={cfg.resonance_max_j})")
    print(f"min gap above tolerance: {gap:.6e}")
    return 0


def cmd_min_gap(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "min-gap")
    gap, witness = resonance.min_gap(
        cfg.params, cfg.resonance_max_j, cfg.min_gap_exclude
    )
    modes = [[m.sigma, m.j] for m in witness.modes]
    _write_csv(
        out / "min_gap.csv",
        ["gap", "sigma1", "j1", "sigma2", "j2", "sigma3", "j3"],
        [[float(gap)] + [x for pair in modes for x in pair]],
    )
    _write_metadata(out, cfg, {"_t0": t0, "command": "min-gap", "gap": gap})
    print(f"min gap {gap:.12e} at witness {modes}")
    return 0


def cmd_wilton(args, cfg: RunConfig) -> int:
    kappa = resonance.wilton_kappa(cfg.params.g, cfg.params.depth, args.j)
    print(_fmt(kappa))
    if args.out is not None:
        out = _out_dir(args, cfg, "wilton")
        _write_csv(out / "wilton.csv", ["j", "kappa"], [[args.j, kappa]])
        _write_metadata(
            out, cfg, {"command": "wilton", "j": args.j, "kappa": kappa}
        )
    return 0


def cmd_coeffs(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "coeffs")
    ham = birkhoff.assemble_resonant_hamiltonian(
        cfg.params, cfg.bnf_max_j, cfg.resonance_tol
    )
    birkhoff.save_table(ham, out / "resonant_table.txt", cfg.resonance_tol)
    full = birkhoff.assemble_cubic_from_formula(cfg.params, min(cfg.bnf_max_j, 20))
    birkhoff.save_table(full, out / "cubic_table.txt", cfg.resonance_tol)
    _write_metadata(
        out,
        cfg,
        {
            "_t0": t0,
            "command": "coeffs",
            "resonant_terms": len(ham.terms),
            "cubic_terms": len(full.terms),
        },
    )
    print(f"coeffs: {len(ham.terms)} resonant keys, {len(full.terms)} cubic keys")
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "verify")
    checks: list[tuple[str, bool, str]] = []

    report = resonance.verify_lemma_bounds(cfg.params, cfg.lemma_max_j)
    checks.append(
        (
            "superadditivity_sweep",
            not report.superadditivity_violations,
            f"max_j={cfg.lemma_max_j}, violations={len(report.superadditivity_violations)}",
        )
    )
    checks.append(
        (
            "divisor_lower_bound_sweep",
            not report.divisor_violations,
            f"max_j={cfg.lemma_max_j}, violations={len(report.divisor_violations)}",
        )
    )

    max_j = min(cfg.bnf_max_j, 20)
    if args.table is not None:
        _, terms = birkhoff.load_table(args.table)
        formula = birkhoff.CubicHamiltonian(params=cfg.params, terms=terms)
    else:
        formula = birkhoff.assemble_cubic_from_formula(cfg.params, max_j)
    expanded = birkhoff.expand_h3_from_real(cfg.params, max_j)
    worst = 0.0
    same_keys = set(formula.terms) == set(expanded.terms)
    if same_keys:
        for k, c in expanded.terms.items():
            worst = max(worst, abs(c - formula.terms[k]))
    checks.append(
        (
            "coefficient_oracle",
            same_keys and worst < 1e-12,
            f"max_j={max_j}, keys_match={same_keys}, worst={worst:.3e}",
        )
    )

    ham = birkhoff.assemble_resonant_hamiltonian(
        cfg.params, cfg.bnf_max_j, cfg.resonance_tol
    )
    h2 = birkhoff.h2_table(cfg.params, sorted(ham.support()))
    bracket = birkhoff.poisson_bracket(ham, h2)
    worst_b = max((abs(v) for v in bracket.values()), default=0.0)
    checks.append(
        ("bracket_cancellation", worst_b < 1e-13, f"max |coeff| = {worst_b:.3e}")
    )

    rng = np.random.default_rng(cfg.seed)
    worst_h = 0.0
    for _ in range(50):
        r = _random_homological_instance(rng, cfg.params, 200)
        _, resid = birkhoff.solve_homological(cfg.params, r, cfg.resonance_tol)
        worst_h = max(worst_h, resid)
    checks.append(
        ("homological_residual", worst_h < 1e-12, f"max residual = {worst_h:.3e}")
    )

    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name:28s} {detail}")
    payload = {
        "checks": [
            {"name": n, "pass": ok, "detail": d} for n, ok, d in checks
        ]
    }
    with open(out / "verify.json", "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    _write_metadata(out, cfg, {"_t0": t0, "command": "verify", "lemma_max_j": cfg.lemma_max_j})
    failures = [n for n, ok, _ in checks if not ok]
    if failures:
        print("failed checks: " + ", ".join(failures))
        return 1
    return 0


def _random_homological_instance(rng, params: PhysicalParams, size: int) -> dict:
    r = {}
    while len(r) < size:
        s, sp, eps = (int(x) for x in rng.choice([1, -1], 3))
        n = int(rng.integers(1, 40)) * int(rng.choice([1, -1]))
        k = int(rng.integers(1, 40)) * int(rng.choice([1, -1]))
        mom = eps * n + sp * k
        if mom == 0:
            continue
        j = s * mom
        r[(s, sp, eps, n, k, j)] = complex(rng.normal(), rng.normal())
    return r


def cmd_bnf_flow(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "bnf-flow")
    ham = birkhoff.assemble_resonant_hamiltonian(
        cfg.params, cfg.bnf_max_j, cfg.resonance_tol
    )
    z0 = resonant_flow.SpectralState.zeros(cfg.params, cfg.flow_modes)
    for j, amp in cfg.flow_seed.items():
        z0.set_coeff(j, amp)
    fcfg = resonant_flow.FlowConfig(
        dt=cfg.flow_dt,
        t_final=cfg.flow_t_final,
        scheme=cfg.flow_scheme,
        record_every=cfg.flow_record_every,
        sobolev_s=cfg.flow_sobolev_s,
        cutoff=cfg.flow_cutoff,
    )
    traj = resonant_flow.integrate_resonant(cfg.params, ham, z0, fcfg)
    diag = resonant_flow.flow_diagnostics(traj, ham)
    rows = [
        [
            float(diag.times[i]),
            float(diag.h2_low[i]),
            float(diag.h3[i]),
            float(diag.momentum[i]),
            float(diag.sobolev[i]),
            float(diag.equiv_norm[i]),
        ]
        for i in range(len(diag.times))
    ]
    _write_csv(
        out / "flow.csv",
        ["t", "H2", "H3", "momentum", "sobolev_s_norm", "equiv_norm"],
        rows,
    )
    amp_rows = []
    for i in range(len(traj)):
        z = traj.state(i)
        amp_rows.append(
            [float(traj.times[i])]
            + [float(abs(z.coeff(k))) for k in range(1, 5)]
        )
    _write_csv(
        out / "flow_modes.csv",
        ["t"] + [f"mode_amp_{k}" for k in range(1, 5)],
        amp_rows,
    )
    _write_metadata(
        out,
        cfg,
        {
            "_t0": t0,
            "command": "bnf-flow",
            "scheme": cfg.flow_scheme,
            "drift_h2": diag.relative_drift(diag.h2_low),
            "drift_h3": diag.relative_drift(diag.h3),
            "drift_momentum": diag.relative_drift(diag.momentum),
        },
    )
    print(
        f"bnf-flow: T={cfg.flow_t_final}, drifts H2 {diag.relative_drift(diag.h2_low):.2e} "
        f"H3 {diag.relative_drift(diag.h3):.2e} P {diag.relative_drift(diag.momentum):.2e}"
    )
    return 0


def cmd_ww_sim(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "ww-sim")
    seed = waterwaves.lifespan_seed(
        cfg.params, cfg.ww.m, cfg.ww.sobolev_s, cfg.ww_epsilon
    )
    traj = waterwaves.integrate_ww(cfg.params, seed, cfg.ww)
    amps = traj.mode_amplitudes()
    rows = []
    for i in range(len(traj)):
        st = traj.state(i)
        rows.append(
            [
                float(traj.times[i]),
                waterwaves.hamiltonian(cfg.params, st, cfg.ww),
                float(st.eta.mean()),
                waterwaves.momentum(st),
                float(
                    transforms.mixed_norm(
                        traj.eta_coeffs[i], traj.psi_coeffs[i], cfg.ww.sobolev_s
                    )
                ),
            ]
            + [float(a) for a in amps[i]]
        )
    k = amps.shape[1]
    _write_csv(
        out / "ww.csv",
        ["t", "H", "mass", "momentum", "mixed_norm"]
        + [f"mode_amp_{i}" for i in range(1, k + 1)],
        rows,
    )
    _write_metadata(
        out,
        cfg,
        {
            "_t0": t0,
            "command": "ww-sim",
            "epsilon": cfg.ww_epsilon,
            "stop_reason": traj.stop_reason,
            "stop_time": traj.stop_time,
        },
    )
    print(f"ww-sim: {len(traj)} records, stop={traj.stop_reason} at t={traj.stop_time}")
    return 0


def cmd_lifespan(args, cfg: RunConfig) -> int:
    t0 = time.time()
    out = _out_dir(args, cfg, "lifespan")
    wcfg = waterwaves.SolverConfig(
        m=cfg.lifespan_m,
        dno_order=cfg.ww.dno_order,
        dt=cfg.lifespan_dt,
        t_final=1.0,  # superseded per-run by t_max_factor / eps^2
        record_every=10**9,
        sobolev_s=cfg.lifespan_s,
    )
    result = waterwaves.lifespan_experiment(
        cfg.params,
        list(cfg.lifespan_epsilons),
        cfg.lifespan_s,
        cfg.lifespan_threshold,
        wcfg,
        t_max_factor=cfg.lifespan_t_max_factor,
    )
    p_fit = result.fitted_exponent
    c_fit = result.fitted_intercept
    rows = [
        [
            float(e),
            float(t),
            int(c),
            float("nan") if p_fit is None else p_fit,
            float("nan") if c_fit is None else c_fit,
        ]
        for e, t, c in zip(result.epsilons, result.lifetimes, result.censored)
    ]
    _write_csv(
        out / "lifespan.csv",
        ["epsilon", "T_eps", "censored_flag", "fit_p", "fit_logc"],
        rows,
    )
    _write_metadata(
        out,
        cfg,
        {
            "_t0": t0,
            "command": "lifespan",
            "fitted_exponent": p_fit,
            "censored": list(result.censored),
            "threshold_factor": cfg.lifespan_threshold,
        },
    )
    status = "all censored" if all(result.censored) else f"p = {p_fit}"
    print(f"lifespan: {status}; lifetimes {list(result.lifetimes)}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="capwaves",
        description="gravity-capillary water-wave experiments",
    )
    ap.add_argument("--config", default=None, help="INI config file (defaults built in)")
    ap.add_argument("--out", default=None, help="output directory (default: timestamped)")
    ap.add_argument("--seed", type=int, default=0, help="RNG seed for randomized checks")
    ap.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("resonances", help="enumerate resonant triads")
    sub.add_parser("min-gap", help="smallest nonresonant phase and witness")
    w = sub.add_parser("wilton", help="surface tension of the (2j;j,j) resonance")
    w.add_argument("--j", type=int, default=1)
    sub.add_parser("coeffs", help="export cubic coefficient tables")
    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--table", default=None, help="check a stored table against the oracle")
    sub.add_parser("bnf-flow", help="integrate the truncated resonant system")
    sub.add_parser("ww-sim", help="integrate the full water-wave system")
    sub.add_parser("lifespan", help="epsilon-sweep lifespan experiment")
    return ap


_COMMANDS = {
    "resonances": cmd_resonances,
    "min-gap": cmd_min_gap,
    "wilton": cmd_wilton,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
    "bnf-flow": cmd_bnf_flow,
    "ww-sim": cmd_ww_sim,
    "lifespan": cmd_lifespan,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    try:
        return _COMMANDS[args.command](args, cfg)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
