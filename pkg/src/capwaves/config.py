"""INI-style run configuration shared by all CLI commands.

Sections mirror the module names: [physical], [resonance], [bnf], [flow],
[ww], [lifespan], [output].  Every numeric field is validated against the
module preconditions at load time, so a bad file fails before any work
starts, with the offending key named.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .resonance import DEFAULT_RESONANCE_TOL
from .spectra import PhysicalParams
from .waterwaves import SolverConfig

__all__ = ["RunConfig", "ConfigError", "load_config", "DEFAULT_CONFIG"]


class ConfigError(ValueError):
    """Malformed or out-of-range configuration; message carries location info."""


DEFAULT_CONFIG = """\
[physical]
g = 1.0
kappa = 1.0
depth = inf

[resonance]
max_j = 512
tol = 1e-9
min_gap_exclude = 1e-12
lemma_max_j = 1000

[bnf]
max_j = 64
flow_modes = 16
flow_cutoff = 4
dt = 0.01
t_final = 1000.0
scheme = implicit-midpoint
record_every = 100
sobolev_s = 8.0
seed_amp_1 = 0.04+0.02j
seed_amp_2 = 0.01-0.03j

[ww]
m = 256
dno_order = 3
dt = 0.002
t_final = 100.0
record_every = 250
sobolev_s = 8.0
epsilon = 0.01
dealias = 0.6666666666666666
mode_amplitudes = 4

[lifespan]
epsilons = 0.08 0.04 0.02
threshold_factor = 2.0
s = 8.0
m = 64
dt = 0.01
t_max_factor = 2.0

[output]
directory = runs
threads = 1
"""


@dataclass
class RunConfig:
    params: PhysicalParams
    resonance_max_j: int = 512
    resonance_tol: float = DEFAULT_RESONANCE_TOL
    min_gap_exclude: float = 1e-12
    lemma_max_j: int = 1000
    bnf_max_j: int = 64
    flow_modes: int = 16
    flow_cutoff: float | None = 4.0
    flow_dt: float = 0.01
    flow_t_final: float = 1000.0
    flow_scheme: str = "implicit-midpoint"
    flow_record_every: int = 100
    flow_sobolev_s: float = 8.0
    flow_seed: dict = field(default_factory=lambda: {1: 0.04 + 0.02j, 2: 0.01 - 0.03j})
    ww: SolverConfig = field(default_factory=SolverConfig)
    ww_epsilon: float = 0.01
    lifespan_epsilons: tuple = (0.08, 0.04, 0.02)
    lifespan_threshold: float = 2.0
    lifespan_s: float = 8.0
    lifespan_m: int = 64
    lifespan_dt: float = 0.01
    lifespan_t_max_factor: float = 2.0
    out_dir: str = "runs"
    threads: int = 1
    seed: int = 0


def _get(parser, section, key, conv, default, errors):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return conv(raw)
    except Exception:
        errors.append(f"[{section}] {key} = {raw!r}: cannot parse")
        return default


def _depth(raw: str) -> float:
    if raw.strip().lower() in ("inf", "infinite", "infinity"):
        return math.inf
    return float(raw)


def load_config(path: str | None) -> RunConfig:
    """Parse and validate a config file; None loads the built-in defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is None:
        parser.read_string(DEFAULT_CONFIG)
    else:
        try:
            with open(path, encoding="utf-8") as f:
                parser.read_file(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            # configparser errors carry line numbers in their message
            raise ConfigError(f"parse error in {path}: {exc}") from exc

    errors: list[str] = []
    g = _get(parser, "physical", "g", float, 1.0, errors)
    kappa = _get(parser, "physical", "kappa", float, 1.0, errors)
    depth = _get(parser, "physical", "depth", _depth, math.inf, errors)
    try:
        params = PhysicalParams(g=g, kappa=kappa, depth=depth)
    except ValueError as exc:
        raise ConfigError(f"[physical]: {exc}") from exc

    cfg = RunConfig(params=params)
    cfg.resonance_max_j = _get(parser, "resonance", "max_j", int, 512, errors)
    cfg.resonance_tol = _get(parser, "resonance", "tol", float, DEFAULT_RESONANCE_TOL, errors)
    cfg.min_gap_exclude = _get(parser, "resonance", "min_gap_exclude", float, 1e-12, errors)
    cfg.lemma_max_j = _get(parser, "resonance", "lemma_max_j", int, 1000, errors)

    cfg.bnf_max_j = _get(parser, "bnf", "max_j", int, 64, errors)
    cfg.flow_modes = _get(parser, "bnf", "flow_modes", int, 16, errors)
    cfg.flow_cutoff = _get(parser, "bnf", "flow_cutoff", float, 4.0, errors)
    cfg.flow_dt = _get(parser, "bnf", "dt", float, 0.01, errors)
    cfg.flow_t_final = _get(parser, "bnf", "t_final", float, 1000.0, errors)
    cfg.flow_scheme = _get(parser, "bnf", "scheme", str, "implicit-midpoint", errors)
    cfg.flow_record_every = _get(parser, "bnf", "record_every", int, 100, errors)
    cfg.flow_sobolev_s = _get(parser, "bnf", "sobolev_s", float, 8.0, errors)
    amp1 = _get(parser, "bnf", "seed_amp_1", complex, 0.04 + 0.02j, errors)
    amp2 = _get(parser, "bnf", "seed_amp_2", complex, 0.01 - 0.03j, errors)
    cfg.flow_seed = {1: amp1, 2: amp2}

    filt = _get(parser, "ww", "filter_strength", float, None, errors)
    try:
        cfg.ww = SolverConfig(
            m=_get(parser, "ww", "m", int, 256, errors),
            dno_order=_get(parser, "ww", "dno_order", int, 3, errors),
            dt=_get(parser, "ww", "dt", float, 0.002, errors),
            t_final=_get(parser, "ww", "t_final", float, 100.0, errors),
            dealias_fraction=_get(parser, "ww", "dealias", float, 2.0 / 3.0, errors),
            filter_strength=filt,
            record_every=_get(parser, "ww", "record_every", int, 250, errors),
            sobolev_s=_get(parser, "ww", "sobolev_s", float, 8.0, errors),
            mode_amplitudes=_get(parser, "ww", "mode_amplitudes", int, 4, errors),
        )
    except ValueError as exc:
        raise ConfigError(f"[ww]: {exc}") from exc
    cfg.ww_epsilon = _get(parser, "ww", "epsilon", float, 0.01, errors)

    eps_raw = _get(parser, "lifespan", "epsilons", str, "0.08 0.04 0.02", errors)
    try:
        cfg.lifespan_epsilons = tuple(float(tok) for tok in eps_raw.split())
    except ValueError:
        errors.append(f"[lifespan] epsilons = {eps_raw!r}: cannot parse")
    cfg.lifespan_threshold = _get(parser, "lifespan", "threshold_factor", float, 2.0, errors)
    cfg.lifespan_s = _get(parser, "lifespan", "s", float, 8.0, errors)
    cfg.lifespan_m = _get(parser, "lifespan", "m", int, 64, errors)
    cfg.lifespan_dt = _get(parser, "lifespan", "dt", float, 0.01, errors)
    cfg.lifespan_t_max_factor = _get(parser, "lifespan", "t_max_factor", float, 2.0, errors)

    cfg.out_dir = _get(parser, "output", "directory", str, "runs", errors)
    cfg.threads = _get(parser, "output", "threads", int, 1, errors)

    _validate(cfg, errors)
    if errors:
        raise ConfigError("; ".join(errors))
    return cfg


def _validate(cfg: RunConfig, errors: list[str]) -> None:
    if cfg.resonance_max_j < 1:
        errors.append("[resonance] max_j must be >= 1")
    if cfg.resonance_tol <= 0:
        errors.append("[resonance] tol must be positive")
    if cfg.lemma_max_j < 2:
        errors.append("[resonance] lemma_max_j must be >= 2")
    if cfg.bnf_max_j < 1:
        errors.append("[bnf] max_j must be >= 1")
    if cfg.flow_modes < 1:
        errors.append("[bnf] flow_modes must be >= 1")
    if cfg.flow_dt == 0 or cfg.flow_t_final <= 0:
        errors.append("[bnf] dt must be nonzero and t_final positive")
    if cfg.flow_scheme not in ("implicit-midpoint", "rk4-rotating-frame"):
        errors.append(f"[bnf] unknown scheme {cfg.flow_scheme!r}")
    if any(e <= 0 for e in cfg.lifespan_epsilons):
        errors.append("[lifespan] epsilons must be positive")
    if list(cfg.lifespan_epsilons) != sorted(cfg.lifespan_epsilons, reverse=True):
        errors.append("[lifespan] epsilons must be descending")
    if cfg.lifespan_threshold <= 1.0:
        errors.append("[lifespan] threshold_factor must exceed 1")
    if cfg.threads < 1:
        errors.append("[output] threads must be >= 1")
