"""Three-wave resonance detection for the gravity-capillary dispersion relation.

A triad is a triple of signed modes (sigma_i, j_i) with exact integer momentum
sigma_1 j_1 + sigma_2 j_2 + sigma_3 j_3 = 0; it is resonant when the frequency
phase sigma_1 Omega(j_1) + sigma_2 Omega(j_2) + sigma_3 Omega(j_3) also
vanishes (within a documented tolerance).  Exact resonances are confined to
finitely many modes; this module enumerates them, measures the small divisors
above the resonant set, computes the finiteness cutoff, and solves for the
Wilton-ripple surface tension that makes (2j; j, j) exactly resonant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .spectra import PhysicalParams, certified_remainder_constant, omega

__all__ = [
    "DEFAULT_RESONANCE_TOL",
    "SignedMode",
    "Triple",
    "canonical_modes",
    "phase_of",
    "enumerate_resonances",
    "min_gap",
    "resonance_cutoff",
    "wilton_kappa",
    "verify_lemma_bounds",
    "LemmaReport",
]

# Single source of truth for "is this phase a resonance": shared by the
# enumerator, the kernel projector and the homological-equation solver.
DEFAULT_RESONANCE_TOL = 1e-9


@dataclass(frozen=True, order=True)
class SignedMode:
    """A sign sigma in {+1, -1} paired with a nonzero Fourier index j."""

    sigma: int
    j: int

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")
        if self.j == 0:
            raise ValueError("mode index must be nonzero")

    def flipped(self) -> "SignedMode":
        return SignedMode(-self.sigma, self.j)


@dataclass(frozen=True)
class Triple:
    """A canonical momentum-conserving triad with its frequency phase."""

    modes: tuple[SignedMode, SignedMode, SignedMode]
    phase: float

    def momentum(self) -> int:
        return sum(m.sigma * m.j for m in self.modes)

    def max_index(self) -> int:
        return max(abs(m.j) for m in self.modes)

    def sort_key(self):
        return tuple((-m.sigma, -abs(m.j), -m.j) for m in self.modes)


def canonical_modes(
    modes: Iterable[SignedMode],
) -> tuple[SignedMode, SignedMode, SignedMode]:
    """Canonical representative of a triad orbit under permutation + global flip.

    The mode of largest |j| is unique in any momentum-conserving triple (two
    slots sharing the maximal |j| would force the third index to 0 or beyond
    the maximum), so: flip all signs if that mode has sigma = -1, then order
    the sigma = +1 block before the sigma = -1 block, each block sorted by
    decreasing |j| (ties by decreasing j).  Idempotent by construction, and a
    triple and its global sign flip map to the same key.
    """
    ms = list(modes)
    if len(ms) != 3:
        raise ValueError("a triad has exactly three modes")
    top = max(ms, key=lambda m: abs(m.j))
    if top.sigma < 0:
        ms = [m.flipped() for m in ms]
    ms.sort(key=lambda m: (-m.sigma, -abs(m.j), -m.j))
    return ms[0], ms[1], ms[2]


def phase_of(params: PhysicalParams, modes: Iterable[SignedMode]) -> float:
    """Frequency phase sum sigma_i Omega(j_i); momentum is not required."""
    total = 0.0
    for m in modes:
        if m.j == 0:
            raise ValueError("mode index must be nonzero")
        total += m.sigma * omega(params, m.j)
    return total


def _sign_combos():
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                yield s1, s2, s3


def _momentum_sweep(params: PhysicalParams, max_j: int):
    """Vectorized sweep over all momentum-conserving triads with max|j| <= max_j.

    Yields (s1, s2, s3, t1, t2, t3, phase) arrays where t_i = sigma_i j_i is
    the signed momentum contribution, so j_i = |t_i| and the slot sign is
    s_i.  Fixing (t1, t2) and solving t3 = -t1 - t2 makes the sweep
    O(max_j^2) per sign choice instead of O(max_j^3).
    """
    t = np.concatenate([np.arange(-max_j, 0), np.arange(1, max_j + 1)])
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    t1 = t1.ravel()
    t2 = t2.ravel()
    t3 = -t1 - t2
    keep = (t3 != 0) & (np.abs(t3) <= max_j)
    t1, t2, t3 = t1[keep], t2[keep], t3[keep]
    om_table = omega(params, np.arange(0, max_j + 1, dtype=float))
    om1 = om_table[np.abs(t1)]
    om2 = om_table[np.abs(t2)]
    om3 = om_table[np.abs(t3)]
    for s1, s2, s3 in _sign_combos():
        phase = s1 * om1 + s2 * om2 + s3 * om3
        yield s1, s2, s3, t1, t2, t3, phase


def _triple_from_signed(params, s1, s2, s3, t1, t2, t3) -> Triple:
    # slot (sigma, j) with momentum contribution t = sigma * j, hence j = sigma * t
    modes = canonical_modes(
        [
            SignedMode(s1, s1 * int(t1)),
            SignedMode(s2, s2 * int(t2)),
            SignedMode(s3, s3 * int(t3)),
        ]
    )
    return Triple(modes=modes, phase=phase_of(params, modes))


def enumerate_resonances(
    params: PhysicalParams,
    max_j: int,
    tol: float = DEFAULT_RESONANCE_TOL,
) -> list[Triple]:
    """All canonical resonant triads with max|j_i| <= max_j and |phase| <= tol.

    Returned sorted lexicographically on the canonical key; the empty list is
    a valid result (and the correct one at generic parameters).
    """
    if max_j < 1:
        raise ValueError("max_j must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    found: dict[tuple, Triple] = {}
    for s1, s2, s3, t1, t2, t3, phase in _momentum_sweep(params, max_j):
        hits = np.nonzero(np.abs(phase) <= tol)[0]
        for i in hits:
            trip = _triple_from_signed(params, s1, s2, s3, t1[i], t2[i], t3[i])
            found[trip.modes] = trip
    return sorted(found.values(), key=Triple.sort_key)


def min_gap(
    params: PhysicalParams,
    max_j: int,
    exclude_tol: float = 1e-12,
) -> tuple[float, Triple]:
    """Smallest |phase| over momentum triads with max|j| <= max_j, |phase| > exclude_tol.

    An empirical lower bound for the uniform small-divisor constant, together
    with the minimizing triad as a witness.
    """
    if max_j < 2:
        raise ValueError("max_j must be >= 2")
    best = np.inf
    witness = None
    for s1, s2, s3, t1, t2, t3, phase in _momentum_sweep(params, max_j):
        ap = np.abs(phase)
        ap[ap <= exclude_tol] = np.inf
        i = int(np.argmin(ap))
        if ap[i] < best:
            best = float(ap[i])
            witness = (s1, s2, s3, t1[i], t2[i], t3[i])
    assert witness is not None
    return best, _triple_from_signed(params, *witness)


def resonance_cutoff(params: PhysicalParams) -> float:
    """Finiteness cutoff: every exact resonance satisfies max|j_i| < 2 (30 C)^2 / kappa.

    C is the certified dispersion-remainder constant, so the cutoff inherits
    its (conservative, documented) empirical character.
    """
    c = certified_remainder_constant(params)
    return 2.0 * (30.0 * c) ** 2 / params.kappa


def wilton_kappa(g: float, depth: float, j: int = 1) -> float:
    """Surface tension making the harmonic triad (2j; j, j) exactly resonant.

    Solves Omega(2j) = 2 Omega(j) for kappa.  In infinite depth the closed
    form is kappa = g / (2 j^2); at finite depth the root is bracketed and
    bisected to relative 1e-14.
    """
    if not g > 0:
        raise ValueError("wilton_kappa requires g > 0")
    if j < 1:
        raise ValueError("mode index j must be >= 1")
    if np.isinf(depth):
        return g / (2.0 * j * j)

    def mismatch(kappa: float) -> float:
        p = PhysicalParams(g=g, kappa=kappa, depth=depth)
        return omega(p, 2 * j) - 2.0 * omega(p, j)

    # mismatch < 0 as kappa -> 0 (tanh subadditivity) and > 0 for large kappa
    lo = 1e-12
    hi = g
    tries = 0
    while mismatch(hi) <= 0:
        hi *= 2.0
        tries += 1
        if tries > 200:
            raise RuntimeError(
                f"no sign change while expanding bracket: kappa in ({lo}, {hi})"
            )
    if mismatch(lo) >= 0:
        raise RuntimeError(f"bracket failure: mismatch({lo}) >= 0, bracket ({lo}, {hi})")
    while hi - lo > 1e-14 * hi:
        mid = 0.5 * (lo + hi)
        if mismatch(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of the superadditivity and small-divisor inequality sweeps."""

    params: PhysicalParams
    max_j: int
    product_threshold: float
    superadditivity_violations: tuple[tuple[int, int], ...]
    divisor_violations: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.superadditivity_violations and not self.divisor_violations


def verify_lemma_bounds(params: PhysicalParams, max_j: int) -> LemmaReport:
    """Sweep the two inequalities behind the finitely-many-resonances argument.

    (a) (n2+n3)^{3/2} - n2^{3/2} - n3^{3/2} >= sqrt(n2)/5 for 1 <= n3 <= n2 <= max_j;
    (b) |Omega(n2+n3) - Omega(n2) - Omega(n3)| >= sqrt(n2) sqrt(kappa)/10 for
        momentum triads with n2 n3 >= (30 C)^2 / kappa.
    Violations are report content, never exceptions.
    """
    if max_j < 2:
        raise ValueError("max_j must be >= 2")
    n2, n3 = np.meshgrid(
        np.arange(1, max_j + 1, dtype=float),
        np.arange(1, max_j + 1, dtype=float),
        indexing="ij",
    )
    mask = n3 <= n2
    lhs_a = (n2 + n3) ** 1.5 - n2**1.5 - n3**1.5
    bad_a = mask & (lhs_a < np.sqrt(n2) / 5.0)

    c = certified_remainder_constant(params)
    threshold = (30.0 * c) ** 2 / params.kappa
    lhs_b = np.abs(
        omega(params, n2 + n3) - omega(params, n2) - omega(params, n3)
    )
    bad_b = mask & (n2 * n3 >= threshold) & (
        lhs_b < np.sqrt(n2) * np.sqrt(params.kappa) / 10.0
    )

    viol_a = tuple(
        (int(a), int(b)) for a, b in zip(n2[bad_a], n3[bad_a])
    )
    viol_b = tuple(
        (int(a), int(b)) for a, b in zip(n2[bad_b], n3[bad_b])
    )
    return LemmaReport(
        params=params,
        max_j=max_j,
        product_threshold=threshold,
        superadditivity_violations=viol_a,
        divisor_violations=viol_b,
    )
