"""Cubic Hamiltonian coefficient tables in complex coordinates.

Monomials z^{s1}_{j1} z^{s2}_{j2} z^{s3}_{j3} (with z^+ = z, z^- = conj z)
are keyed by the sorted tuple of their (sigma, j) factors.  The multi-indexed
sums of the theory run over *ordered* tuples; storage keeps one symmetrized
coefficient per canonical key, and the orbit multiplicity (number of distinct
orderings) restores the ordered-sum semantics in evaluation, differentiation
and serialization.  Double counting lives nowhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, Tuple

from .resonance import DEFAULT_RESONANCE_TOL, SignedMode, enumerate_resonances
from .spectra import PhysicalParams, g0_mult, lambda_mult, omega

__all__ = [
    "CubicHamiltonian",
    "monomial_key",
    "orbit_multiplicity",
    "flip_key",
    "h3_coefficient",
    "assemble_resonant_hamiltonian",
    "assemble_cubic_from_formula",
    "expand_h3_from_real",
    "hamiltonian_h2",
    "evaluate",
    "gradient_zbar",
    "poisson_bracket",
    "h2_table",
    "vector_field_table",
    "pi_ker",
    "solve_homological",
    "save_table",
    "load_table",
]

Key = Tuple[Tuple[int, int], ...]
Table = Dict[Key, complex]

_SLOT_ORDER = lambda sj: (-sj[0], -abs(sj[1]), -sj[1])


def monomial_key(pairs: Iterable[tuple[int, int]]) -> Key:
    """Sorted (sigma, j) tuple: +1 block first, |j| descending inside blocks."""
    return tuple(sorted(((int(s), int(j)) for s, j in pairs), key=_SLOT_ORDER))


def orbit_multiplicity(key: Key) -> int:
    """Number of distinct ordered arrangements of the factor multiset."""
    counts: Dict[tuple[int, int], int] = {}
    for p in key:
        counts[p] = counts.get(p, 0) + 1
    m = math.factorial(len(key))
    for c in counts.values():
        m //= math.factorial(c)
    return m


def flip_key(key: Key) -> Key:
    """Canonical key with every sigma negated (the conjugate monomial)."""
    return monomial_key((-s, j) for s, j in key)


def _key_phase(params: PhysicalParams, key: Key) -> float:
    return sum(s * omega(params, j) for s, j in key)


def _key_momentum(key: Key) -> int:
    return sum(s * j for s, j in key)


@dataclass
class CubicHamiltonian:
    """Sparse cubic Hamiltonian: canonical key -> symmetrized coefficient.

    Every key conserves momentum, and the coefficient of the sign-flipped key
    is the complex conjugate, so the Hamiltonian is real-valued.  Treated as
    immutable after assembly.
    """

    params: PhysicalParams
    terms: Dict[Key, complex] = field(default_factory=dict)
    symmetrized: bool = True

    def total(self, key: Key) -> complex:
        """Coefficient of the monomial in the fully expanded ordered sum."""
        return self.terms[key] * orbit_multiplicity(key)

    def totals(self) -> Table:
        return {k: self.total(k) for k in self.terms}

    def support(self) -> set[int]:
        return {j for key in self.terms for _, j in key}

    def max_index(self) -> int:
        return max((abs(j) for j in self.support()), default=0)

    def reality_defect(self) -> float:
        worst = 0.0
        for key, c in self.terms.items():
            partner = self.terms.get(flip_key(key))
            if partner is None:
                return math.inf
            worst = max(worst, abs(partner - c.conjugate()))
        return worst

    def validate(self) -> None:
        for key in self.terms:
            if _key_momentum(key) != 0:
                raise ValueError(f"momentum violated by stored key {key}")

    @classmethod
    def from_totals(cls, params: PhysicalParams, totals: Table) -> "CubicHamiltonian":
        terms = {k: c / orbit_multiplicity(k) for k, c in totals.items()}
        return cls(params=params, terms=terms)


def h3_coefficient(
    params: PhysicalParams,
    modes: tuple[SignedMode, SignedMode, SignedMode],
) -> complex:
    """Cubic coefficient for one ordered arrangement of signed modes.

    (i sigma_2 / (8 sqrt(pi))) (sigma_1 sigma_3 j_1 j_3 + G_{j_1} G_{j_3})
    * Lambda(j_2) / (Lambda(j_1) Lambda(j_3)); the middle slot plays the
    surface role, the outer slots are symmetric.  Only defined on the
    momentum lattice.
    """
    m1, m2, m3 = modes
    if m1.sigma * m1.j + m2.sigma * m2.j + m3.sigma * m3.j != 0:
        raise ValueError(
            "h3_coefficient requires sigma1*j1 + sigma2*j2 + sigma3*j3 = 0"
        )
    real_part = (
        m1.sigma * m3.sigma * m1.j * m3.j
        + g0_mult(params, m1.j) * g0_mult(params, m3.j)
    )
    ratio = lambda_mult(params, m2.j) / (
        lambda_mult(params, m1.j) * lambda_mult(params, m3.j)
    )
    return 1j * m2.sigma / (8.0 * math.sqrt(math.pi)) * real_part * ratio


def _symmetrized_entry(params: PhysicalParams, key: Key) -> complex:
    arrangements = set(permutations(key))
    acc = 0.0 + 0.0j
    for arr in arrangements:
        acc += h3_coefficient(
            params, tuple(SignedMode(s, j) for s, j in arr)
        )
    return acc / len(arrangements)


def assemble_resonant_hamiltonian(
    params: PhysicalParams,
    max_j: int,
    tol: float = DEFAULT_RESONANCE_TOL,
) -> CubicHamiltonian:
    """Restrict the cubic Hamiltonian to the resonant monomials.

    Keys are exactly the enumerated resonant triads together with their
    sign-flipped conjugates (the ordered sum of the theory contains both).
    """
    ham = CubicHamiltonian(params=params, terms={})
    for trip in enumerate_resonances(params, max_j, tol):
        key = monomial_key((m.sigma, m.j) for m in trip.modes)
        for k in (key, flip_key(key)):
            if k not in ham.terms:
                ham.terms[k] = _symmetrized_entry(params, k)
    return ham


def assemble_cubic_from_formula(params: PhysicalParams, max_j: int) -> CubicHamiltonian:
    """Full cubic table from the closed coefficient formula, |j_i| <= max_j."""
    ham = CubicHamiltonian(params=params, terms={})
    rng = [j for j in range(-max_j, max_j + 1) if j != 0]
    for t1 in rng:
        for t2 in rng:
            t3 = -t1 - t2
            if t3 == 0 or abs(t3) > max_j:
                continue
            for s1 in (1, -1):
                for s2 in (1, -1):
                    for s3 in (1, -1):
                        key = monomial_key(
                            ((s1, s1 * t1), (s2, s2 * t2), (s3, s3 * t3))
                        )
                        if key not in ham.terms:
                            ham.terms[key] = _symmetrized_entry(params, key)
    return ham


def expand_h3_from_real(params: PhysicalParams, max_j: int) -> CubicHamiltonian:
    """Cubic table obtained by direct substitution into the real Hamiltonian.

    Starts from the degree-3 part (1/2) * integral of psi (D eta D - G0 eta G0) psi,
    expands eta and psi in Fourier modes, substitutes
    eta = -(i/sqrt2) Lambda (u - ubar), psi = (1/sqrt2) Lambda^{-1} (u + ubar)
    and collects monomials.  Independent algebraic route; serves as the oracle
    for the closed coefficient formula.
    """
    totals: Table = {}
    rng = [j for j in range(-max_j, max_j + 1) if j != 0]
    pref = 1.0 / (8.0 * math.sqrt(math.pi))
    for k in rng:
        gk = g0_mult(params, k)
        lk = lambda_mult(params, k)
        for n in rng:
            m = -k - n
            if m == 0 or abs(m) > max_j:
                continue
            # quadratic form of the two multiplier sandwiches in Fourier
            a = -k * n - gk * g0_mult(params, n)
            lam_ratio = lambda_mult(params, m) / (lk * lambda_mult(params, n))
            for s2 in (1, -1):
                base = -1j * s2 * pref * a * lam_ratio
                for s1 in (1, -1):
                    for s3 in (1, -1):
                        key = monomial_key(
                            ((s1, s1 * k), (s2, s2 * m), (s3, s3 * n))
                        )
                        totals[key] = totals.get(key, 0.0 + 0.0j) + base
    return CubicHamiltonian.from_totals(params, totals)


# ---------------------------------------------------------------------------
# evaluation and Wirtinger gradient
# ---------------------------------------------------------------------------


def _factor_value(z, sigma: int, j: int) -> complex:
    v = z.coeff(j)
    return v if sigma == 1 else v.conjugate()


def hamiltonian_h2(params: PhysicalParams, z) -> float:
    """Quadratic energy sum over modes of Omega(j) |z_j|^2."""
    total = 0.0
    for j in z.mode_range():
        c = z.coeff(j)
        if c != 0:
            total += omega(params, j) * (c.real**2 + c.imag**2)
    return total


def evaluate(ham: CubicHamiltonian, z) -> complex:
    """Value of the Hamiltonian on a spectral state (real up to roundoff)."""
    acc = 0.0 + 0.0j
    for key, c in ham.terms.items():
        prod = orbit_multiplicity(key) * c
        for s, j in key:
            prod *= _factor_value(z, s, j)
        acc += prod
    return acc


def gradient_zbar(ham: CubicHamiltonian, z):
    """Wirtinger gradient: k-th entry is d H / d conj(z_k).

    z_j and conj(z_j) are treated as independent variables, so the
    normal-form flow reads dz/dt = i Omega(D) z + i * gradient_zbar(H, z).
    """
    if not ham.symmetrized:
        raise ValueError("gradient requires a symmetrized table")
    out = z.zeros_like()
    for key, c in ham.terms.items():
        c_tot = orbit_multiplicity(key) * c
        seen = set()
        for idx, (s, j) in enumerate(key):
            if s != -1 or (s, j) in seen:
                continue
            seen.add((s, j))
            count = sum(1 for p in key if p == (s, j))
            rest = list(key)
            del rest[idx]
            val = c_tot * count
            for s2, j2 in rest:
                val *= _factor_value(z, s2, j2)
            out.add_to(j, val)
    return out


# ---------------------------------------------------------------------------
# generic monomial tables: Poisson bracket and the kernel projector
# ---------------------------------------------------------------------------


def as_table(obj) -> Table:
    if isinstance(obj, CubicHamiltonian):
        return obj.totals()
    return dict(obj)


def h2_table(params: PhysicalParams, indices: Iterable[int]) -> Table:
    """Quadratic Hamiltonian restricted to the given mode indices."""
    table: Table = {}
    for j in indices:
        if j == 0:
            continue
        table[monomial_key(((1, j), (-1, j)))] = complex(omega(params, j))
    return table


def _diff_table(table: Table, var: tuple[int, int]) -> Table:
    out: Table = {}
    for key, c in table.items():
        count = sum(1 for p in key if p == var)
        if count == 0:
            continue
        rest = list(key)
        rest.remove(var)
        k = tuple(rest)
        out[k] = out.get(k, 0.0 + 0.0j) + c * count
    return out


def _mul_table(a: Table, b: Table) -> Table:
    out: Table = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = monomial_key(ka + kb)
            out[k] = out.get(k, 0.0 + 0.0j) + ca * cb
    return out


def _add_table(a: Table, b: Table, scale: complex = 1.0) -> Table:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0.0 + 0.0j) + scale * c
    return out


def poisson_bracket(f, g) -> Table:
    """Complex Poisson bracket {F, G} = i sum_j (dG/du_j dF/dubar_j - dG/dubar_j dF/du_j).

    Arguments may be CubicHamiltonian instances or plain total-coefficient
    tables; the result is a plain table of degree deg F + deg G - 2 with
    exact zero entries dropped.
    """
    ft, gt = as_table(f), as_table(g)
    indices = {j for key in list(ft) + list(gt) for _, j in key}
    out: Table = {}
    for j in indices:
        du_g = _diff_table(gt, (1, j))
        dub_f = _diff_table(ft, (-1, j))
        dub_g = _diff_table(gt, (-1, j))
        du_f = _diff_table(ft, (1, j))
        out = _add_table(out, _mul_table(du_g, dub_f), 1j)
        out = _add_table(out, _mul_table(dub_g, du_f), -1j)
    return {k: c for k, c in out.items() if c != 0}


VFKey = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]


def vector_field_table(ham) -> Dict[VFKey, complex]:
    """Quadratic vector field of a cubic Hamiltonian.

    Entry ((s1,j1),(s2,j2),(s,j)) -> c meaning the component
    c * u^{s1}_{j1} u^{s2}_{j2} d/du^{s}_{j}; built from
    X = sum i sigma dH/du^{-sigma}_k d/du^{sigma}_k.
    """
    table = as_table(ham)
    out: Dict[VFKey, complex] = {}
    for key, c in table.items():
        seen = set()
        for idx, (sv, jv) in enumerate(key):
            if (sv, jv) in seen:
                continue
            seen.add((sv, jv))
            count = sum(1 for p in key if p == (sv, jv))
            rest = list(key)
            del rest[idx]
            inputs = monomial_key(rest)
            s_out = -sv
            vk: VFKey = (inputs[0], inputs[1], (s_out, jv))
            out[vk] = out.get(vk, 0.0 + 0.0j) + 1j * s_out * c * count
    return {k: v for k, v in out.items() if v != 0}


def pi_ker(
    table: Dict[VFKey, complex],
    params: PhysicalParams,
    tol: float = DEFAULT_RESONANCE_TOL,
) -> Dict[VFKey, complex]:
    """Projector onto resonant quadratic monomial vector fields.

    Keeps u^{s1}_{j1} u^{s2}_{j2} d/du^{s}_{j} iff
    |-s Omega(j) + s1 Omega(j1) + s2 Omega(j2)| <= tol.  Idempotent.
    """
    out: Dict[VFKey, complex] = {}
    for ((s1, j1), (s2, j2), (s, j)), c in table.items():
        div = (
            -s * omega(params, j)
            + s1 * omega(params, j1)
            + s2 * omega(params, j2)
        )
        if abs(div) <= tol:
            out[((s1, j1), (s2, j2), (s, j))] = c
    return out


# ---------------------------------------------------------------------------
# homological equation
# ---------------------------------------------------------------------------

HomKey = Tuple[int, int, int, int, int, int]  # (sigma, sigma', eps, n, k, j)


def _hom_divisor(params: PhysicalParams, key: HomKey) -> float:
    s, sp, eps, n, k, j = key
    return s * omega(params, j) - sp * omega(params, k) - eps * omega(params, n)


def solve_homological(
    params: PhysicalParams,
    r: Dict[HomKey, complex],
    tol: float = DEFAULT_RESONANCE_TOL,
    resonant_keys: set[HomKey] | None = None,
) -> tuple[Dict[HomKey, complex], float]:
    """Divide coefficients by the small divisor i (s Omega(j) - s' Omega(k) - eps Omega(n)).

    Keys are (sigma, sigma', eps, n, k, j) with the momentum identity
    eps n + sigma' k = sigma j.  On resonant keys the solution vanishes;
    elsewhere g = r / (i divisor).  When an explicit resonant set is passed,
    a non-flagged key whose divisor falls below tol raises (tolerance
    inconsistency).  Returns (g, residual) where the residual is the maximum
    defect of the reconstructed operator identity
    -i divisor * g + r = r_resonant, which must sit at roundoff.
    """
    g: Dict[HomKey, complex] = {}
    r_res: Dict[HomKey, complex] = {}
    for key, val in r.items():
        s, sp, eps, n, k, j = key
        if eps * n + sp * k != s * j:
            raise ValueError(f"momentum identity violated by key {key}")
        div = _hom_divisor(params, key)
        if resonant_keys is not None:
            flagged = key in resonant_keys
            if not flagged and abs(div) <= tol:
                raise ValueError(
                    f"divisor {div:.3e} below tol on key {key} not flagged resonant"
                )
        else:
            flagged = abs(div) <= tol
        if flagged:
            g[key] = 0.0 + 0.0j
            r_res[key] = val
        else:
            g[key] = val / (1j * div)
    residual = 0.0
    for key, val in r.items():
        div = _hom_divisor(params, key)
        defect = -1j * div * g[key] + val - r_res.get(key, 0.0 + 0.0j)
        residual = max(residual, abs(defect))
    return g, residual


# ---------------------------------------------------------------------------
# serialization: line-oriented text tables
# ---------------------------------------------------------------------------


def save_table(ham: CubicHamiltonian, path, tol: float = DEFAULT_RESONANCE_TOL) -> None:
    """One record per key: `s1 j1 s2 j2 s3 j3 re im multiplicity`."""
    p = ham.params
    with open(path, "w", encoding="ascii") as f:
        f.write("# capwaves cubic table\n")
        f.write(
            "# g=%.17g kappa=%.17g depth=%s tol=%.17g\n"
            % (
                p.g,
                p.kappa,
                "inf" if p.infinite_depth else "%.17g" % p.depth,
                tol,
            )
        )
        f.write("# sigma1 j1 sigma2 j2 sigma3 j3 re im multiplicity\n")
        for key in sorted(ham.terms, key=lambda k: tuple((-s, -abs(j), -j) for s, j in k)):
            c = ham.terms[key]
            flat = " ".join(f"{s:d} {j:d}" for s, j in key)
            f.write("%s %.17g %.17g %d\n" % (flat, c.real, c.imag, orbit_multiplicity(key)))


def load_table(path) -> tuple[PhysicalParams, Dict[Key, complex]]:
    params = None
    terms: Dict[Key, complex] = {}
    with open(path, encoding="ascii") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "g=" in line and "kappa=" in line:
                    fields = dict(
                        tok.split("=", 1) for tok in line[1:].split() if "=" in tok
                    )
                    params = PhysicalParams(
                        g=float(fields["g"]),
                        kappa=float(fields["kappa"]),
                        depth=float(fields["depth"]),
                    )
                continue
            toks = line.split()
            s1, j1, s2, j2, s3, j3 = (int(t) for t in toks[:6])
            re, im = float(toks[6]), float(toks[7])
            terms[monomial_key(((s1, j1), (s2, j2), (s3, j3)))] = complex(re, im)
    if params is None:
        raise ValueError(f"table file {path} has no parameter header")
    return params, terms
