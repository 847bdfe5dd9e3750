"""Finite-N exact diagonalization of the non-truncated Hamiltonian.

The full light-matter Hamiltonian is assembled in the product space of N
truncated dipole eigenbases (L levels each) and one Fock-truncated mode
(M states). Projecting onto that space leaves the bare dipole term exact,
the field couplings linear in the imported matrix elements, and the square
of the vector potential exact in Fock space. A fixed phase rotation of the
mode (a -> -ia) turns every term real, so only real symmetric matrices are
ever built:

    (a^dag + a)  ->  i (a^dag - a)          (A and the gauge exponent)
    i (a^dag - a) -> -(a^dag + a)           (canonical momentum Pi)
    (a^dag + a)^2 ->  2 a^dag a + 1 - (a^dag^2 + a^2)

The two-level collective-spin Dicke Hamiltonian is built separately from its
replacement form; it differs from the L=2 projection in the self-energy term,
which is the point of keeping both.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .dipole import DipoleSpectrum, MainText, SelfEnergyInBare
from .errors import (
    BudgetError,
    ConventionMismatch,
    ConvergenceError,
    GridError,
    ValidationError,
)
from .gauge import ReducedParams, derive_couplings

DEFAULT_BUDGET = 200_000
DENSE_THRESHOLD = 2500
FOCK_TAIL_TOL = 1e-8
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ProductBasis:
    """Full tensor product of single-dipole eigenbases."""


@dataclass(frozen=True)
class CollectiveSpin:
    """Permutation-symmetric spin-N/2 basis; valid only for two levels."""


@dataclass(frozen=True)
class HilbertConfig:
    n_dipoles: int
    dipole_levels: int
    fock_cutoff: int
    representation: object = field(default_factory=ProductBasis)
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.n_dipoles < 1:
            raise ValidationError("n_dipoles must be at least 1")
        if self.dipole_levels < 2 or self.fock_cutoff < 2:
            raise ValidationError("need at least 2 dipole levels and 2 Fock states")
        if isinstance(self.representation, CollectiveSpin) and self.dipole_levels != 2:
            raise ValidationError("collective-spin representation requires 2 levels")
        if self.dimension > self.budget:
            raise BudgetError(
                f"dimension {self.dimension} exceeds budget {self.budget}"
            )

    @property
    def dimension(self):
        if isinstance(self.representation, CollectiveSpin):
            return (self.n_dipoles + 1) * self.fock_cutoff
        return self.dipole_levels**self.n_dipoles * self.fock_cutoff


def default_hilbert(n_dipoles: int, budget: int = DEFAULT_BUDGET) -> HilbertConfig:
    """Cutoffs that reproduce the figures at desk scale."""
    if n_dipoles <= 3:
        return HilbertConfig(n_dipoles, 8, 40, budget=budget)
    return HilbertConfig(n_dipoles, 6, 30, budget=budget)


@dataclass(frozen=True)
class AssembledHamiltonian:
    matrix: sp.csr_matrix
    dimension: int
    labels: dict


def _photon_ops(m):
    n = np.arange(m, dtype=float)
    lower = sp.diags(np.sqrt(n[1:]), 1)          # annihilation
    raise_ = lower.T
    number = sp.diags(n)
    q = (raise_ + lower).tocsr()                 # a^dag + a
    t = (raise_ - lower).tocsr()                 # a^dag - a
    two_ph = raise_ @ raise_ + lower @ lower
    w = (2.0 * number + sp.identity(m) - two_ph).tocsr()   # rotated (a^dag+a)^2
    return number.tocsr(), q, t, w


def _site_op(op, site, n_sites, levels):
    left = sp.identity(levels**site, format="csr")
    right = sp.identity(levels ** (n_sites - site - 1), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def _pair_op(op, site_a, site_b, n_sites, levels):
    return _site_op(op, site_a, n_sites, levels) @ _site_op(op, site_b, n_sites, levels)


def _check_convention(config, params, spectrum, convention):
    renorm = spectrum.shape.renorm
    if convention is MainText:
        if not isinstance(renorm, MainText):
            raise ConventionMismatch("spectrum was not solved in the plain well")
        return
    if convention is SelfEnergyInBare:
        if not isinstance(renorm, SelfEnergyInBare):
            raise ConventionMismatch("spectrum lacks the absorbed self-energy")
        # The absorbed quadratic term must equal the actual per-dipole
        # self-energy coefficient, which carries a 1/N: the well has to be
        # solved at eta/sqrt(N).
        want_eta = params.eta / math.sqrt(config.n_dipoles)
        if (
            abs(renorm.alpha - params.alpha) > 1e-12
            or abs(renorm.omega - params.omega) > 1e-12
            or abs(renorm.eta - want_eta) > 1e-12 * max(1.0, want_eta)
        ):
            raise ConventionMismatch(
                "absorbed self-energy does not match (alpha, omega, eta/sqrt(N))"
            )
        return
    raise ValidationError("convention must be MainText or SelfEnergyInBare")


def assemble(config: HilbertConfig, params: ReducedParams,
             spectrum: DipoleSpectrum, convention=MainText) -> AssembledHamiltonian:
    """Projected full Hamiltonian on the dipole-eigenbasis x Fock space.

    All coefficients are the reduced ones: with lam = eta sqrt(omega/(2 N E))
    the kinetic square per dipole is (E/2)[p~ + (1-alpha) lam (a^dag+a)]^2,
    whose p~^2 part is already inside the bare energies; the momentum
    coupling is -alpha eta omega^(3/2)/sqrt(2 N E) zeta i(a^dag - a); the
    self-energy (MainText only) alpha^2 eta^2 omega^2/(2 N E) zeta^2; the
    dipole-dipole term -(1-alpha^2) eta^2 omega^2/(2 N E) sum_{mu != nu}
    zeta_mu zeta_nu. Everything is built in the rotated real basis.

    Raises
    ------
    BudgetError, ConventionMismatch, ValidationError
    """
    if not isinstance(config.representation, ProductBasis):
        raise ValidationError("assemble works in the product basis")
    n_sites, levels, m = config.n_dipoles, config.dipole_levels, config.fock_cutoff
    if n_sites != params.n_dipoles:
        raise ValidationError("config and params disagree on the dipole count")
    if spectrum.level_count < levels:
        raise ValidationError("spectrum holds fewer levels than requested")
    _check_convention(config, params, spectrum, convention)
    dim = config.dimension
    if dim > config.budget:
        raise BudgetError(f"dimension {dim} exceeds budget {config.budget}")

    alpha, eta = params.alpha, params.eta
    omega, e_scale = params.omega, params.energy_scale
    lam = params.lambda_a

    z_op = spectrum.zeta_elements[:levels, :levels]
    s_op = spectrum.p_elements[:levels, :levels]        # (e_m - e_n) zeta_mn
    z2_op = spectrum.zeta_sq_elements[:levels, :levels]
    bare = np.diag(spectrum.energies[:levels])

    _, q_ph, t_ph, w_ph = _photon_ops(m)
    number = sp.diags(np.arange(m, dtype=float))
    id_ph = sp.identity(m, format="csr")
    id_dip = sp.identity(levels**n_sites, format="csr")

    c_cross = e_scale * (1.0 - alpha) * lam
    c_a2 = n_sites * 0.5 * e_scale * (1.0 - alpha) ** 2 * lam**2
    c_pi = alpha * eta * omega**1.5 / math.sqrt(2.0 * n_sites * e_scale)
    # With the self-energy absorbed into the well, the bare energies already
    # contain the alpha^2 zeta^2 piece; adding it again would double count.
    if convention is SelfEnergyInBare:
        c_se = 0.0
    else:
        c_se = alpha**2 * eta**2 * omega**2 / (2.0 * n_sites * e_scale)
    c_dd = -(1.0 - alpha**2) * eta**2 * omega**2 / (2.0 * n_sites * e_scale)

    terms = [sp.kron(id_dip, omega * (number + 0.5 * sp.identity(m)), format="csr"),
             c_a2 * sp.kron(id_dip, w_ph, format="csr")]
    for site in range(n_sites):
        terms.append(sp.kron(_site_op(bare, site, n_sites, levels), id_ph, format="csr"))
        terms.append(-c_cross * sp.kron(_site_op(s_op, site, n_sites, levels), t_ph, format="csr"))
        if c_pi != 0.0:
            terms.append(c_pi * sp.kron(_site_op(z_op, site, n_sites, levels), q_ph, format="csr"))
        if c_se != 0.0:
            terms.append(c_se * sp.kron(_site_op(z2_op, site, n_sites, levels), id_ph, format="csr"))
    if c_dd != 0.0:
        for site_a in range(n_sites):
            for site_b in range(site_a + 1, n_sites):
                pair = _pair_op(z_op, site_a, site_b, n_sites, levels)
                terms.append(2.0 * c_dd * sp.kron(pair, id_ph, format="csr"))

    matrix = sum(terms).tocsr()
    _assert_symmetric(matrix)
    labels = {
        "representation": "product",
        "axis_dims": (levels,) * n_sites + (m,),
        "n_dipoles": n_sites,
        "dipole_levels": levels,
        "fock_cutoff": m,
        "convention": convention.__name__,
        "alpha": alpha,
        "eta": eta,
    }
    return AssembledHamiltonian(matrix=matrix, dimension=dim, labels=labels)


def _assert_symmetric(matrix):
    gap = abs(matrix - matrix.T)
    top = gap.max() if gap.nnz else 0.0
    scale = abs(matrix).max()
    if top > SYMMETRY_TOL * max(scale, 1.0):
        raise ValidationError(f"assembled matrix asymmetric by {top:.2e}")


def _collective_spin_ops(n_dipoles):
    j = 0.5 * n_dipoles
    m_vals = np.arange(-j, j + 1)
    jz = np.diag(m_vals)
    up = np.sqrt(j * (j + 1) - m_vals[:-1] * (m_vals[:-1] + 1))
    jp = np.diag(up, -1)    # raises m: entry (m+1, m)
    return jz, jp, jp.T


def dicke_two_level(config: HilbertConfig, params: ReducedParams,
                    spectrum: DipoleSpectrum) -> AssembledHamiltonian:
    """Two-level Dicke Hamiltonian from the replacement truncation.

    Uses the collective operators J^z, J^pm with the renormalized mode
    frequency omega_alpha and the constant N(eps0+eps1)/2 + rho d^2/2. The
    collective-spin basis is the natural one; the product basis (two levels
    per dipole) is also supported so permutation symmetry of the ground state
    can be checked.
    """
    if not isinstance(spectrum.shape.renorm, MainText):
        raise ConventionMismatch("two-level replacement uses the plain-well spectrum")
    if config.dipole_levels != 2:
        raise ValidationError("two-level model needs dipole_levels = 2")
    n_sites, m = config.n_dipoles, config.fock_cutoff
    if n_sites != params.n_dipoles:
        raise ValidationError("config and params disagree on the dipole count")

    couplings = derive_couplings(params)
    omega_m = spectrum.omega_m
    const = n_sites * 0.5 * (spectrum.energies[0] + spectrum.energies[1]) \
        + 0.5 * couplings.rho_d2

    if isinstance(config.representation, CollectiveSpin):
        jz, jp, jm = _collective_spin_ops(n_sites)
        jz, jp, jm = map(sp.csr_matrix, (jz, jp, jm))
    else:
        # sigma^z has eigenvalues -1/2 (ground) and +1/2; sigma^+ raises.
        sz = np.diag([-0.5, 0.5])
        s_up = np.array([[0.0, 0.0], [1.0, 0.0]])
        jz = sum(_site_op(sz, i, n_sites, 2) for i in range(n_sites))
        jp = sum(_site_op(s_up, i, n_sites, 2) for i in range(n_sites))
        jm = jp.T.tocsr()

    jx2 = (jp + jm) @ (jp + jm)
    _, q_ph, t_ph, _ = _photon_ops(m)
    number = sp.diags(np.arange(m, dtype=float))
    id_ph = sp.identity(m, format="csr")
    id_sp = sp.identity(jz.shape[0], format="csr")

    # Rotated interaction: +g'(J+ - J-)(c^dag - c) - g(J+ + J-)(c^dag + c).
    matrix = (
        omega_m * sp.kron(jz, id_ph)
        + sp.kron(id_sp, couplings.omega_alpha * (number + 0.5 * sp.identity(m)))
        - (couplings.c_alpha / n_sites) * sp.kron(jx2, id_ph)
        + (couplings.g_prime_alpha / math.sqrt(n_sites)) * sp.kron(jp - jm, t_ph)
        - (couplings.g_alpha / math.sqrt(n_sites)) * sp.kron(jp + jm, q_ph)
        + const * sp.identity(jz.shape[0] * m)
    ).tocsr()
    _assert_symmetric(matrix)
    rep = "collective" if isinstance(config.representation, CollectiveSpin) else "product"
    labels = {
        "representation": rep,
        "axis_dims": (jz.shape[0], m) if rep == "collective" else (2,) * n_sites + (m,),
        "n_dipoles": n_sites,
        "dipole_levels": 2,
        "fock_cutoff": m,
        "convention": "TwoLevelReplacement",
        "alpha": params.alpha,
        "eta": params.eta,
    }
    return AssembledHamiltonian(matrix=matrix, dimension=matrix.shape[0], labels=labels)


def lowest_eigenvalues(h: AssembledHamiltonian, k: int, method: str | None = None,
                       return_vectors: bool = False):
    """k smallest eigenvalues (ascending), dense below a size threshold.

    method forces "dense" or "sparse"; the default picks by dimension. The
    sparse path is Lanczos with a fixed deterministic start vector.
    """
    if not 1 <= k <= h.dimension:
        raise ValidationError(f"k = {k} outside 1..{h.dimension}")
    if method is None:
        method = "dense" if (h.dimension <= DENSE_THRESHOLD or k >= h.dimension - 1) else "sparse"
    if method == "dense":
        dense = h.matrix.toarray()
        vals, vecs = np.linalg.eigh(dense)
        vals, vecs = vals[:k], vecs[:, :k]
    elif method == "sparse":
        v0 = np.ones(h.dimension) / math.sqrt(h.dimension)
        try:
            vals, vecs = eigsh(h.matrix, k=k, which="SA", v0=v0, tol=0)
        except ArpackNoConvergence as err:
            got = len(err.eigenvalues)
            raise ConvergenceError(
                f"Lanczos converged {got}/{k} eigenvalues at dimension {h.dimension}; "
                "raise maxiter or loosen the request"
            ) from err
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise ValidationError("method must be None, 'dense' or 'sparse'")
    if return_vectors:
        return vals, vecs
    return vals


def fock_tail_weight(h: AssembledHamiltonian, vector) -> float:
    """Probability of the highest Fock state in a normalized eigenvector."""
    dims = h.labels["axis_dims"]
    resh = np.asarray(vector).reshape(dims)
    return float(np.sum(resh[..., -1] ** 2))


def _ground_pair(h):
    vals, vecs = lowest_eigenvalues(h, 2, return_vectors=True)
    tail = fock_tail_weight(h, vecs[:, 0])
    if tail > FOCK_TAIL_TOL:
        warnings.warn(
            f"Fock tail occupation {tail:.2e} exceeds {FOCK_TAIL_TOL:.0e}; "
            "raise fock_cutoff",
            stacklevel=3,
        )
    return float(vals[0]), float(vals[1])


def transition_sweep(config: HilbertConfig, params_template: ReducedParams,
                     eta_grid, include_two_level: bool = True):
    """Ground and first-excited energies along an eta grid.

    Emits one row per (eta, model) with model "exact" (the assembled L-level
    Hamiltonian) and, optionally, "two_level" (the collective replacement
    model at the same gauge). Rows carry (eta, alpha, model, G, E, gap/omega).
    """
    spectrum = params_template.spectrum
    if spectrum is None:
        raise ValidationError("params_template carries no dipole spectrum")
    if not isinstance(spectrum.shape.renorm, MainText):
        raise ConventionMismatch("transition sweeps use the plain-well spectrum")
    two_cfg = None
    if include_two_level:
        two_cfg = HilbertConfig(config.n_dipoles, 2, config.fock_cutoff,
                                representation=CollectiveSpin(), budget=config.budget)
    rows = []
    for eta in eta_grid:
        params = params_template.with_(eta=float(eta))
        h = assemble(config, params, spectrum, MainText)
        ground, excited = _ground_pair(h)
        rows.append({
            "eta": float(eta), "alpha": params.alpha, "model": "exact",
            "G": ground, "E": excited,
            "gap_over_omega": (excited - ground) / params.omega,
        })
        if include_two_level:
            h2 = dicke_two_level(two_cfg, params, spectrum)
            ground2, excited2 = _ground_pair(h2)
            rows.append({
                "eta": float(eta), "alpha": params.alpha, "model": "two_level",
                "G": ground2, "E": excited2,
                "gap_over_omega": (excited2 - ground2) / params.omega,
            })
    return rows


def second_derivative_sweep(config: HilbertConfig, params_template: ReducedParams,
                            eta_grid, model: str = "two_level"):
    """Central second differences of the shifted ground energy per dipole.

    G_s = G - rho d^2 / 2; returns rows (eta, (N omega)^-1 d^2 G_s / d eta^2)
    for the interior grid points. The grid must be uniform.
    """
    grid = np.asarray(list(eta_grid), dtype=float)
    if grid.size < 3:
        raise GridError("need at least 3 grid points for a second difference")
    steps = np.diff(grid)
    h_step = steps[0]
    if np.any(np.abs(steps - h_step) > 1e-9 * max(abs(h_step), 1e-30)):
        raise GridError("eta grid is not uniform")
    spectrum = params_template.spectrum
    if spectrum is None:
        raise ValidationError("params_template carries no dipole spectrum")
    g_s = []
    for eta in grid:
        params = params_template.with_(eta=float(eta))
        if model == "exact":
            h = assemble(config, params, spectrum, MainText)
        elif model == "two_level":
            cfg = HilbertConfig(config.n_dipoles, 2, config.fock_cutoff,
                                representation=CollectiveSpin(), budget=config.budget)
            h = dicke_two_level(cfg, params, spectrum)
        else:
            raise ValidationError("model must be 'exact' or 'two_level'")
        ground, _ = _ground_pair(h)
        g_s.append(ground - 0.5 * params.rho_d2)
    g_s = np.asarray(g_s)
    scale = 1.0 / (config.n_dipoles * params_template.omega * h_step**2)
    rows = []
    for i in range(1, grid.size - 1):
        second = (g_s[i - 1] - 2.0 * g_s[i] + g_s[i + 1]) * scale
        rows.append((float(grid[i]), float(second)))
    return rows


def gauge_fixing_unitary(config: HilbertConfig, params: ReducedParams,
                         spectrum: DipoleSpectrum, alpha_from: float,
                         alpha_to: float) -> np.ndarray:
    """Truncated gauge-change unitary R with R H(alpha_from) R^T ~ H(alpha_to).

    In the rotated real basis the exponent (alpha_to - alpha_from) lam
    sum_mu zeta_mu (a^dag - a) is real antisymmetric, so R is real
    orthogonal. Exact only in the untruncated limit; used as a diagnostic.
    """
    if not isinstance(config.representation, ProductBasis):
        raise ValidationError("gauge unitary works in the product basis")
    n_sites, levels, m = config.n_dipoles, config.dipole_levels, config.fock_cutoff
    if config.dimension > config.budget:
        raise BudgetError(f"dimension {config.dimension} exceeds budget")
    z_op = spectrum.zeta_elements[:levels, :levels]
    _, _, t_ph, _ = _photon_ops(m)
    zeta_sum = sum(_site_op(z_op, i, n_sites, levels) for i in range(n_sites))
    # Conjugating by exp(i theta zeta (a^dag+a)) with theta = (to - from) lam
    # shifts the kinetic coupling between the gauges; the phase rotation of
    # the mode turns that exponent into the real antisymmetric form below.
    exponent = -(alpha_to - alpha_from) * params.lambda_a * sp.kron(zeta_sum, t_ph)
    return expm(exponent.toarray())


def convergence_report(config_ladder, params: ReducedParams,
                       spectrum: DipoleSpectrum, convention=MainText):
    """Ground/first-excited energies along a (L, M) cutoff ladder.

    Reports successive deltas and flags rungs whose Fock tail is heavy or
    whose deltas stop shrinking (non-Cauchy behaviour).
    """
    rows = []
    prev_g = prev_e = None
    prev_dg = None
    for cfg in config_ladder:
        h = assemble(cfg, params, spectrum, convention)
        vals, vecs = lowest_eigenvalues(h, 2, return_vectors=True)
        ground, excited = float(vals[0]), float(vals[1])
        tail = fock_tail_weight(h, vecs[:, 0])
        flags = []
        if tail > FOCK_TAIL_TOL:
            flags.append("fock-tail")
        delta_g = None if prev_g is None else ground - prev_g
        delta_e = None if prev_e is None else excited - prev_e
        if delta_g is not None and prev_dg is not None:
            if abs(delta_g) > abs(prev_dg):
                flags.append("non-cauchy")
        rows.append({
            "dipole_levels": cfg.dipole_levels,
            "fock_cutoff": cfg.fock_cutoff,
            "dimension": h.dimension,
            "G": ground,
            "E": excited,
            "delta_G": delta_g,
            "delta_E": delta_e,
            "fock_tail": tail,
            "flags": ",".join(flags),
        })
        prev_g, prev_e = ground, excited
        if delta_g is not None:
            prev_dg = delta_g
    return rows


def parity_diagonal(h: AssembledHamiltonian) -> np.ndarray:
    """Diagonal of the joint parity operator in the assembled basis.

    Dipole level n carries parity (-1)^n (even potential), the mode carries
    (-1)^(photon number); the product commutes with every assembled term.
    """
    dims = h.labels["axis_dims"]
    diag = np.ones(1)
    for d in dims:
        diag = np.kron(diag, (-1.0) ** np.arange(d))
    return diag


def dump_triplets(h: AssembledHamiltonian, path) -> None:
    """Sparse triplet text dump (row, col, value), one entry per line."""
    coo = h.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"# dimension {h.dimension}\n")
        fh.write(f"# labels {h.labels}\n")
        for i in order:
            fh.write(f"{coo.row[i]} {coo.col[i]} {coo.data[i]:.17g}\n")
