"""Single-dipole double-well eigenproblem on a uniform grid.

The dimensionless Hamiltonian is

    h = (1/2)(-d^2/dzeta^2 + q zeta^2 + zeta^4 / 2)

with q = -beta for the plain double well, or q = (omega eta alpha / E)^2 - beta
when the polarisation self-energy is folded into the bare well (E is the
energy scale, so absolute energies are E * e_n). Discretization is second-order
central finite differences with Dirichlet ends; eigenpairs come from
shift-invert Lanczos, which keeps the small tunneling splittings accurate on
fine grids where plain tridiagonal bisection hits its arithmetic floor.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .errors import ConvergenceError, DomainError

DEFAULT_ZETA_MAX = 6.0
DEFAULT_POINTS = 128000
DEFAULT_GAP_TOL = 1e-8
EDGE_DENSITY_TOL = 1e-10


@dataclass(frozen=True)
class MainText:
    """Plain double-well convention: the bare well is untouched."""


@dataclass(frozen=True)
class SelfEnergyInBare:
    """Convention that absorbs the polarisation self-energy into the bare well.

    Adds (omega*eta*alpha/energy_scale)^2 to the quadratic coefficient, so the
    bare levels and dipole moments become coupling- and gauge-dependent.
    """

    alpha: float
    eta: float
    omega: float


@dataclass(frozen=True)
class WellShape:
    beta: float
    energy_scale: float
    renorm: object = field(default_factory=MainText)

    def __post_init__(self):
        if not self.energy_scale > 0:
            raise ValueError("energy_scale must be positive")

    def quadratic_coefficient(self):
        """Coefficient q of zeta^2 in the dimensionless well."""
        if isinstance(self.renorm, SelfEnergyInBare):
            r = self.renorm
            shift = (r.omega * r.eta * r.alpha / self.energy_scale) ** 2
            if not np.isfinite(shift):
                raise ValueError("self-energy quadratic shift is not finite")
            return shift - self.beta
        return -self.beta


@dataclass(frozen=True)
class GridSpec:
    zeta_max: float = DEFAULT_ZETA_MAX
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("need at least 3 grid points")
        if not self.zeta_max > 0:
            raise ValueError("zeta_max must be positive")

    def axis(self, points=None):
        """Interior grid points of (-zeta_max, zeta_max), symmetric about 0."""
        n = self.points if points is None else points
        h = 2.0 * self.zeta_max / (n + 1)
        return -self.zeta_max + h * np.arange(1, n + 1), h


@dataclass(frozen=True)
class DipoleSpectrum:
    """Eigenvalues and matrix elements of one anharmonic dipole.

    energies are absolute (multiplied by the energy scale). zeta_elements
    holds <m|zeta|n>. p_elements stores the real factor S_mn of the purely
    imaginary momentum elements <m|p~|n> = i S_mn with
    S_mn = (e_m - e_n) zeta_mn in dimensionless units. zeta_sq_elements
    (<m|zeta^2|n>) is carried for the exact-diagonalization self-energy term.
    """

    energies: np.ndarray
    zeta_elements: np.ndarray
    p_elements: np.ndarray
    zeta_sq_elements: np.ndarray
    level_count: int
    shape: WellShape
    grid: GridSpec

    @property
    def dimensionless_energies(self):
        return self.energies / self.shape.energy_scale

    @property
    def omega_m(self):
        """First transition energy, in absolute units."""
        return self.energies[1] - self.energies[0]

    @property
    def zeta01(self):
        return self.zeta_elements[0, 1]


def _solve_potential(v_dimless, h, levels):
    """Lowest eigenpairs of (1/2)(-D2) + diag(v) with Dirichlet ends.

    v_dimless already includes the 1/2 potential prefactor. Returns
    eigenvalues ascending and l2-normalized eigenvectors as columns.
    """
    n = v_dimless.size
    diag = 1.0 / h**2 + v_dimless
    off = np.full(n - 1, -0.5 / h**2)
    t = sp.diags([off, diag, off], [-1, 0, 1], format="csc")
    sigma = float(np.min(v_dimless)) - 1.0
    v0 = np.ones(n) / np.sqrt(n)
    vals, vecs = eigsh(t, k=levels, sigma=sigma, which="LM", v0=v0, tol=0)
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


def _eigenvalues_only(v_dimless, h, k):
    n = v_dimless.size
    diag = 1.0 / h**2 + v_dimless
    off = np.full(n - 1, -0.5 / h**2)
    t = sp.diags([off, diag, off], [-1, 0, 1], format="csc")
    sigma = float(np.min(v_dimless)) - 1.0
    v0 = np.ones(n) / np.sqrt(n)
    vals = eigsh(t, k=k, sigma=sigma, which="LM", v0=v0, tol=0,
                 return_eigenvectors=False)
    return np.sort(vals)


def _well_values(shape, z):
    q = shape.quadratic_coefficient()
    return 0.5 * (q * z**2 + 0.5 * z**4)


def solve_double_well(shape: WellShape, grid: GridSpec, levels: int,
                      gap_tol: float = DEFAULT_GAP_TOL) -> DipoleSpectrum:
    """Solve the (possibly renormalized) double well for the lowest levels.

    Parameters
    ----------
    shape : WellShape
        Well coefficients and truncation convention.
    grid : GridSpec
        Uniform symmetric grid; the solve is also repeated at doubled
        resolution to certify convergence of the first transition energy.
    levels : int
        Number of eigenstates kept (must leave discretization headroom,
        levels <= points/4).
    gap_tol : float
        Maximum allowed relative change of e1 - e0 under grid doubling.

    Raises
    ------
    ConvergenceError
        If grid doubling moves the first transition energy by more than
        gap_tol relative, or the eigenvalues come out degenerate.
    DomainError
        If the ground-state density at the grid edge exceeds 1e-10 of its
        maximum (the box is too small for this well).
    """
    if levels < 2:
        raise ValueError("need at least 2 levels")
    if levels > grid.points // 4:
        raise ValueError("levels must not exceed points/4")
    z, h = grid.axis()
    vals, vecs = _solve_potential(_well_values(shape, z), h, levels)

    gaps = np.diff(vals)
    if np.any(gaps <= 0):
        raise ConvergenceError("eigenvalues are not strictly increasing")

    density = vecs[:, 0] ** 2
    edge = 0.5 * (density[0] + density[-1])
    if edge > EDGE_DENSITY_TOL * density.max():
        raise DomainError(
            f"ground density at |zeta|={grid.zeta_max} is {edge / density.max():.2e} "
            "of its maximum; enlarge zeta_max"
        )

    z2, h2 = grid.axis(points=2 * grid.points)
    fine = _eigenvalues_only(_well_values(shape, z2), h2, 2)
    gap, fine_gap = vals[1] - vals[0], fine[1] - fine[0]
    drift = abs(fine_gap - gap) / abs(fine_gap)
    if drift > gap_tol:
        raise ConvergenceError(
            f"grid doubling moves e1-e0 by {drift:.2e} relative (> {gap_tol:.1e})"
        )

    # Phase chain: flip signs so every nearest-neighbour dipole element is
    # positive, which in particular makes zeta_01 > 0.
    for n in range(levels - 1):
        if np.dot(vecs[:, n] * z, vecs[:, n + 1]) < 0:
            vecs[:, n + 1] *= -1.0

    zeta = vecs.T @ (z[:, None] * vecs)
    zeta = 0.5 * (zeta + zeta.T)
    zeta_sq = vecs.T @ ((z**2)[:, None] * vecs)
    zeta_sq = 0.5 * (zeta_sq + zeta_sq.T)
    p_real = (vals[:, None] - vals[None, :]) * zeta

    return DipoleSpectrum(
        energies=shape.energy_scale * vals,
        zeta_elements=zeta,
        p_elements=p_real,
        zeta_sq_elements=zeta_sq,
        level_count=levels,
        shape=shape,
        grid=grid,
    )


def trk_sum(spectrum: DipoleSpectrum) -> float:
    """Dimensionless f-sum S = sum_{n>0} 2 (e_n - e_0) zeta_0n^2.

    Exactly 1 for the untruncated problem, so any truncation gives S <= 1
    and S grows toward 1 with the level count.
    """
    e = spectrum.dimensionless_energies
    z0 = spectrum.zeta_elements[0, 1:]
    return float(np.sum(2.0 * (e[1:] - e[0]) * z0**2))


def resonance_energy_scale(beta: float, omega: float, grid: GridSpec,
                           gap_tol: float = DEFAULT_GAP_TOL) -> float:
    """Energy scale E that puts the first dipole transition at omega.

    Solves the plain double well with unit energy scale and returns
    omega / (e1 - e0), so that re-solving with the returned scale gives
    omega_m = omega.
    """
    shape = WellShape(beta=beta, energy_scale=1.0)
    spectrum = solve_double_well(shape, grid, levels=2, gap_tol=gap_tol)
    return omega / (spectrum.energies[1] - spectrum.energies[0])


def export_csv(spectrum: DipoleSpectrum, path, provenance: str | None = None) -> None:
    """Audit dump: one row per level with n, e_n, zeta_0n, zeta_1n."""
    e = spectrum.dimensionless_energies
    with open(path, "w", newline="") as fh:
        if provenance is not None:
            fh.write(f"# {provenance}\n")
        fh.write("n,e_n,zeta_0n,zeta_1n\n")
        for n in range(spectrum.level_count):
            fh.write(
                f"{n},{e[n]:.17g},{spectrum.zeta_elements[0, n]:.17g},"
                f"{spectrum.zeta_elements[1, n]:.17g}\n"
            )
