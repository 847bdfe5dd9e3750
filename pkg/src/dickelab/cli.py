"""Command-line front end: sweep orchestration and CSV reporting.

Commands regenerate the figure data tables from a flat key-value config
file plus command-line overrides. All physical inputs are dimensionless or
in units of the mode frequency omega = 1. Output is CSV with 17 significant
digits, one provenance comment line (config hash and cutoffs), and a header
row; reruns with the same config are byte-identical.

Exit codes: 0 success, 2 validation, 3 convergence, 4 budget.
"""

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import dipole, exactn, gauge, thermo
from .dipole import GridSpec, MainText, SelfEnergyInBare, WellShape
from .errors import (
    BudgetError,
    ConventionMismatch,
    ConvergenceError,
    DickelabError,
    DomainError,
    GridError,
    InstabilityError,
    PhaseError,
    RootError,
    ValidationError,
)
from .exactn import CollectiveSpin, HilbertConfig, ProductBasis
from .gauge import ReducedParams, derive_couplings

COMMANDS = ("spectrum", "thermo-sweep", "exact-sweep", "fig1", "fig2",
            "fig3a", "fig3b", "s-figs", "jc-curve", "convergence")

EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_BUDGET = 4

_VALIDATION_ERRORS = (ValidationError, ConventionMismatch, PhaseError,
                      GridError, ValueError)
_CONVERGENCE_ERRORS = (ConvergenceError, DomainError, InstabilityError,
                       RootError)


@dataclass
class RunConfig:
    command: str
    beta: float = 2.4
    alpha_list: tuple = ("0", "jc", "1")
    eta_grid: tuple = (0.0, 2.0, 81)
    n_dipoles: int = 1
    dipole_levels: int = 8
    fock_cutoff: int = 40
    representation: str = "product"
    convention: str = "main-text"
    energy_scale: str = "resonance"
    levels: int = 12
    output_path: str = ""
    threads: int = 1
    budget: int = exactn.DEFAULT_BUDGET
    gap_tol: float = dipole.DEFAULT_GAP_TOL
    grid_points: int = dipole.DEFAULT_POINTS
    ladder: tuple = ((6, 30), (8, 40), (10, 60))
    eta_point: float = 1.0
    alpha_point: float = 1.0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        start, stop, steps = self.eta_grid
        if steps < 2:
            raise ValidationError("eta_grid needs at least 2 steps")
        if not 0.0 <= start < stop:
            raise ValidationError("eta_grid requires stop > start >= 0")
        if self.n_dipoles < 1:
            raise ValidationError("n_dipoles must be positive")
        if self.threads < 1:
            raise ValidationError("threads must be positive")
        if self.convention not in ("main-text", "self-energy-in-bare"):
            raise ValidationError(f"unknown convention {self.convention!r}")
        if self.representation not in ("product", "collective"):
            raise ValidationError(f"unknown representation {self.representation!r}")

    def eta_values(self):
        start, stop, steps = self.eta_grid
        return [start + (stop - start) * i / (steps - 1) for i in range(steps)]

    def hilbert(self, n_dipoles=None, representation=None):
        rep = representation or self.representation
        rep_obj = CollectiveSpin() if rep == "collective" else ProductBasis()
        return HilbertConfig(
            n_dipoles if n_dipoles is not None else self.n_dipoles,
            self.dipole_levels, self.fock_cutoff,
            representation=rep_obj, budget=self.budget,
        )

    def digest(self):
        # Identifies the data, so the output location and worker count
        # (which cannot change row content) stay out of the hash.
        skip = {"output_path", "threads"}
        keys = sorted(k for k in vars(self) if k not in skip)
        text = ";".join(f"{k}={getattr(self, k)!r}" for k in keys)
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def _parse_scalar(value):
    value = value.strip()
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def read_config_file(path):
    """Flat KEY = VALUE pairs, '#' comments, later keys win."""
    items = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected KEY = VALUE")
            key, value = line.split("=", 1)
            items[key.strip()] = value.strip()
    return items


# Figure commands pin the parameters the corresponding plots use; explicit
# config keys still win.
_COMMAND_DEFAULTS = {
    "fig1": {"beta": "2.4", "eta_grid": "0,2,81"},
    "fig2": {"beta": "2.4", "eta_grid": "0,2,81"},
    "fig3a": {"beta": "3.3", "eta_grid": "0,1.5,31"},
    "fig3b": {"beta": "3.3", "eta_grid": "1.5,2.5,101"},
    "s-figs": {"eta_grid": "0,2,41"},
}


def build_config(items):
    items = dict(items)
    for key, value in _COMMAND_DEFAULTS.get(items.get("command", ""), {}).items():
        items.setdefault(key, value)
    known = {
        "command": str, "beta": float, "n_dipoles": int, "dipole_levels": int,
        "fock_cutoff": int, "representation": str, "convention": str,
        "energy_scale": str, "levels": int, "output_path": str,
        "threads": int, "budget": int, "gap_tol": float, "grid_points": int,
        "eta_point": float, "alpha_point": float,
    }
    kwargs = {}
    for key, value in items.items():
        if key == "alpha_list":
            kwargs[key] = tuple(tok.strip() for tok in str(value).split(",") if tok.strip())
        elif key == "eta_grid":
            parts = [tok.strip() for tok in str(value).split(",")]
            if len(parts) != 3:
                raise ValidationError("eta_grid must be start,stop,steps")
            kwargs[key] = (float(parts[0]), float(parts[1]), int(parts[2]))
        elif key == "ladder":
            rungs = []
            for rung in str(value).split(";"):
                a, b = rung.split(",")
                rungs.append((int(a), int(b)))
            kwargs[key] = tuple(rungs)
        elif key in known:
            kwargs[key] = known[key](value)
        else:
            raise ValidationError(f"unknown config key {key!r}")
    if "command" not in kwargs:
        raise ValidationError("no command given (config key or --command)")
    return RunConfig(**kwargs)


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


class CsvWriter:
    """Streams rows; on failure the partial file ends with a marker line."""

    def __init__(self, path, header, provenance):
        self.path = path
        self.fh = open(path, "w", newline="")
        self.fh.write(f"# {provenance}\n")
        self.fh.write(",".join(header) + "\n")

    def write_row(self, values):
        self.fh.write(",".join(_fmt(v) for v in values) + "\n")

    def truncate_marker(self):
        self.fh.write("# TRUNCATED\n")
        self.fh.flush()

    def close(self):
        self.fh.close()


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


_SPECTRUM_CACHE = {}


def _resonant_scale(beta, grid_points, gap_tol):
    key = ("res", beta, grid_points, gap_tol)
    if key not in _SPECTRUM_CACHE:
        grid = GridSpec(points=grid_points)
        _SPECTRUM_CACHE[key] = dipole.resonance_energy_scale(
            beta, 1.0, grid, gap_tol=gap_tol)
    return _SPECTRUM_CACHE[key]


def _energy_scale(cfg):
    if cfg.energy_scale == "resonance":
        return _resonant_scale(cfg.beta, cfg.grid_points, cfg.gap_tol)
    try:
        value = float(cfg.energy_scale)
    except ValueError:
        raise ValidationError("energy_scale must be 'resonance' or a number") from None
    if value <= 0:
        raise ValidationError("energy_scale must be positive")
    return value


def _main_spectrum(cfg, levels=None):
    e_scale = _energy_scale(cfg)
    key = ("mt", cfg.beta, e_scale, cfg.grid_points, levels or cfg.levels, cfg.gap_tol)
    if key not in _SPECTRUM_CACHE:
        grid = GridSpec(points=cfg.grid_points)
        _SPECTRUM_CACHE[key] = dipole.solve_double_well(
            WellShape(cfg.beta, e_scale), grid, levels or cfg.levels,
            gap_tol=cfg.gap_tol)
    return _SPECTRUM_CACHE[key]


def _alpha_tokens(cfg, params_eta0):
    """Resolve alpha_list tokens to constant gauges.

    The token "jc" means the Jaynes-Cummings gauge; for constant-gauge sweeps
    it is resolved once at eta = 0 (the figure's three gauges are fixed
    numbers, not eta-dependent curves).
    """
    out = []
    for tok in cfg.alpha_list:
        if tok == "jc":
            out.append(gauge.jc_gauge(params_eta0))
        else:
            value = float(tok)
            if not 0.0 <= value <= 1.0:
                raise ValidationError("alpha values must lie in [0, 1]")
            out.append(value)
    return out


THERMO_HEADER = ("alpha", "eta", "tau", "phase", "E_plus", "E_minus",
                 "ground_density", "pi_average", "p_t_average")


def _thermo_row(params):
    couplings, point = thermo.evaluate(params)
    tau = couplings.tau
    return (params.alpha, params.eta, tau, point.phase.value, point.e_plus,
            point.e_minus, point.ground_density, point.pi_average,
            point.p_t_average)


def _cmd_thermo_like(cfg, writer):
    spectrum = _main_spectrum(cfg)
    base = ReducedParams(omega=1.0, beta=cfg.beta, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)
    alphas = _alpha_tokens(cfg, base)
    etas = cfg.eta_values()
    points = [base.with_(alpha=alpha, eta=eta) for alpha in alphas for eta in etas]
    for row in _pmap(_thermo_row, points, cfg.threads):
        writer.write_row(row)


def _cmd_fig2(cfg, writer):
    """d<Pi> sweeps in the eta-dependent JC gauge and the multipolar gauge."""
    spectrum = _main_spectrum(cfg)
    base = ReducedParams(omega=1.0, beta=cfg.beta, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)
    etas = cfg.eta_values()

    def point_rows(eta):
        p_eta = base.with_(eta=eta)
        alpha_jc = gauge.jc_gauge(p_eta)
        return [_thermo_row(p_eta.with_(alpha=alpha_jc)),
                _thermo_row(p_eta.with_(alpha=1.0))]

    for rows in _pmap(point_rows, etas, cfg.threads):
        for row in rows:
            writer.write_row(row)


def _phase_label(params):
    couplings = derive_couplings(params)
    return thermo.classify(couplings, params.omega_m).value


EXACT_HEADER = ("eta", "alpha", "phase", "n_dipoles", "model", "G", "E",
                "gap_over_omega")


def _cmd_exact_sweep(cfg, writer, n_list=None, alpha=None, include_two_level=True):
    spectrum = _main_spectrum(cfg)
    base = ReducedParams(omega=1.0, beta=cfg.beta, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)
    if alpha is None:
        alphas = _alpha_tokens(cfg, base)
    else:
        alphas = [alpha]
    etas = cfg.eta_values()
    for n in n_list or [cfg.n_dipoles]:
        hil = cfg.hilbert(n_dipoles=n, representation="product")
        for a in alphas:
            template = base.with_(n_dipoles=n, alpha=a)
            if cfg.convention == "self-energy-in-bare":
                rows = _seib_rows(cfg, hil, template, etas)
            else:
                rows = exactn.transition_sweep(hil, template, etas,
                                               include_two_level=include_two_level)
            for row in rows:
                phase = _phase_label(base.with_(alpha=row["alpha"], eta=row["eta"]))
                writer.write_row((row["eta"], row["alpha"], phase, n, row["model"],
                                  row["G"], row["E"], row["gap_over_omega"]))


def _seib_rows(cfg, hil, template, etas):
    """Exact-model rows with the self-energy absorbed into each point's well."""
    grid = GridSpec(points=cfg.grid_points)
    rows = []
    for eta in etas:
        params = template.with_(eta=float(eta))
        shape = WellShape(cfg.beta, template.energy_scale,
                          SelfEnergyInBare(params.alpha,
                                           eta / math.sqrt(hil.n_dipoles), 1.0))
        spec_pt = dipole.solve_double_well(shape, grid, max(cfg.levels, hil.dipole_levels),
                                           gap_tol=cfg.gap_tol)
        h = exactn.assemble(hil, params, spec_pt, SelfEnergyInBare)
        vals = exactn.lowest_eigenvalues(h, 2)
        rows.append({"eta": float(eta), "alpha": params.alpha, "model": "exact",
                     "G": float(vals[0]), "E": float(vals[1]),
                     "gap_over_omega": float(vals[1] - vals[0])})
    return rows


def _cmd_fig3a(cfg, writer):
    for n in (1, 2, 3, 4):
        sub = RunConfig(command="exact-sweep", beta=cfg.beta, eta_grid=cfg.eta_grid,
                        n_dipoles=n,
                        dipole_levels=8 if n <= 3 else 6,
                        fock_cutoff=40 if n <= 3 else 30,
                        energy_scale=cfg.energy_scale, levels=cfg.levels,
                        threads=cfg.threads, budget=cfg.budget,
                        gap_tol=cfg.gap_tol, grid_points=cfg.grid_points)
        _cmd_exact_sweep(sub, writer, n_list=[n], alpha=1.0)


FIG3B_HEADER = ("eta", "alpha", "phase", "d2_n1", "d2_n2", "d2_n3", "d2_n4",
                "d2_thermo")


def _cmd_fig3b(cfg, writer):
    """Second derivative of G_s per dipole: N = 1..4 plus the analytic limit.

    The finite-N curves use the collective two-level model, the family whose
    thermodynamic limit the analytic column describes.
    """
    spectrum = _main_spectrum(cfg)
    base = ReducedParams(omega=1.0, beta=cfg.beta, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)
    etas = cfg.eta_values()
    by_n = {}
    for n in (1, 2, 3, 4):
        hil = HilbertConfig(n, 2, cfg.fock_cutoff, representation=CollectiveSpin(),
                            budget=cfg.budget)
        rows = exactn.second_derivative_sweep(hil, base.with_(n_dipoles=n), etas)
        by_n[n] = {eta: val for eta, val in rows}
    interior = etas[1:-1]
    analytic = dict(thermo.ground_density_second_derivative(base, interior))
    for eta in interior:
        phase = _phase_label(base.with_(eta=eta))
        writer.write_row((eta, 1.0, phase, by_n[1][eta], by_n[2][eta],
                          by_n[3][eta], by_n[4][eta], analytic[eta]))


def _cmd_sfigs(cfg, writer_factory):
    """Companion sweeps: absorbed-self-energy polaritons and small-N gauges."""
    # Sheet 1: thermodynamic-limit E-/E+ with the self-energy absorbed into
    # the well, at the scale where the unshifted gap is resonant.
    e_scale = _resonant_scale(2.4, cfg.grid_points, cfg.gap_tol)
    grid = GridSpec(points=cfg.grid_points)
    writer = writer_factory("absorbed", THERMO_HEADER)
    base0 = ReducedParams(omega=1.0, beta=2.4, energy_scale=e_scale, eta=0.0,
                          n_dipoles=1, alpha=1.0,
                          spectrum=dipole.solve_double_well(
                              WellShape(2.4, e_scale), grid, cfg.levels,
                              gap_tol=cfg.gap_tol))
    alphas = _alpha_tokens(cfg, base0)
    well_memo = {}

    def absorbed_row(task):
        alpha, eta = task
        shape = WellShape(2.4, e_scale, SelfEnergyInBare(alpha, eta, 1.0))
        # The well depends on (alpha, eta) only through its quadratic
        # coefficient, so alpha=0 and eta=0 points share one solve.
        q = shape.quadratic_coefficient()
        if q not in well_memo:
            well_memo[q] = dipole.solve_double_well(shape, grid, 2,
                                                    gap_tol=cfg.gap_tol)
        return _thermo_row(base0.with_(alpha=alpha, eta=eta,
                                       spectrum=well_memo[q]))

    tasks = [(alpha, eta) for alpha in alphas for eta in cfg.eta_values()]
    for row in _pmap(absorbed_row, tasks, cfg.threads):
        writer.write_row(row)
    writer.close()

    # Sheet 2: N in {1,2,3} at beta=1.5, exact multipolar model against the
    # two-level models in the Coulomb, JC (eta-dependent), and multipolar
    # gauges.
    sub = RunConfig(command="exact-sweep", beta=1.5, eta_grid=cfg.eta_grid,
                    dipole_levels=cfg.dipole_levels, fock_cutoff=cfg.fock_cutoff,
                    energy_scale="resonance", levels=cfg.levels,
                    threads=cfg.threads, budget=cfg.budget,
                    gap_tol=cfg.gap_tol, grid_points=cfg.grid_points)
    spectrum = _main_spectrum(sub)
    base = ReducedParams(omega=1.0, beta=1.5, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)
    writer = writer_factory("gauges", EXACT_HEADER)
    etas = sub.eta_values()
    for n in (1, 2, 3):
        hil = sub.hilbert(n_dipoles=n, representation="product")
        two = HilbertConfig(n, 2, sub.fock_cutoff, representation=CollectiveSpin(),
                            budget=sub.budget)
        rows = exactn.transition_sweep(hil, base.with_(n_dipoles=n, alpha=1.0),
                                       etas, include_two_level=False)
        for row in rows:
            phase = _phase_label(base.with_(eta=row["eta"]))
            writer.write_row((row["eta"], row["alpha"], phase, n, "exact",
                              row["G"], row["E"], row["gap_over_omega"]))
        for eta in etas:
            p_eta = base.with_(n_dipoles=n, eta=eta)
            gauges = [("two_level_coulomb", 0.0),
                      ("two_level_jc", gauge.jc_gauge(p_eta)),
                      ("two_level_multipolar", 1.0)]
            for label, alpha in gauges:
                h2 = exactn.dicke_two_level(two, p_eta.with_(alpha=alpha), spectrum)
                vals = exactn.lowest_eigenvalues(h2, 2)
                phase = _phase_label(base.with_(alpha=alpha, eta=eta))
                writer.write_row((eta, alpha, phase, n, label,
                                  float(vals[0]), float(vals[1]),
                                  float(vals[1] - vals[0])))
    writer.close()


def _cmd_jc_curve(cfg, writer):
    spectrum = _main_spectrum(cfg)
    base = ReducedParams(omega=1.0, beta=cfg.beta, energy_scale=spectrum.shape.energy_scale,
                         eta=0.0, n_dipoles=1, alpha=1.0, spectrum=spectrum)

    def jc_row(eta):
        p_eta = base.with_(eta=eta)
        alpha_jc = gauge.jc_gauge(p_eta)
        return (eta, alpha_jc, _phase_label(p_eta.with_(alpha=alpha_jc)))

    for row in _pmap(jc_row, cfg.eta_values(), cfg.threads):
        writer.write_row(row)


CONV_HEADER = ("eta", "alpha", "phase", "dipole_levels", "fock_cutoff",
               "dimension", "G", "E", "delta_G", "delta_E", "fock_tail", "flags")


def _cmd_convergence(cfg, writer):
    spectrum = _main_spectrum(cfg, levels=max(cfg.levels,
                                              max(l for l, _ in cfg.ladder)))
    params = ReducedParams(omega=1.0, beta=cfg.beta,
                           energy_scale=spectrum.shape.energy_scale,
                           eta=cfg.eta_point, n_dipoles=cfg.n_dipoles,
                           alpha=cfg.alpha_point, spectrum=spectrum)
    ladder = [HilbertConfig(cfg.n_dipoles, l, m, budget=cfg.budget)
              for l, m in cfg.ladder]
    phase = _phase_label(params)
    for row in exactn.convergence_report(ladder, params, spectrum):
        writer.write_row((cfg.eta_point, cfg.alpha_point, phase,
                          row["dipole_levels"], row["fock_cutoff"],
                          row["dimension"], row["G"], row["E"],
                          "" if row["delta_G"] is None else row["delta_G"],
                          "" if row["delta_E"] is None else row["delta_E"],
                          row["fock_tail"], row["flags"]))


def _cmd_spectrum(cfg, provenance):
    spectrum = _main_spectrum(cfg)
    path = cfg.output_path or "spectrum.csv"
    dipole.export_csv(spectrum, path, provenance=provenance)
    return path


def run(cfg: RunConfig) -> int:
    """Dispatch one command; returns the process exit code."""
    provenance = (f"config {cfg.digest()} command={cfg.command} beta={cfg.beta} "
                  f"eta_grid={cfg.eta_grid[0]:g}:{cfg.eta_grid[1]:g}:{cfg.eta_grid[2]} "
                  f"L={cfg.dipole_levels} M={cfg.fock_cutoff} "
                  f"convention={cfg.convention} grid_points={cfg.grid_points}")
    if cfg.command == "spectrum":
        _cmd_spectrum(cfg, provenance)
        return 0

    out = cfg.output_path or f"{cfg.command}.csv"
    if cfg.command == "s-figs":
        stem = out[:-4] if out.endswith(".csv") else out
        writers = []

        def factory(tag, header):
            w = CsvWriter(f"{stem}_{tag}.csv", header, provenance)
            writers.append(w)
            return w

        try:
            _cmd_sfigs(cfg, factory)
        except BaseException:
            for w in writers:
                w.truncate_marker()
                w.close()
            raise
        return 0

    headers = {
        "thermo-sweep": THERMO_HEADER, "fig1": THERMO_HEADER, "fig2": THERMO_HEADER,
        "exact-sweep": EXACT_HEADER, "fig3a": EXACT_HEADER,
        "fig3b": FIG3B_HEADER, "jc-curve": ("eta", "alpha_jc", "phase"),
        "convergence": CONV_HEADER,
    }
    writer = CsvWriter(out, headers[cfg.command], provenance)
    try:
        if cfg.command in ("thermo-sweep", "fig1"):
            _cmd_thermo_like(cfg, writer)
        elif cfg.command == "fig2":
            _cmd_fig2(cfg, writer)
        elif cfg.command == "exact-sweep":
            _cmd_exact_sweep(cfg, writer)
        elif cfg.command == "fig3a":
            _cmd_fig3a(cfg, writer)
        elif cfg.command == "fig3b":
            _cmd_fig3b(cfg, writer)
        elif cfg.command == "jc-curve":
            _cmd_jc_curve(cfg, writer)
        elif cfg.command == "convergence":
            _cmd_convergence(cfg, writer)
    except BaseException:
        writer.truncate_marker()
        writer.close()
        raise
    writer.close()
    return 0


def _error_record(err):
    if isinstance(err, BudgetError):
        code = EXIT_BUDGET
    elif isinstance(err, _CONVERGENCE_ERRORS):
        code = EXIT_CONVERGENCE
    elif isinstance(err, _VALIDATION_ERRORS):
        code = EXIT_VALIDATION
    else:
        code = EXIT_VALIDATION if isinstance(err, DickelabError) else 1
    record = {"error": type(err).__name__, "message": str(err), "exit_code": code}
    return code, record


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dickelab",
        description="Phase structure and finite-size spectra of coupled "
                    "dipole-mode models; emits CSV data tables.")
    parser.add_argument("--config", help="flat KEY = VALUE config file")
    parser.add_argument("--command", choices=COMMANDS)
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("overrides", nargs="*", metavar="KEY=VALUE",
                        help="config overrides, applied after the file")
    args = parser.parse_args(argv)

    try:
        items = read_config_file(args.config) if args.config else {}
        for override in args.overrides:
            if "=" not in override:
                raise ValidationError(f"override {override!r} is not KEY=VALUE")
            key, value = override.split("=", 1)
            items[key.strip()] = value.strip()
        if args.command:
            items["command"] = args.command
        if args.out:
            items["output_path"] = args.out
        if args.threads is not None:
            items["threads"] = str(args.threads)
        if args.budget is not None:
            items["budget"] = str(args.budget)
        return run(build_config(items))
    except Exception as err:  # noqa: BLE001 - single reporting funnel
        code, record = _error_record(err)
        json.dump(record, sys.stderr)
        sys.stderr.write("\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
