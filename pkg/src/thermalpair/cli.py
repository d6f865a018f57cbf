"""Command-line front end: coefficients, phase diagrams, trajectories, equilibria.

All inputs come from a single JSON config (path argument or standard
input); all dimensionful outputs are reported in units of omega, so CSV
and JSON carry only dimensionless groups (beta*omega, omega*ell, omega*t,
rates over omega).  Standard output carries data only; diagnostics go to
standard error.  Identical configs produce byte-identical output: floats
are printed with 17 significant digits, orderings are fixed, and the
worker pool gathers sweep rows in grid order.

Exit codes: 0 ok, 2 config validation failure, 3 discriminant/oracle
disagreement (implementation bug guard), 4 positivity failure during
evolution, 5 asymptotic convergence-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import asymptotic, dynamics, entanglement
from .spectral import ModelParams, build_kossakowski_closed, kossakowski_coefficients

PHASE_HEADER = "beta_omega,omega_ell,R,S,rs_margin,discriminant_margin,generated,oracle_generated"
EVOLVE_HEADER = "t,trace,min_eig,min_eig_pt,concurrence,tau"


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class Tolerances:
    boundary: float = 1e-12       # generation-test boundary band, relative to |K|^2
    oracle_dt: float = 1e-3       # small-time oracle step, units 1/omega
    oracle_band: float = 1e-3     # |rs_margin| band outside which oracle must agree
    positivity: float = 1e-8      # hard positivity failure threshold
    convergence: float = 1e-8     # asymptotic cross-check, trace norm
    nullspace: float = 1e-10      # singular-value cutoff for stationary states


@dataclass
class SweepSpec:
    beta_omega: np.ndarray
    omega_ell: np.ndarray


@dataclass
class RunConfig:
    params: ModelParams
    rho0: np.ndarray
    times: np.ndarray | None = None        # units 1/omega
    sweep: SweepSpec | None = None
    include_hs: bool = False
    tolerances: Tolerances = field(default_factory=Tolerances)


@dataclass
class SweepRecord:
    """One phase-diagram grid point (canonical initial state)."""

    beta_omega: float
    omega_ell: float
    R: float
    S: float
    rs_margin: float
    discriminant_margin: float
    generated: str                      # "true" | "false" | "boundary"
    oracle_generated: bool
    asympt_concurrence: float | None = None
    stationary_dim: int | None = None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _parse_axis(raw) -> np.ndarray:
    _require(isinstance(raw, (list, tuple)) and len(raw) == 3,
             "n must be a 3-vector")
    try:
        return np.asarray([float(x) for x in raw])
    except (TypeError, ValueError):
        raise ConfigError("n must contain three numbers") from None


def _parse_complex_matrix(entries) -> np.ndarray:
    _require(isinstance(entries, list) and len(entries) == 16,
             "matrix initial state needs 16 complex entries (row-major)")
    vals = []
    for e in entries:
        _require(isinstance(e, (list, tuple)) and len(e) == 2,
                 "complex entries must be [re, im] pairs")
        vals.append(complex(float(e[0]), float(e[1])))
    return np.array(vals, dtype=complex).reshape(4, 4)


def _parse_initial_state(raw, n) -> np.ndarray:
    if raw is None:
        raw = {"named": "canonical"}
    _require(isinstance(raw, dict) and len(raw) == 1,
             "initial_state must be one of {named|product|matrix}")
    tag, value = next(iter(raw.items()))
    if tag == "named":
        if value == "singlet":
            return dynamics.singlet_density()
        if value == "canonical":
            return entanglement.canonical_state(n).density()
        raise ConfigError(f"unknown named state {value!r} (singlet|canonical)")
    if tag == "product":
        _require(isinstance(value, dict) and set(value) == {"bloch1", "bloch2"},
                 "product initial state needs bloch1 and bloch2")
        try:
            state = entanglement.ProductState(_parse_axis(value["bloch1"]),
                                              _parse_axis(value["bloch2"]))
        except ValueError as exc:
            raise ConfigError(f"invalid product state: {exc}") from None
        return state.density()
    if tag == "matrix":
        rho = _parse_complex_matrix(value)
        try:
            return dynamics.validate_density_matrix(rho)
        except ValueError as exc:
            raise ConfigError(f"matrix initial state invalid: {exc}") from None
    raise ConfigError(f"unknown initial_state tag {tag!r}")


def _parse_time_grid(raw) -> np.ndarray:
    if isinstance(raw, list):
        raw = {"times": raw}
    _require(isinstance(raw, dict), "time_grid must be an object or a list of times")
    if "times" in raw:
        try:
            times = np.asarray([float(t) for t in raw["times"]], dtype=float)
        except (TypeError, ValueError):
            raise ConfigError("time_grid times must be numbers") from None
        _require(times.ndim == 1 and len(times) > 0, "time_grid must be nonempty")
        _require(times[0] >= 0 and np.all(np.diff(times) > 0),
                 "time_grid must be sorted, strictly increasing and nonnegative")
        return times
    _require(set(raw) <= {"t_max", "n_samples"} and "t_max" in raw,
             "time_grid needs t_max (and optional n_samples) or times")
    t_max = float(raw["t_max"])
    n_samples = int(raw.get("n_samples", 101))
    _require(t_max > 0 and n_samples >= 2, "need t_max > 0 and n_samples >= 2")
    return np.linspace(0.0, t_max, n_samples)


def _parse_sweep(raw) -> SweepSpec:
    _require(isinstance(raw, dict) and set(raw) == {"beta_omega", "omega_ell"},
             "sweep needs beta_omega and omega_ell ranges")

    def linrange(spec, name, positive):
        _require(isinstance(spec, (list, tuple)) and len(spec) == 3,
                 f"sweep.{name} must be [min, max, steps]")
        lo, hi, steps = float(spec[0]), float(spec[1]), int(spec[2])
        _require(steps >= 1 and hi >= lo, f"sweep.{name} range is empty")
        _require(lo > 0 if positive else lo >= 0, f"sweep.{name} minimum out of range")
        return np.linspace(lo, hi, steps)

    return SweepSpec(beta_omega=linrange(raw["beta_omega"], "beta_omega", True),
                     omega_ell=linrange(raw["omega_ell"], "omega_ell", False))


def parse_config(doc: dict) -> RunConfig:
    _require(isinstance(doc, dict), "config must be a JSON object")
    known = {"omega", "beta", "ell", "n", "initial_state", "time_grid",
             "sweep", "tolerances", "include_hs"}
    unknown = set(doc) - known
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")

    omega = doc.get("omega", 1.0)
    beta = doc.get("beta", 1.0)
    ell = doc.get("ell", 0.0)
    if beta == "inf":
        beta = math.inf
    n = _parse_axis(doc.get("n", [0.0, 0.0, 1.0]))
    try:
        params = ModelParams(omega=float(omega), beta=float(beta), ell=float(ell), n=n)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from None

    tol = Tolerances()
    raw_tol = doc.get("tolerances", {})
    _require(isinstance(raw_tol, dict), "tolerances must be an object")
    for key, value in raw_tol.items():
        _require(hasattr(tol, key), f"unknown tolerance {key!r}")
        value = float(value)
        _require(value > 0, f"tolerance {key} must be positive")
        setattr(tol, key, value)

    include_hs = doc.get("include_hs", False)
    _require(isinstance(include_hs, bool), "include_hs must be a boolean")

    rho0 = _parse_initial_state(doc.get("initial_state"), params.n)
    times = _parse_time_grid(doc["time_grid"]) if "time_grid" in doc else None
    sweep = _parse_sweep(doc["sweep"]) if "sweep" in doc else None
    return RunConfig(params=params, rho0=rho0, times=times, sweep=sweep,
                     include_hs=include_hs, tolerances=tol)


def load_config(path: str | None) -> RunConfig:
    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(doc)


def _complex_pairs(rho: np.ndarray) -> list:
    """Row-major [re, im] pairs of a matrix."""
    return [[float(z.real), float(z.imag)] for z in np.asarray(rho).reshape(-1)]


def _write_out(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_coefficients(config: RunConfig, out_path: str | None) -> int:
    """Kossakowski coefficients (in units of omega) plus R and S."""
    w = config.params.omega
    c = kossakowski_coefficients(config.params)
    R, S, _ = entanglement.criterion_rs(config.params)
    doc = {"A": c.A / w, "B": c.B / w, "C": c.C / w,
           "A'": c.Ap / w, "B'": c.Bp / w, "C'": c.Cp / w, "R": R, "S": S}
    _write_out(json.dumps(doc, indent=2) + "\n", out_path)
    return 0


def _sweep_point(omega, n, beta_omega, omega_ell, include_hs, tol) -> SweepRecord:
    params = ModelParams(omega=omega, beta=beta_omega / omega, ell=omega_ell / omega, n=n)
    K = build_kossakowski_closed(params)
    M = dynamics.build_superoperator(K, params, include_hs=include_hs)
    state = entanglement.canonical_state(n)
    verdict = entanglement.generation_test(state, K, params=params,
                                           boundary_tol=tol.boundary)
    oracle = entanglement.small_time_ppt_oracle(M, state.density(), tol.oracle_dt / omega)
    dim = len(asymptotic.stationary_basis(M, tol=tol.nullspace))
    conc = None
    if omega_ell == 0:
        conc = asymptotic.asymptotic_concurrence(verdict.R, dynamics.tau(state.density()))
    return SweepRecord(beta_omega=beta_omega, omega_ell=omega_ell,
                       R=verdict.R, S=verdict.S, rs_margin=verdict.rs_margin,
                       discriminant_margin=verdict.margin / omega**2,
                       generated=verdict.label, oracle_generated=oracle,
                       asympt_concurrence=conc, stationary_dim=dim)


def cmd_phase_diagram(config: RunConfig, out_path: str | None, threads: int) -> int:
    """Sweep the (beta*omega, omega*ell) grid with the canonical initial state."""
    if config.sweep is None:
        raise ConfigError("phase-diagram requires a sweep section")
    tol = config.tolerances
    grid = [(bw, wl) for bw in config.sweep.beta_omega for wl in config.sweep.omega_ell]

    def work(point):
        bw, wl = point
        return _sweep_point(config.params.omega, config.params.n, bw, wl,
                            config.include_hs, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, grid))
    else:
        records = [work(p) for p in grid]

    mismatches = [r for r in records
                  if abs(r.rs_margin) > tol.oracle_band
                  and (r.generated == "true") != r.oracle_generated]
    if mismatches:
        r = mismatches[0]
        print(f"error: discriminant and small-time oracle disagree at "
              f"beta_omega={r.beta_omega}, omega_ell={r.omega_ell} "
              f"(rs_margin={r.rs_margin}, oracle={r.oracle_generated}); "
              f"{len(mismatches)} point(s) total", file=sys.stderr)
        return 3

    lines = [PHASE_HEADER]
    for r in records:
        lines.append(",".join([
            _fmt(r.beta_omega), _fmt(r.omega_ell), _fmt(r.R), _fmt(r.S),
            _fmt(r.rs_margin), _fmt(r.discriminant_margin), r.generated,
            "true" if r.oracle_generated else "false",
        ]))
    _write_out("\n".join(lines) + "\n", out_path)
    return 0


def cmd_evolve(config: RunConfig, out_path: str | None) -> int:
    """Trajectory dump: per-sample trace, spectra and entanglement scalars."""
    if config.times is None:
        raise ConfigError("evolve requires a time_grid section")
    params = config.params
    K = build_kossakowski_closed(params)
    M = dynamics.build_superoperator(K, params, include_hs=config.include_hs)
    times_abs = config.times / params.omega
    try:
        traj = dynamics.evolve_traj(M, config.rho0, times_abs,
                                    pos_tol=config.tolerances.positivity)
    except dynamics.PositivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4

    lines = [EVOLVE_HEADER]
    for t_dimless, rho in zip(config.times, traj.states):
        lines.append(",".join([
            _fmt(t_dimless),
            _fmt(np.trace(rho).real),
            _fmt(np.linalg.eigvalsh(rho).min()),
            _fmt(entanglement.min_eig_pt(rho)),
            _fmt(entanglement.concurrence(rho)),
            _fmt(dynamics.tau(rho)),
        ]))
    _write_out("\n".join(lines) + "\n", out_path)

    rho_inf = asymptotic.asymptotic_state(M, config.rho0, params, check=False)
    dist = dynamics.trace_norm(traj.states[-1] - rho_inf)
    summary = {"final_time": float(config.times[-1]),
               "trace_distance_to_asymptotic": dist,
               "asymptotic_concurrence": entanglement.concurrence(rho_inf)}
    if out_path is None:
        print(json.dumps(summary), file=sys.stderr)
    else:
        with open(out_path + ".summary.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_asymptotic(config: RunConfig, out_path: str | None) -> int:
    """Stationary-state report for the configured parameters and initial state."""
    params = config.params
    K = build_kossakowski_closed(params)
    M = dynamics.build_superoperator(K, params, include_hs=config.include_hs)
    dim = len(asymptotic.stationary_basis(M, tol=config.tolerances.nullspace))
    try:
        rho_inf = asymptotic.asymptotic_state(M, config.rho0, params, check=True,
                                              conv_tol=config.tolerances.convergence)
    except asymptotic.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    R, _, _ = entanglement.criterion_rs(params)
    doc = {"stationary_dim": dim,
           "rho_infinity": _complex_pairs(rho_inf),
           "concurrence": entanglement.concurrence(rho_inf),
           "tau": dynamics.tau(rho_inf),
           "threshold_tau": asymptotic.threshold_tau(R)}
    _write_out(json.dumps(doc, indent=2) + "\n", out_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermalpair",
        description="Two two-level atoms in a common thermal field bath: "
                    "dissipative dynamics and entanglement generation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (("coefficients", "Kossakowski coefficients as JSON"),
                        ("phase-diagram", "generation phase diagram as CSV"),
                        ("evolve", "trajectory dump as CSV"),
                        ("asymptotic", "stationary-state report as JSON")):
        p = sub.add_parser(name, help=descr)
        p.add_argument("--config", default=None,
                       help="JSON config path (default: standard input)")
        p.add_argument("--out", default=None,
                       help="output path (default: standard output)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for sweeps (output order is fixed)")
        p.add_argument("--include-hs", action="store_true",
                       help="add the free-Hamiltonian commutator to the generator")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.include_hs:
        config.include_hs = True
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        if args.command == "coefficients":
            return cmd_coefficients(config, args.out)
        if args.command == "phase-diagram":
            return cmd_phase_diagram(config, args.out, args.threads)
        if args.command == "evolve":
            return cmd_evolve(config, args.out)
        if args.command == "asymptotic":
            return cmd_asymptotic(config, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
