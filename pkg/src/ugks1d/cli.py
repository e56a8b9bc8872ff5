"""Configuration-driven experiment runner with CSV persistence.

Commands
--------
run       --config path                 one experiment, writes norms.csv etc.
sweep     --config path --taus list     rerun across relaxation times
converge  --config path --cells list    refinement study vs the exact solution
spectra   --alpha a --betas list        stability-region samples as CSV
plotting  (see the separate frontend package; it consumes these CSVs)

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 invariant
violation.  All CSV numbers use the shortest round-trip decimal form, so
reruns with identical config and seed produce byte-identical files.

If the environment variable ``UGKS1D_OUTPUT_ROOT`` is set, relative
output directories are resolved against it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .fields import SpatialGrid
from .model import ModelParams, VelocityGrid, build_grid
from .rng import SplitMix64
from .solver import (
    KineticState,
    StepConfig,
    StepRecord,
    init_equilibrium,
    init_nonequilibrium,
    run,
)
from .spectral import critical_beta, default_xi_samples, stability_region_samples

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INVARIANT = 4

OUTPUT_ROOT_ENV = "UGKS1D_OUTPUT_ROOT"

#: Per-step relative slack allowed on the non-increasing weighted norm.
MONOTONE_SLACK = 1e-12
#: Constraint residual bound: relative to max|u0| with an absolute floor.
RESIDUAL_REL = 1e-12
RESIDUAL_FLOOR = 1e-14

IC_KINDS = ("equilibrium-sine", "equilibrium-gaussian", "random-nonequilibrium")


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


@dataclass(frozen=True)
class ExperimentConfig:
    a: float
    theta: float
    tau: float
    K: int
    coverage: float
    I: int
    length: float
    t_end: float
    cfl_safety: float = 0.9
    dt_override: float | None = None
    ic_kind: str = "equilibrium-sine"
    amplitude: float = 1.0
    wavenumber: int = 1
    seed: int | None = None
    directory: str = "out"
    record_submethods: bool = False
    record_spectra: bool = False
    record_final_f: bool = False


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing '{key}' in '{where}'")
    return section[key]


def parse_config(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        model = _require(doc, "model", "config")
        vgrid = _require(doc, "velocity_grid", "config")
        sgrid = _require(doc, "spatial_grid", "config")
        runsec = _require(doc, "run", "config")
        ic = _require(doc, "initial_condition", "config")
        outputs = _require(doc, "outputs", "config")
        cfg = ExperimentConfig(
            a=float(_require(model, "a", "model")),
            theta=float(_require(model, "theta", "model")),
            tau=float(_require(model, "tau", "model")),
            K=int(_require(vgrid, "K", "velocity_grid")),
            coverage=float(_require(vgrid, "coverage", "velocity_grid")),
            I=int(_require(sgrid, "I", "spatial_grid")),
            length=float(_require(sgrid, "length", "spatial_grid")),
            t_end=float(_require(runsec, "t_end", "run")),
            cfl_safety=float(runsec.get("cfl_safety", 0.9)),
            dt_override=(
                float(runsec["dt_override"])
                if runsec.get("dt_override") is not None
                else None
            ),
            ic_kind=str(_require(ic, "kind", "initial_condition")),
            amplitude=float(ic.get("amplitude", 1.0)),
            wavenumber=int(ic.get("wavenumber", 1)),
            seed=(int(ic["seed"]) if ic.get("seed") is not None else None),
            directory=str(_require(outputs, "directory", "outputs")),
            record_submethods=bool(outputs.get("record_submethods", False)),
            record_spectra=bool(outputs.get("record_spectra", False)),
            record_final_f=bool(outputs.get("record_final_f", False)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed configuration value: {exc}") from exc

    if not (cfg.a > 0 and cfg.theta > 0 and cfg.tau > 0):
        raise ConfigError("model parameters a, theta, tau must be positive")
    if cfg.K < 1 or not cfg.coverage > 0:
        raise ConfigError("velocity_grid needs K >= 1 and coverage > 0")
    if cfg.I < 2 or not cfg.length > 0:
        raise ConfigError("spatial_grid needs I >= 2 and length > 0")
    if cfg.t_end < 0:
        raise ConfigError("run.t_end must be >= 0")
    if not (0 < cfg.cfl_safety <= 1):
        raise ConfigError("run.cfl_safety must lie in (0, 1]")
    if cfg.dt_override is not None and not cfg.dt_override > 0:
        raise ConfigError("run.dt_override must be positive when given")
    if cfg.ic_kind not in IC_KINDS:
        raise ConfigError(f"initial_condition.kind must be one of {IC_KINDS}")
    if cfg.ic_kind == "random-nonequilibrium" and cfg.seed is None:
        raise ConfigError("random-nonequilibrium initial condition requires a seed")
    if cfg.ic_kind == "equilibrium-sine" and cfg.wavenumber < 1:
        raise ConfigError("equilibrium-sine requires wavenumber >= 1")
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError:
        raise
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)


def resolve_output_dir(directory: str) -> Path:
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root:
        return Path(root) / directory
    return Path(directory)


def build_problem(cfg: ExperimentConfig):
    params = ModelParams(a=cfg.a, theta=cfg.theta, tau=cfg.tau)
    vgrid = build_grid(params, K=cfg.K, coverage=cfg.coverage)
    sgrid = SpatialGrid.from_length(cfg.I, cfg.length)
    return params, vgrid, sgrid


def build_initial_state(
    cfg: ExperimentConfig, vgrid: VelocityGrid, sgrid: SpatialGrid
) -> KineticState:
    if cfg.ic_kind == "equilibrium-sine":
        k = 2.0 * math.pi * cfg.wavenumber / cfg.length

        def profile(x):
            return cfg.amplitude * math.sin(k * x)

        return init_equilibrium(profile, vgrid, sgrid)
    if cfg.ic_kind == "equilibrium-gaussian":
        center = 0.5 * cfg.length
        width = 0.1 * cfg.length

        def profile(x):
            return cfg.amplitude * math.exp(-((x - center) ** 2) / (2.0 * width**2))

        return init_equilibrium(profile, vgrid, sgrid)
    # random-nonequilibrium: macroscopic noise plus a projected velocity
    # perturbation, both drawn from the documented SplitMix64 stream
    # (u first, then p row-major).
    rng = SplitMix64(cfg.seed)
    u = cfg.amplitude * (2.0 * rng.floats((sgrid.I,)) - 1.0)
    p = cfg.amplitude * (2.0 * rng.floats((vgrid.size, sgrid.I)) - 1.0)
    values = iter(u)
    return init_nonequilibrium(lambda _x: float(next(values)), p, vgrid, sgrid)


def exact_sine_solution(cfg: ExperimentConfig, x: np.ndarray, t: float) -> np.ndarray:
    """Advection-diffusion evolution of the sine initial profile."""
    k = 2.0 * math.pi * cfg.wavenumber / cfg.length
    nu = 0.5 * cfg.theta * cfg.tau
    return cfg.amplitude * math.exp(-nu * k * k * t) * np.sin(k * (x - cfg.a * t))


def fmt(x) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(x))


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


@dataclass
class ExperimentOutcome:
    exit_code: int
    violations: list[str]
    out_dir: Path
    records: list[StepRecord]
    dt_used: float
    max_norm_ratio: float
    final_constraint_residual: float


def _check_invariants(records: list[StepRecord], u0_inf: float) -> tuple[list[str], float]:
    violations = []
    max_ratio = 0.0
    for prev, cur in zip(records, records[1:]):
        p, c = prev.norms.weighted_l2, cur.norms.weighted_l2
        ratio = 1.0 if (p == 0.0 and c == 0.0) else (math.inf if p == 0.0 else c / p)
        max_ratio = max(max_ratio, ratio)
        if c > p * (1.0 + MONOTONE_SLACK):
            violations.append(
                f"weighted_l2 grew at step {cur.step}: {fmt(p)} -> {fmt(c)}"
            )
        if cur.norms.macro_l2 > cur.norms.weighted_l2 * (1.0 + MONOTONE_SLACK):
            violations.append(f"macro_l2 exceeds weighted_l2 at step {cur.step}")
    if records:
        bound = max(RESIDUAL_REL * u0_inf, RESIDUAL_FLOOR)
        final = records[-1].norms.constraint_residual
        if final > bound:
            violations.append(
                f"constraint residual {fmt(final)} exceeds bound {fmt(bound)}"
            )
    return violations, max_ratio


def run_experiment(cfg: ExperimentConfig, echo=print) -> ExperimentOutcome:
    params, vgrid, sgrid = build_problem(cfg)
    state = build_initial_state(cfg, vgrid, sgrid)
    u0_inf = float(np.max(np.abs(state.u)))

    step_cfg = StepConfig(
        cfl_safety=cfg.cfl_safety,
        dt_override=cfg.dt_override,
        record_submethods=cfg.record_submethods,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # CFL override warning is flagged below
        final_state, records = run(state, cfg.t_end, vgrid, sgrid, params, step_cfg)

    out_dir = resolve_output_dir(cfg.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    write_csv(
        out_dir / "norms.csv",
        ["step", "time", "dt", "weighted_l2", "macro_l2", "constraint_residual"],
        (
            [
                str(r.step),
                fmt(r.time),
                fmt(r.dt),
                fmt(r.norms.weighted_l2),
                fmt(r.norms.macro_l2),
                fmt(r.norms.constraint_residual),
            ]
            for r in records
        ),
    )
    x = sgrid.cell_centers()
    write_csv(
        out_dir / "final_state.csv",
        ["i", "x", "u"],
        (
            [str(i + 1), fmt(x[i]), fmt(final_state.u[i])]
            for i in range(sgrid.I)
        ),
    )
    if cfg.record_final_f:
        write_csv(
            out_dir / "final_f.csv",
            ["k", "c", "i", "f"],
            (
                [str(k - vgrid.K), fmt(vgrid.nodes[k]), str(i + 1), fmt(final_state.f[k, i])]
                for k in range(vgrid.size)
                for i in range(sgrid.I)
            ),
        )
    if cfg.record_submethods:
        write_csv(
            out_dir / "submethods.csv",
            [
                "step",
                "time",
                "free_transport_l2",
                "interface_collision_l2",
                "in_cell_collision_l2",
            ],
            (
                [str(r.step), fmt(r.time)] + [fmt(v) for v in r.submethod_norms]
                for r in records
                if r.submethod_norms is not None
            ),
        )
    if cfg.record_spectra:
        alpha = cfg.a / math.sqrt(cfg.theta)
        beta_used = params.wave_speed * (records[1].dt if len(records) > 1 else 0.0) / sgrid.dx
        betas = list(np.linspace(0.25, 1.5, 26) * critical_beta(alpha))
        if beta_used > 0:
            betas.append(beta_used)
        write_spectra_csv(out_dir / "stability_region.csv", alpha, betas)

    violations, max_ratio = _check_invariants(records, u0_inf)
    dt_used = records[1].dt if len(records) > 1 else 0.0
    if records and records[-1].cfl_exceeded:
        echo(f"FLAG cfl_exceeded: dt={fmt(dt_used)} above the stability bound")
    for v in violations:
        echo(f"INVARIANT VIOLATION: {v}")

    return ExperimentOutcome(
        exit_code=EXIT_INVARIANT if violations else EXIT_OK,
        violations=violations,
        out_dir=out_dir,
        records=records,
        dt_used=dt_used,
        max_norm_ratio=max_ratio,
        final_constraint_residual=(
            records[-1].norms.constraint_residual if records else 0.0
        ),
    )


def write_spectra_csv(path: Path, alpha: float, betas, xi=None) -> None:
    samples = stability_region_samples(alpha, betas, xi)
    write_csv(
        path,
        ["alpha", "beta", "xi", "gap"],
        ([fmt(s.alpha), fmt(s.beta), fmt(s.xi), fmt(s.gap)] for s in samples),
    )


def run_tau_sweep(cfg: ExperimentConfig, taus: list[float], echo=print) -> int:
    if not taus:
        raise ConfigError("tau sweep needs at least one tau")
    if any(t <= 0 for t in taus):
        raise ConfigError("all sweep taus must be positive")

    def member(tau: float) -> ExperimentOutcome:
        sub = replace(cfg, tau=tau, directory=str(Path(cfg.directory) / f"tau_{tau:g}"))
        return run_experiment(sub, echo=lambda _msg: None)

    with ThreadPoolExecutor(max_workers=min(8, len(taus))) as pool:
        outcomes = list(pool.map(member, taus))

    out_dir = resolve_output_dir(cfg.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / "tau_sweep.csv",
        ["tau", "dt_used", "dt_over_tau", "max_norm_ratio", "final_constraint_residual"],
        (
            [
                fmt(tau),
                fmt(o.dt_used),
                fmt(o.dt_used / tau),
                fmt(o.max_norm_ratio),
                fmt(o.final_constraint_residual),
            ]
            for tau, o in zip(taus, outcomes)
        ),
    )
    code = EXIT_OK
    for tau, o in zip(taus, outcomes):
        if o.exit_code != EXIT_OK:
            echo(f"INVARIANT VIOLATION: tau={fmt(tau)}: {'; '.join(o.violations)}")
            code = EXIT_INVARIANT
        if o.max_norm_ratio > 1.0 + MONOTONE_SLACK:
            code = EXIT_INVARIANT
    return code


def run_convergence(cfg: ExperimentConfig, cells: list[int], echo=print) -> int:
    if cfg.ic_kind != "equilibrium-sine":
        raise ConfigError("convergence study requires an equilibrium-sine config")
    if len(cells) < 2 or any(c < 2 for c in cells):
        raise ConfigError("convergence study needs at least two cell counts >= 2")

    rows = []
    errors = []
    code = EXIT_OK
    for I in cells:
        sub = replace(cfg, I=I, directory=str(Path(cfg.directory) / f"I_{I}"))
        outcome = run_experiment(sub, echo=lambda _msg: None)
        if outcome.exit_code != EXIT_OK:
            code = EXIT_INVARIANT
        _, vgrid, sgrid = build_problem(sub)
        x = sgrid.cell_centers()
        u_exact = exact_sine_solution(sub, x, cfg.t_end)
        u_final = np.array(
            [
                float(v)
                for v in _read_column(outcome.out_dir / "final_state.csv", "u")
            ]
        )
        err = math.sqrt(sgrid.dx * float(np.sum((u_final - u_exact) ** 2)))
        errors.append(err)
        rows.append([I, sgrid.dx, outcome.dt_used, err])

    out_dir = resolve_output_dir(cfg.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_rows = []
    for j, (I, dx, dt_used, err) in enumerate(rows):
        if j == 0:
            order = ""
        else:
            order = fmt(
                math.log(errors[j - 1] / errors[j])
                / math.log(rows[j - 1][1] / rows[j][1])
            )
        csv_rows.append([str(I), fmt(dx), fmt(dt_used), fmt(err), order])
    write_csv(
        out_dir / "convergence.csv",
        ["cells", "dx", "dt_used", "l2_error", "observed_order"],
        csv_rows,
    )
    return code


def _read_column(path: Path, name: str) -> list[str]:
    lines = path.read_text().splitlines()
    idx = lines[0].split(",").index(name)
    return [line.split(",")[idx] for line in lines[1:]]


def _parse_list(text: str, cast):
    try:
        return [cast(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"malformed list {text!r}: {exc}") from exc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ugks1d", description="first-order kinetic scheme experiment runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a JSON config")
    p_run.add_argument("--config", required=True)

    p_sweep = sub.add_parser("sweep", help="rerun one config across taus")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--taus", required=True, help="comma-separated taus")

    p_conv = sub.add_parser("converge", help="refinement study vs exact solution")
    p_conv.add_argument("--config", required=True)
    p_conv.add_argument("--cells", required=True, help="comma-separated cell counts")

    p_spec = sub.add_parser("spectra", help="emit stability-region CSV")
    p_spec.add_argument("--alpha", required=True, type=float)
    p_spec.add_argument("--betas", required=True, help="comma-separated betas")
    p_spec.add_argument("--xi-points", type=int, default=129)
    p_spec.add_argument("--out", default="stability_region.csv")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run_experiment(load_config(args.config)).exit_code
        if args.command == "sweep":
            cfg = load_config(args.config)
            return run_tau_sweep(cfg, _parse_list(args.taus, float))
        if args.command == "converge":
            cfg = load_config(args.config)
            return run_convergence(cfg, _parse_list(args.cells, int))
        if args.command == "spectra":
            if not args.alpha > 0:
                raise ConfigError("alpha must be positive")
            betas = _parse_list(args.betas, float)
            if not betas or any(b <= 0 for b in betas):
                raise ConfigError("betas must be a nonempty list of positive values")
            out = resolve_output_dir(str(Path(args.out).parent)) / Path(args.out).name
            out.parent.mkdir(parents=True, exist_ok=True)
            write_spectra_csv(out, args.alpha, betas, default_xi_samples(args.xi_points))
            return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
