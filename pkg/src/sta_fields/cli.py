"""Command-line entry point: ``sta-fields {verify,wave,simulate,spin}``.

Exit status: 0 success, 1 failed check, 2 configuration error, 3 numeric
abort (CFL violation, superluminal probe, non-finite state).  Delimited
output uses 17 significant digits so every float round-trips exactly.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, parallel
from .acoustic import ac_energy_momentum, ac_fields_3d, ac_residual, ac_spin_cycle_avg, ac_spin_scalar_theory
from .config import ConfigError, ScenarioConfig, load_config
from .em import em_energy_momentum, em_fields_3d, em_spin_density, em_spin_density_electric, envelope_from_samples, maxwell_residual
from .simulator import NumericAbort, ProbeState, SimState, check_cfl, run, write_snapshot
from .verify import SUITES, report, run_suite

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_AUDIT_COLUMNS = ("time", "step", "field_energy", "probe_energy", "work", "total", "boundary_flux", "drift", "probe_drift")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return "%.17g" % float(x)


def _write_table(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _out_dir(args, cfg: ScenarioConfig | None) -> Path:
    if args.out:
        out = Path(args.out)
    elif cfg is not None:
        out = Path(cfg.output["directory"])
    else:
        out = Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# Monochromatic envelopes of the configured waves
# ---------------------------------------------------------------------------


def _common_omega(cfg: ScenarioConfig) -> float | None:
    omegas = {float(w["omega"]) for w in cfg.waves}
    if not omegas:
        return None
    if len(omegas) > 1:
        return math.nan
    return omegas.pop()


def _envelopes(cfg: ScenarioConfig, field, space: np.ndarray, omega: float, t0: float):
    """Complex envelopes of the two 3-vector fields at ``space`` points."""
    n = int(cfg.output["spin_samples"])
    medium = cfg.build_medium()
    c = medium.c
    first, second = [], []
    for m in range(n):
        t = t0 + 2.0 * math.pi * m / (n * omega)
        pts = np.concatenate([np.full(space.shape[:-1] + (1,), c * t), space], axis=-1)
        vals = field.evaluate(pts)
        if cfg.theory == "em":
            E, H, _, _ = em_fields_3d(vals, medium)
            first.append(E)
            second.append(H)
        else:
            _, v, _, w = ac_fields_3d(vals, medium)
            first.append(v)
            second.append(w)
    # phases are measured from t0, so rotate back to absolute time
    rot = np.exp(-1j * omega * t0)
    return envelope_from_samples(first) * rot, envelope_from_samples(second) * rot


def _spin_pair(cfg: ScenarioConfig, space: np.ndarray, t0: float):
    """``(traditional, corrected)`` cycle-averaged spin densities at ``space``."""
    zeros = np.zeros(space.shape)
    omega = _common_omega(cfg)
    if omega is None:
        return zeros, zeros
    if math.isnan(omega):
        raise ConfigError("$.waves: spin densities need all waves at one frequency")
    medium = cfg.build_medium()
    a_bar, b_bar = _envelopes(cfg, cfg.wave_field(), space, omega, t0)
    if cfg.theory == "em":
        return em_spin_density_electric(a_bar, omega, medium), em_spin_density(a_bar, b_bar, omega, medium)
    return ac_spin_scalar_theory(np.real(a_bar)), ac_spin_cycle_avg(a_bar, omega, medium.rho)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = run_suite(args.suite, fault=args.inject_fault, fault_seed=args.fault_seed)
    rep = report(results, args.suite)
    text = json.dumps(rep, indent=2, sort_keys=True)
    print(text)
    if args.out:
        _write_json(_out_dir(args, None) / f"verify_{args.suite}.json", rep)
    return EXIT_OK if rep["passed"] else EXIT_CHECK


def _wave_columns(cfg: ScenarioConfig) -> list[tuple[str, list[str]]]:
    vec = lambda name: [f"{name}_x", f"{name}_y", f"{name}_z"]  # noqa: E731
    layout = {
        "E": vec("E"),
        "H": vec("H"),
        "W_e": ["W_e"],
        "W_m": ["W_m"],
        "P": ["P"],
        "v": vec("v"),
        "P_w": ["P_w"],
        "w": vec("w"),
        "energy": ["energy"],
        "momentum": vec("p"),
        "spin": vec("S"),
        "residual": ["residual"],
    }
    return [(group, layout[group]) for group in cfg.output["columns"]]


def cmd_wave(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(args, cfg)
    grid = cfg.build_grid()
    medium = cfg.build_medium()
    t0 = float(cfg.lattice["time"])
    pts = grid.points(medium.c * t0).reshape(-1, 4)
    field = cfg.wave_field()
    vals = field.evaluate(pts)
    data: dict[str, np.ndarray] = {}
    if cfg.theory == "em":
        E, H, W_e, W_m = em_fields_3d(vals, medium)
        energy, momentum = em_energy_momentum(vals, medium)
        residual = maxwell_residual(field, None, medium).evaluate(pts)
        data.update(E=E, H=H, W_e=W_e, W_m=W_m)
    else:
        P, v, P_w, w = ac_fields_3d(vals, medium)
        energy, momentum = ac_energy_momentum(vals, medium)
        residual = ac_residual(field, None).evaluate(pts)
        data.update(P=P, v=v, P_w=P_w, w=w)
    data["energy"] = energy
    data["momentum"] = momentum
    data["residual"] = np.max(np.abs(residual), axis=-1) if residual.size else np.zeros(len(pts))
    if "spin" in cfg.output["columns"]:
        data["spin"] = _spin_pair(cfg, pts[:, 1:], t0)[1]
    groups = _wave_columns(cfg)
    header = ["x", "y", "z"] + [name for _, names in groups for name in names]
    blocks = [pts[:, 1:]] + [np.asarray(data[g], float).reshape(len(pts), -1) for g, _ in groups]
    table = np.concatenate(blocks, axis=1)
    _write_table(out / "wave.csv", header, table)
    summary = {
        "theory": cfg.theory,
        "time": t0,
        "points": len(pts),
        "waves": len(cfg.waves),
        "max_residual": float(np.max(data["residual"])) if len(pts) else 0.0,
        "config": cfg.to_dict(),
    }
    _write_json(out / "wave.json", summary)
    print(f"wave: {len(pts)} points -> {out / 'wave.csv'} (max residual {summary['max_residual']:.3e})")
    return EXIT_OK


def _periodic_check(cfg: ScenarioConfig) -> None:
    lengths = cfg.build_grid().lengths
    for i, wave in enumerate(cfg.build_waves()):
        if getattr(wave, "branch", "scalar-only") == "full-spinor":
            raise ConfigError(f"$.waves[{i}].branch: full-spinor waves grow linearly in space and cannot be simulated on a periodic lattice")
        cycles = -np.asarray(wave.kcov[1:]) * lengths / (2.0 * math.pi)
        if np.max(np.abs(cycles - np.round(cycles))) > 1e-9:
            raise ConfigError(f"$.waves[{i}]: wave vector does not fit the periodic lattice (cycles per side {cycles.tolist()})")


def build_state(cfg: ScenarioConfig) -> SimState:
    """Initial :class:`SimState` for a scenario (CFL checked first)."""
    medium = cfg.build_medium()
    grid = cfg.build_grid()
    dt = cfg.time_step()
    check_cfl(dt, grid, medium.c)
    _periodic_check(cfg)
    lat = cfg.lattice
    t0 = float(lat["time"])
    if lat["scheme"] == "wave":
        state = SimState.from_potential(cfg.theory, medium, grid, dt, cfg.wave_potential(), t0, lat["lattice_dispersion"])
    else:
        state = SimState.from_field(cfg.theory, medium, grid, dt, cfg.wave_field(), t0)
    noise = cfg.noise_field(grid, state.state_grades)
    if noise is not None:
        state.prev = state.prev + noise
        state.curr = state.curr + noise
    state.sources = cfg.build_sources()
    for probe in cfg.build_probes():
        state.add_probe(probe)
    return state


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(args, cfg)
    state = build_state(cfg)
    steps = int(cfg.lattice["steps"])
    cadence = int(cfg.output["cadence"]) or steps
    snap_dir = out / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    which = cfg.output["snapshots"]
    if state.scheme == "dirac":
        which = [w for w in which if w == "field"]
    written: list[str] = []

    def on_snapshot(snap) -> None:
        for kind in which:
            path = snap_dir / f"step{snap.step:06d}_{kind}.csv"
            write_snapshot(path, snap, state.grid, state.dt, state.c, kind, {"theory": cfg.theory, "scheme": state.scheme})
            written.append(path.name)

    reports = run(state, steps, audit_every=cadence, snapshot_every=cadence, on_snapshot=on_snapshot)
    _write_table(out / "audit.csv", _AUDIT_COLUMNS, [[getattr(r, k) for k in _AUDIT_COLUMNS] for r in reports])
    for i, probe in enumerate(state.probes):
        _write_table(out / f"probe_{i}.csv", ProbeState.HISTORY_COLUMNS, probe.history)
    summary = {
        "theory": cfg.theory,
        "scheme": state.scheme,
        "steps": steps,
        "dt": state.dt,
        "final_time": state.t,
        "max_drift": max(r.drift for r in reports),
        "max_probe_drift": max(r.probe_drift for r in reports),
        "snapshots": written,
        "config": cfg.to_dict(),
    }
    _write_json(out / "summary.json", summary)
    print(f"simulate: {steps} steps, max energy drift {summary['max_drift']:.3e}, output in {out}")
    return EXIT_OK


def cmd_spin(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(args, cfg)
    grid = cfg.build_grid()
    t0 = float(cfg.lattice["time"])
    space = grid.points(0.0).reshape(-1, 4)[:, 1:]
    trad, corr = _spin_pair(cfg, space, t0)
    labels = ("electric_biased", "dual_symmetric") if cfg.theory == "em" else ("scalar_theory", "displacement")
    header = ["x", "y", "z"] + [f"{labels[0]}_{a}" for a in "xyz"] + [f"{labels[1]}_{a}" for a in "xyz"]
    _write_table(out / "spin.csv", header, np.concatenate([space, trad, corr], axis=1))
    summary = {
        "theory": cfg.theory,
        "traditional": labels[0],
        "corrected": labels[1],
        "max_traditional": float(np.max(np.abs(trad))) if trad.size else 0.0,
        "max_corrected": float(np.max(np.abs(corr))) if corr.size else 0.0,
        "max_difference": float(np.max(np.abs(corr - trad))) if corr.size else 0.0,
        "config": cfg.to_dict(),
    }
    _write_json(out / "spin.json", summary)
    print(
        f"spin: {labels[0]} max {summary['max_traditional']:.3e}, {labels[1]} max {summary['max_corrected']:.3e} -> {out / 'spin.csv'}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sta-fields", description="Spacetime-algebra electromagnetism and acoustics")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="output directory (default: the config's output.directory)")
    common.add_argument("--threads", type=int, metavar="N", help="worker threads (default: $STA_FIELDS_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run invariant suites and print a JSON report")
    v.add_argument("--suite", default="all", choices=[*SUITES, "all"])
    v.add_argument("--inject-fault", metavar="CHECK", default=None, help=argparse.SUPPRESS)
    v.add_argument("--fault-seed", type=int, default=0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    for name, fn, text in (
        ("wave", cmd_wave, "evaluate the configured analytic waves on the lattice"),
        ("simulate", cmd_simulate, "evolve the configured scenario in time"),
        ("spin", cmd_spin, "compare traditional and corrected spin densities"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--config", required=True, metavar="PATH", help="scenario JSON file")
        p.set_defaults(func=fn)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.threads is not None:
            parallel.set_threads(args.threads)
        else:
            parallel.get_threads()  # surfaces a malformed environment value early
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericAbort as exc:
        print(f"numeric abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # bad arguments that survive the schema (e.g. --threads 0, unknown fault target)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        parallel.set_threads(None)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
