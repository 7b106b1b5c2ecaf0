"""Batch command-line front end.

Subcommands: statics, simulate, sweep, analyze.  Every command writes its
outputs plus a manifest.json sufficient to re-run it.  Exit codes: 2 config
parse failure, 3 model-domain error, 4 non-finite state mid-run, 5 too few
converged rows for analysis.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import analyze_dataset, importance_to_csv, shap_to_csv
from .config import (
    SCENARIOS,
    apply_scenario,
    config_to_dict,
    load_config,
)
from .dynamics import parse_shock_spec, simulate, trajectory_to_csv
from .errors import ConfigError, ModelDomainError, NonFiniteStateError
from .production import statics_sweep, statics_to_csv
from .sweep import (
    convergence_filter,
    default_ranges,
    read_dataset,
    run_sweep,
    sample_params,
    write_dataset,
)

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NONFINITE = 4
EXIT_INSUFFICIENT = 5


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(outdir: Path, command: str, options: dict, resolved_config,
                    seed=None, inputs=()):
    manifest = {
        "tool": "taskgrowth",
        "version": __version__,
        "command": command,
        "options": options,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "inputs": {str(p): _sha256(p) for p in inputs},
        "resolved_config": resolved_config,
    }
    with open(outdir / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_statics(args) -> int:
    cfg = load_config(args.config)
    out = _outdir(args)
    rows = statics_sweep(
        cfg.endow, cfg.sigma, cfg.profiles, M=cfg.M0, knowledge=cfg.knowledge0,
        beta=cfg.growth.beta, fr=cfg.friction, grid_size=args.grid,
    )
    (out / "statics.csv").write_text(statics_to_csv(rows, cfg.endow))
    if args.plots:
        from .plots import plot_statics

        plot_statics(rows, cfg.endow, out / "statics.svg")
    _write_manifest(out, "statics", {"grid": args.grid}, config_to_dict(cfg),
                    inputs=[args.config])
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.scenario:
        cfg = apply_scenario(cfg, args.scenario)
    shocks = []
    for spec in args.shock or []:
        shocks.extend(parse_shock_spec(spec))
    out = _outdir(args)
    traj = simulate(cfg, shocks=shocks)
    traj.converged = convergence_filter(traj)
    (out / "trajectory.csv").write_text(trajectory_to_csv(traj))
    if args.plots:
        from .plots import plot_trajectory

        plot_trajectory(traj, out / "trajectory.svg")
    _write_manifest(
        out, "simulate",
        {"scenario": args.scenario, "shock": args.shock or [],
         "converged": traj.converged, "stagnated": traj.stagnated},
        config_to_dict(cfg), inputs=[args.config],
    )
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    samples = sample_params(default_ranges(), args.n, args.seed, method=args.method)
    ds = run_sweep(samples, cfg, seed=args.seed)
    out = _outdir(args)
    write_dataset(ds, out / "dataset.csv")
    n_conv = len(ds.converged_subset())
    _write_manifest(
        out, "sweep",
        {"n": args.n, "method": args.method, "converged_rows": n_conv,
         "reasons": {r.sample_id: r.reason for r in ds.rows if r.reason}},
        config_to_dict(cfg), seed=args.seed, inputs=[args.config],
    )
    print(f"sweep: {len(ds)} runs, {n_conv} converged", file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    ds = read_dataset(args.dataset)
    out = _outdir(args)
    result = analyze_dataset(
        ds, args.target, seed=args.seed, shap_mode=args.shap_mode,
        shap_instances=args.shap_instances,
    )
    (out / "importance.csv").write_text(importance_to_csv(result.importance_report))
    (out / "shap.csv").write_text(shap_to_csv(result.shap_records))
    with open(out / "metrics.json", "w") as f:
        json.dump(result.metrics, f, indent=2, sort_keys=True)
    if args.plots:
        from .plots import plot_importance, plot_shap

        plot_importance(result.importance_report, out / "importance.svg")
        plot_shap(result.shap_records, out / "shap.svg")
    _write_manifest(
        out, "analyze",
        {"target": args.target, "shap_mode": args.shap_mode,
         "shap_instances": args.shap_instances},
        None, seed=args.seed, inputs=[args.dataset],
    )
    print(
        "analyze: validation R^2 = %.4f (mse %.3g)"
        % (result.metrics["validation_r2"], result.metrics["validation_mse"]),
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="taskgrowth", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("statics", help="key variables over a z* grid")
    sp.add_argument("config")
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--out", required=True)
    sp.add_argument("--plots", action="store_true")
    sp.set_defaults(fn=cmd_statics)

    sp = sub.add_parser("simulate", help="forward simulation of one configuration")
    sp.add_argument("config")
    sp.add_argument("--scenario", choices=SCENARIOS, default=None)
    sp.add_argument("--shock", action="append",
                    help="name[,name...]:*MULT@[t0,t1), repeatable")
    sp.add_argument("--out", required=True)
    sp.add_argument("--plots", action="store_true")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("sweep", help="batched parameter-space exploration")
    sp.add_argument("config")
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("uniform", "lhs"), default="uniform")
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("analyze", help="surrogate fit and attributions")
    sp.add_argument("dataset")
    sp.add_argument("--target", choices=("w", "s_L"), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--shap-mode", choices=("exact", "sampled"), default="sampled")
    sp.add_argument("--shap-instances", type=int, default=16)
    sp.add_argument("--out", required=True)
    sp.add_argument("--plots", action="store_true")
    sp.set_defaults(fn=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        msg = str(e)
        if msg.startswith("insufficient data"):
            print(f"error: {msg}", file=sys.stderr)
            return EXIT_INSUFFICIENT
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteStateError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONFINITE
    except ModelDomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
