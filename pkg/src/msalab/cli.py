"""Command-line experiment runner.

Every subcommand writes a run directory containing a manifest, a schema for
the tabular outputs, and CSV/JSON results.  Reruns with the same config and
seed produce identical data files; rows are ordered by seed.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from .analysis import decay_fits
from .calibration import get_calibration, run_calibration, save_calibration
from .config import (
    ConfigError,
    ExperimentConfig,
    RunManifest,
    config_hash,
    load_config,
)
from .geometry import (
    MPBox,
    classify_interaction,
    cover_contains,
    is_separable_pair,
    is_separable_pair_oracle,
    non_separable_cover,
)
from .hamiltonian import (
    BoxInstance,
    assemble,
    eigensolve,
)
from .msa import estimate_property, induction_report
from .randomfield import AlloySpec, InteractionSpec
from .spectral import classify_box, green_block


def _alloy(config: ExperimentConfig) -> AlloySpec:
    return AlloySpec(g=config.model.g, distribution=config.model.distribution, R=config.model.R)


def _interaction(config: ExperimentConfig) -> InteractionSpec | None:
    if config.model.n < 2 or config.model.u0 == 0:
        return None
    return InteractionSpec(u0=config.model.u0, r0=config.model.r0)


def _write_csv(path: Path, fieldnames: list[str], rows: list[dict]):
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _write_schema(run_dir: Path, tables: dict):
    (run_dir / "schema.json").write_text(json.dumps(tables, sort_keys=True, indent=1))


def _finish(run_dir: Path, config: ExperimentConfig, calibration, outputs) -> Path:
    manifest = RunManifest.create(config, calibration, outputs)
    manifest.write(run_dir)
    return run_dir


_ROW_FIELDS = [
    "seed", "config_hash", "property", "n", "k", "L", "trials", "events",
    "frequency", "ci_low", "ci_high", "bound", "passed", "grid_size",
]


def _report_rows(rows, chash: str) -> list[dict]:
    out = []
    for r in rows:
        out.append(
            {
                "seed": r.seed_start,
                "config_hash": chash,
                "property": r.property,
                "n": r.n,
                "k": r.k,
                "L": r.L,
                "trials": r.trials,
                "events": r.events,
                "frequency": repr(r.frequency),
                "ci_low": repr(r.ci_low),
                "ci_high": repr(r.ci_high),
                "bound": repr(r.bound),
                "passed": int(r.passed),
                "grid_size": r.grid_size,
            }
        )
    return out


def cmd_classify(config: ExperimentConfig, run_dir: Path, calibration) -> int:
    m = config.model
    box = MPBox((0,) * (m.n * m.d), config.scales.L0, m.n, m.d)
    inst = BoxInstance.create(box, _alloy(config), _interaction(config), config.seed)
    E = config.msa.E0 + config.msa.eta / 2
    cls = classify_box(inst, E, config.msa.m, m.N, config.msa.policy())
    payload = dataclasses.asdict(cls)
    payload["cnr_family"] = [[list(c), r] for c, r in cls.cnr_family]
    payload["interaction_class"] = dataclasses.asdict(
        classify_interaction(box, m.r0, m.N)
    )
    payload["seed"] = config.seed
    payload["config_hash"] = config_hash(config)
    (run_dir / "classification.json").write_text(
        json.dumps(payload, sort_keys=True, indent=1)
    )
    _write_schema(run_dir, {"classification.json": "single-box classification dump"})
    _finish(run_dir, config, calibration, ["classification.json", "schema.json"])
    return 0


def _property_command(prop_list, config: ExperimentConfig, run_dir: Path, calibration, name: str) -> int:
    m = config.model
    chash = config_hash(config)
    rows = []
    for k, L in enumerate(config.schedule_scales()):
        for prop in prop_list:
            rows.append(
                estimate_property(
                    prop,
                    alloy=_alloy(config),
                    interaction=_interaction(config),
                    n=m.n,
                    d=m.d,
                    N=m.N,
                    L=L,
                    params=config.msa.params(),
                    trials=config.trials,
                    seed_start=config.seed,
                    k=k,
                    policy=config.msa.policy(),
                )
            )
    _write_csv(run_dir / f"{name}.csv", _ROW_FIELDS, _report_rows(rows, chash))
    _write_schema(
        run_dir,
        {f"{name}.csv": {"columns": _ROW_FIELDS, "order": "by (k, property), seeds ascending"}},
    )
    _finish(run_dir, config, calibration, [f"{name}.csv", "schema.json"])
    return 0


def cmd_wegner(config, run_dir, calibration) -> int:
    return _property_command(["W1", "W2"], config, run_dir, calibration, "wegner")


def cmd_ds(config, run_dir, calibration) -> int:
    return _property_command(["DS"], config, run_dir, calibration, "ds")


def cmd_msa(config: ExperimentConfig, run_dir: Path, calibration) -> int:
    m = config.model
    chash = config_hash(config)
    report = induction_report(
        config.schedule(),
        range(1, m.N + 1),
        d=m.d,
        N=m.N,
        alloy=_alloy(config),
        interaction=_interaction(config),
        params=config.msa.params(),
        trials=config.trials,
        seed_start=config.seed,
        k_max=config.scales.k_max,
        properties=("DS",),
        policy=config.msa.policy(),
    )
    _write_csv(run_dir / "msa.csv", _ROW_FIELDS, _report_rows(report.rows, chash))
    _write_schema(
        run_dir, {"msa.csv": {"columns": _ROW_FIELDS, "order": "by (k, n), seeds ascending"}}
    )
    _finish(run_dir, config, calibration, ["msa.csv", "schema.json"])
    return 0


def cmd_decay(config: ExperimentConfig, run_dir: Path, calibration) -> int:
    m = config.model
    chash = config_hash(config)
    fields = ["seed", "config_hash", "index", "energy", "mass", "prefactor", "r2", "n_radii"]
    rows = []
    for seed in range(config.seed, config.seed + config.trials):
        box = MPBox((0,) * (m.n * m.d), config.scales.L0, m.n, m.d)
        inst = BoxInstance.create(box, _alloy(config), _interaction(config), seed)
        for j, fit in enumerate(decay_fits(inst.spectral(), config.n_eigenfunctions)):
            rows.append(
                {
                    "seed": seed,
                    "config_hash": chash,
                    "index": j,
                    "energy": repr(fit.energy),
                    "mass": repr(fit.mass),
                    "prefactor": repr(fit.prefactor),
                    "r2": repr(fit.r2),
                    "n_radii": fit.n_radii,
                }
            )
    _write_csv(run_dir / "decay.csv", fields, rows)
    _write_schema(
        run_dir, {"decay.csv": {"columns": fields, "order": "seeds ascending, then index"}}
    )
    _finish(run_dir, config, calibration, ["decay.csv", "schema.json"])
    return 0


def cmd_oracle(config: ExperimentConfig, run_dir: Path, calibration) -> int:
    """Brute-force cross-checks of the structured fast paths."""
    rng = np.random.default_rng(config.seed)
    results = {}

    # separability: structured vs exhaustive-J
    agree = total = 0
    for _ in range(200):
        n = int(rng.integers(2, 4))
        d = int(rng.integers(1, 3))
        L = int(rng.integers(2, 6))
        a = MPBox(tuple(int(c) for c in rng.integers(-40, 40, n * d)), L, n, d)
        b = MPBox(tuple(int(c) for c in rng.integers(-40, 40, n * d)), L, n, d)
        total += 1
        if is_separable_pair(a, b, 1, n).separable == is_separable_pair_oracle(a, b, 1, n).separable:
            agree += 1
    results["separability_agreement"] = {"total": total, "agree": agree}

    # cover soundness: distant center outside the cover is separable
    violations = 0
    for _ in range(200):
        n, d, L, R = 2, 1, int(rng.integers(2, 5)), 1
        x = tuple(int(c) for c in rng.integers(-20, 20, n * d))
        cover = non_separable_cover(x, L, R, n, d)
        y = tuple(int(c) for c in rng.integers(-200, 200, n * d))
        box_x, box_y = MPBox(x, L, n, d), MPBox(y, L, n, d)
        from .geometry import box_distance

        if cover_contains(cover, y) or box_distance(box_x, box_y) <= 2 * n * (L + R):
            continue
        if not is_separable_pair(box_x, box_y, R, n).separable:
            violations += 1
    results["cover_soundness_violations"] = violations

    # green blocks: eigendecomposition vs direct linear solve
    max_rel = 0.0
    for seed in range(10):
        inst = BoxInstance.create(MPBox((0,), 8, 1, 1), AlloySpec(g=2.0), None, seed)
        sd = inst.spectral()
        # moderate gap: far below the spectrum the tail entries drop beneath
        # the absolute accuracy of either route
        E = float(sd.eigenvalues[0]) - 0.4
        ham = sd.ham
        for _ in range(5):
            v = tuple(int(c) for c in rng.integers(-7, 8, 1))
            w = tuple(int(c) for c in rng.integers(-7, 8, 1))
            rhs = np.zeros(ham.dim)
            rhs[ham.cell_indices(w)] = 1.0
            direct = np.linalg.solve(ham.matrix - E * np.eye(ham.dim), rhs)
            val = abs(float(direct[ham.cell_indices(v)[0]]))
            fast = green_block(sd, E, v, w)
            max_rel = max(max_rel, abs(fast - val) / max(val, 1e-300))
    results["green_block_max_rel_diff"] = max_rel

    # closed-form 1D spectrum
    box = MPBox((0,), 8, 1, 1)
    sd = eigensolve(assemble(box))
    M = sd.ham.dim
    exact = np.array([1 - np.cos(k * np.pi / (M + 1)) for k in range(1, M + 1)])
    results["spectrum_max_abs_diff"] = float(np.abs(sd.eigenvalues - exact).max())

    ok = (
        results["separability_agreement"]["agree"] == total
        and violations == 0
        and max_rel <= 1e-8
        and results["spectrum_max_abs_diff"] <= 1e-10
    )
    results["ok"] = ok
    (run_dir / "oracle.json").write_text(json.dumps(results, sort_keys=True, indent=1))
    _write_schema(run_dir, {"oracle.json": "brute-force cross-check summary"})
    _finish(run_dir, config, calibration, ["oracle.json", "schema.json"])
    return 0 if ok else 1


def cmd_calibrate(config: ExperimentConfig, run_dir: Path, calibration) -> int:
    data = run_calibration(config.seed)
    path = save_calibration(data)
    (run_dir / "calibration.json").write_text(path.read_text())
    _write_schema(run_dir, {"calibration.json": "measured geometric constants"})
    _finish(run_dir, config, None, ["calibration.json", "schema.json"])
    print(path)
    return 0


_COMMANDS = {
    "classify": cmd_classify,
    "wegner": cmd_wegner,
    "ds": cmd_ds,
    "msa": cmd_msa,
    "decay": cmd_decay,
    "oracle": cmd_oracle,
    "calibrate": cmd_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msalab", description="finite-volume multi-scale localization experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="YAML config file")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--trials", type=int, default=None, help="override config trials")
        p.add_argument("--out-dir", type=Path, default=None, help="run directory")
        p.add_argument(
            "--threads", type=int, default=0,
            help="worker threads (0 = auto); results are seed-ordered either way",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else ExperimentConfig()
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.trials is not None:
            overrides["trials"] = args.trials
        if overrides:
            config = dataclasses.replace(config, **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    run_dir = args.out_dir or Path("runs") / f"{args.command}-{int(time.time())}"
    run_dir.mkdir(parents=True, exist_ok=True)
    calibration = None
    if args.command not in ("oracle", "calibrate"):
        try:
            calibration = get_calibration()
        except Exception as exc:  # calibration is advisory for most commands
            print(f"warning: calibration unavailable ({exc})", file=sys.stderr)
    return _COMMANDS[args.command](config, run_dir, calibration)


if __name__ == "__main__":
    sys.exit(main())
