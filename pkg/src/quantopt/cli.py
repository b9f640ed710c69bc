"""Batch front-end: run ecdf/optimize/bootstrap/evidence/bench workflows.

    quantopt <command> --config FILE [--seed N] [--out DIR] [--threads K]

Every command is a pure function of (config, seed): artifacts are CSV files
with a timestamp-free provenance comment, an optional PNG figure next to
each CSV, and a run-manifest JSON. On failure all partially written outputs
are removed and the exit code is non-zero. --threads trades wall time only;
it never changes any output byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import plots
from .bench import (
    BumpParams,
    bump_boxes,
    bump_response,
    bump_values,
    compose_front_from_1d,
    mv1_boxes,
    mv1_response,
    mv4_boxes,
    mv4_reference_solutions,
    mv4_response,
)
from .bootstrap import bootstrap_quantile, error_vs_samples, replicate_ecdf_envelope
from .config import ConfigError, apply_seed_override, config_hash, validate_config
from .ecdf import build_ecdf
from .evidence import (
    estimate_belief_plausibility,
    exact_belief_plausibility,
    focal_elements,
    focal_extrema,
    grid_extrema,
    sample_tagged,
    validate_bpa,
    weighted_square_extrema,
)
from .moga import GaConfig, run_moga
from .robust import RobustProblem, default_epsilon, many_objective_levels, standard_levels
from .sampling import Box, uniform_mc


class RunWriter:
    """Tracks artifacts of one run; writes CSVs with a provenance line."""

    def __init__(self, out_dir: Path, command: str, cfg_hash: str, seed_label: str,
                 formats):
        self.out_dir = out_dir
        self.command = command
        self.cfg_hash = cfg_hash
        self.seed_label = seed_label
        self.formats = list(formats)
        self.created: list[Path] = []

    @property
    def provenance(self) -> str:
        return (f"# quantopt={__version__} command={self.command} "
                f"seed={self.seed_label} config_sha256={self.cfg_hash}")

    def csv(self, name: str, header, rows) -> Path:
        path = self.out_dir / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.provenance + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format_cell(cell) for cell in row])
        self.created.append(path)
        return path

    def figure(self, name: str, render, *args, **kwargs) -> None:
        if "png" not in self.formats:
            return
        path = self.out_dir / name
        render(path, *args, **kwargs)
        self.created.append(path)

    def manifest(self, config_path: str, threads: int) -> Path:
        import matplotlib
        import scipy

        path = self.out_dir / "run_manifest.json"
        payload = {
            "tool": "quantopt",
            "version": __version__,
            "command": self.command,
            "config": str(config_path),
            "config_sha256": self.cfg_hash,
            "seed": self.seed_label,
            "threads": threads,
            "outputs": sorted(p.name for p in self.created),
            "versions": {
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "matplotlib": matplotlib.__version__,
            },
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.created.append(path)
        return path

    def cleanup(self) -> None:
        for path in self.created:
            path.unlink(missing_ok=True)


def _format_cell(cell):
    if isinstance(cell, str):
        return cell
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    return repr(float(cell))


def build_problem_parts(problem_cfg: dict):
    """(design_box, uncertainty_box, batched response) for a benchmark id."""
    benchmark = problem_cfg["benchmark"]
    n = problem_cfg.get("n", 1)
    if benchmark == "mv4":
        dbox, ubox = mv4_boxes(n)
        return dbox, ubox, mv4_response
    if benchmark == "mv1":
        dbox, ubox = mv1_boxes(n)
        return dbox, ubox, mv1_response
    bump_cfg = problem_cfg.get("bump", {})
    default = BumpParams.default()
    params = BumpParams(
        amplitudes=bump_cfg.get("amplitudes", default.amplitudes),
        widths=bump_cfg.get("widths", default.widths),
        centers=bump_cfg.get("centers", default.centers),
    )
    if params.dim != n:
        raise ConfigError("bump centers dimension does not match problem.n")
    dbox, ubox = bump_boxes(n)
    if "design_box" in bump_cfg:
        dbox = Box(bump_cfg["design_box"]["lower"], bump_cfg["design_box"]["upper"])
    if "uncertainty_box" in bump_cfg:
        ubox = Box(bump_cfg["uncertainty_box"]["lower"],
                   bump_cfg["uncertainty_box"]["upper"])
    return dbox, ubox, bump_response(params)


def resolve_levels(quantiles_cfg: dict, mc_count: int) -> tuple:
    epsilon = quantiles_cfg.get("epsilon", default_epsilon(mc_count))
    if "formulation" in quantiles_cfg:
        return standard_levels(quantiles_cfg["formulation"], epsilon)
    if "levels" in quantiles_cfg:
        return tuple(quantiles_cfg["levels"])
    return many_objective_levels(quantiles_cfg["many"], epsilon)


def _design_vector(problem_cfg: dict, dbox: Box) -> np.ndarray:
    design = np.asarray(problem_cfg["design"], dtype=float)
    if design.size != dbox.dim:
        raise ConfigError(
            f"design has {design.size} entries but the problem has {dbox.dim}"
        )
    if not dbox.contains(design):
        raise ConfigError("design out of bounds")
    return design


def _response_samples(cfg: dict):
    dbox, ubox, response = build_problem_parts(cfg["problem"])
    design = _design_vector(cfg["problem"], dbox)
    mc = cfg["mc"]
    u = uniform_mc(ubox, mc["count"], mc["seed"])
    return design, response(design, u)


def cmd_ecdf(cfg: dict, writer: RunWriter, threads: int) -> None:
    _, values = _response_samples(cfg)
    ecdf = build_ecdf(values)
    writer.csv("ecdf.csv", ["q", "F"], zip(ecdf.sorted_values, ecdf.cumulative))
    writer.figure("ecdf.png", plots.save_ecdf_curves, {"ECDF": ecdf})


def cmd_optimize(cfg: dict, writer: RunWriter, threads: int) -> None:
    dbox, ubox, response = build_problem_parts(cfg["problem"])
    mc = cfg["mc"]
    levels = resolve_levels(cfg["quantiles"], mc["count"])
    problem = RobustProblem(
        design_box=dbox, uncertainty_box=ubox, response=response, levels=levels,
        mc_count=mc["count"], mc_mode=mc["mode"], seed=mc["seed"],
    )
    ga = cfg["ga"]
    ga_config = GaConfig(
        population_size=ga["population_size"], generations=ga["generations"],
        crossover_prob=ga["crossover_prob"], mutation_rate=ga["mutation_rate"],
        strength=ga["strength"], elite_fraction=ga["elite_fraction"],
        bits_per_variable=ga["bits_per_variable"], walk_length=ga["walk_length"],
        seed=ga["seed"],
    )
    result = run_moga(problem, ga_config, threads=threads)

    genomes = result.archive.genomes
    objectives = result.archive.objectives
    order = _row_order(genomes, objectives)
    genomes, objectives = genomes[order], objectives[order]

    d, k = dbox.dim, len(levels)
    header = [f"z_{i+1}" for i in range(d)] + [f"obj_{j+1}" for j in range(k)]
    writer.csv("front.csv", header,
               (list(g) + list(o) for g, o in zip(genomes, objectives)))

    history_rows = []
    for snap in result.history:
        for i in _row_order(snap.genomes, snap.objectives):
            history_rows.append(
                [snap.generation] + list(snap.genomes[i]) + list(snap.objectives[i])
            )
    writer.csv("history.csv", ["generation"] + header, history_rows)

    best = problem.response_ecdf(genomes[int(np.argmin(objectives[:, 0]))])
    robust = problem.response_ecdf(genomes[int(np.argmin(objectives[:, -1]))])
    writer.csv("ecdf_best.csv", ["q", "F"], zip(best.sorted_values, best.cumulative))
    writer.csv("ecdf_most_robust.csv", ["q", "F"],
               zip(robust.sorted_values, robust.cumulative))

    if k == 2:
        references = None
        if cfg["problem"]["benchmark"] == "mv4":
            refs = mv4_reference_solutions(dbox.dim)
            references = {
                "deterministic min": ("v", refs["min"].value),
                "minimax": ("h", refs["minimax"].value),
            }
        writer.figure("front.png", plots.save_front, objectives,
                      labels=[f"quantile s={s:g}" for s in levels],
                      reference_lines=references)
    writer.figure("ecdf_extremes.png", plots.save_ecdf_curves,
                  {"best": best, "most robust": robust})


def _bootstrap_samples(cfg: dict) -> np.ndarray:
    section = cfg["bootstrap"]
    if "samples_file" in section:
        if "problem" in cfg or "mc" in cfg:
            raise ConfigError(
                "bootstrap takes either samples_file or problem+mc, not both"
            )
        return read_samples_csv(section["samples_file"])
    if "problem" not in cfg or "mc" not in cfg:
        raise ConfigError("bootstrap requires samples_file or problem+mc sections")
    return _response_samples(cfg)[1]


def cmd_bootstrap(cfg: dict, writer: RunWriter, threads: int) -> None:
    section = cfg["bootstrap"]
    samples = _bootstrap_samples(cfg)
    level, n_rep, seed = section["level"], section["n_replicates"], section["seed"]

    if "m_grid" in section:
        rows = error_vs_samples(samples, level, section["m_grid"], n_rep, seed)
    else:
        rows = [(samples.size, bootstrap_quantile(samples, level, n_rep, seed))]
    writer.csv("bootstrap.csv", ["m", "se", "me"],
               ((m, r.se_hat, r.me_hat) for m, r in rows))
    if len(rows) > 1:
        writer.figure("error_vs_samples.png", plots.save_error_curves,
                      [m for m, _ in rows], [r.se_hat for _, r in rows],
                      [r.me_hat for _, r in rows])

    if section["dump_coverage"]:
        ecdf = build_ecdf(samples)
        grid = ecdf.sorted_values
        f_low, f_high = replicate_ecdf_envelope(samples, samples.size, n_rep,
                                                seed, grid)
        writer.csv("coverage.csv", ["q", "F_low", "F_high"],
                   zip(grid, f_low, f_high))
        writer.figure("coverage.png", plots.save_coverage_band, ecdf, grid,
                      f_low, f_high)


def cmd_evidence(cfg: dict, writer: RunWriter, threads: int) -> None:
    dbox, _, response = build_problem_parts(cfg["problem"])
    design = _design_vector(cfg["problem"], dbox)
    section = cfg["evidence"]
    bpa = validate_bpa(
        [[(entry["interval"], entry["mass"]) for entry in dim_entries]
         for dim_entries in section["bpa"]]
    )
    if bpa.dim != design.size:
        raise ConfigError(
            f"bpa covers {bpa.dim} dimensions but the design has {design.size}"
        )

    def bound_response(u):
        return response(design, u)

    tagged, _ = sample_tagged(bpa, section["count"], section["seed"], bound_response)
    masses = {fe.indices: fe.mass for fe in focal_elements(bpa)}

    if cfg["problem"]["benchmark"] == "mv1":
        optimizer = weighted_square_extrema(design)
    else:
        optimizer = grid_extrema(bound_response)

    if "thresholds" in section:
        thresholds = np.asarray(section["thresholds"], dtype=float)
    else:
        thresholds = _auto_thresholds(tagged, bpa, optimizer)
    estimated = estimate_belief_plausibility(tagged, masses, thresholds)
    exact = exact_belief_plausibility(bpa, bound_response, thresholds, optimizer)

    writer.csv(
        "evidence.csv",
        ["nu", "belief", "plausibility", "belief_exact", "plausibility_exact",
         "unresolved_mass"],
        ((nu, b, p, be, pe, estimated.unresolved_mass)
         for nu, b, p, be, pe in zip(thresholds, estimated.belief,
                                     estimated.plausibility, exact.belief,
                                     exact.plausibility)),
    )
    writer.figure("belief_plausibility.png", plots.save_belief_plausibility,
                  estimated, exact)


def _row_order(genomes: np.ndarray, objectives: np.ndarray) -> np.ndarray:
    """Deterministic row order: objectives first (column 1 primary), then genome."""
    keys = list(genomes.T[::-1]) + list(objectives.T[::-1])
    return np.lexsort(keys)


def _auto_thresholds(tagged, bpa, optimizer) -> np.ndarray:
    """Union of sampled and exact per-focal-element extrema: every step location."""
    points = []
    for lo, hi in focal_extrema(tagged).values():
        points += [lo, hi]
    for fe in focal_elements(bpa):
        lo, hi = optimizer(fe.lower, fe.upper)
        points += [lo, hi]
    return np.unique(np.asarray(points, dtype=float))


def cmd_bench(cfg: dict, writer: RunWriter, threads: int) -> None:
    benchmark = cfg["problem"]["benchmark"]
    n = cfg["problem"].get("n", 1)
    if benchmark == "mv4":
        refs = mv4_reference_solutions(n)
        header = (["solution", "f"] + [f"d_{i+1}" for i in range(n)]
                  + [f"u_{i+1}" for i in range(n)])
        writer.csv("reference_solutions.csv", header,
                   ([name, ref.value] + list(ref.design) + list(ref.uncertainty)
                    for name, ref in refs.items()))
        if "compose" in cfg:
            _bench_compose(cfg, writer, threads)
    elif benchmark == "bump":
        if n != 1:
            raise ConfigError("bump profile output requires n=1")
        params_cfg = cfg["problem"].get("bump", {})
        default = BumpParams.default()
        params = BumpParams(
            amplitudes=params_cfg.get("amplitudes", default.amplitudes),
            widths=params_cfg.get("widths", default.widths),
            centers=params_cfg.get("centers", default.centers),
        )
        dbox, _ = build_problem_parts(cfg["problem"])[:2]
        xs = np.linspace(dbox.lower[0], dbox.upper[0], 1001)
        values = bump_values(params, xs)
        writer.csv("bump_curve.csv", ["x", "value"], zip(xs, values))
        writer.figure("bump_curve.png", plots.save_curve, xs, values,
                      "x", "response")
    else:
        raise ConfigError("bench supports the 'mv4' and 'bump' benchmarks")


def _bench_compose(cfg: dict, writer: RunWriter, threads: int) -> None:
    if "quantiles" not in cfg or "mc" not in cfg:
        raise ConfigError("compose requires quantiles and mc sections")
    compose = cfg["compose"]
    n = compose["n"]
    front_1d = read_front_csv(compose["front_csv"])

    dbox, ubox = mv4_boxes(n)
    mc = cfg["mc"]
    levels = resolve_levels(cfg["quantiles"], mc["count"])
    problem = RobustProblem(
        design_box=dbox, uncertainty_box=ubox, response=mv4_response, levels=levels,
        mc_count=mc["count"], mc_mode=mc["mode"], seed=mc["seed"],
    )
    composed = compose_front_from_1d(front_1d, n, problem.evaluate_design)
    header = ([f"z_{i+1}" for i in range(n)]
              + [f"obj_{j+1}" for j in range(len(levels))])
    rows = sorted(
        (list(design) + list(obj) for design, obj in composed),
        key=lambda row: row,
    )
    writer.csv("composed_front.csv", header, rows)
    if len(levels) == 2:
        writer.figure("composed_front.png", plots.save_front,
                      np.array([obj for _, obj in composed]),
                      labels=[f"quantile s={s:g}" for s in levels])


def read_samples_csv(path) -> np.ndarray:
    """Single-column CSV of samples; comment lines and a header row allowed."""
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                continue  # header row
    if not values:
        raise ConfigError(f"no sample values found in {path}")
    return np.asarray(values)


def read_front_csv(path) -> list[tuple[float, np.ndarray]]:
    """Front rows written by `optimize`: design columns z_*, objectives obj_*."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)
                if row and not row[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise ConfigError(f"no front rows found in {path}")
    header = rows[0]
    z_cols = [i for i, name in enumerate(header) if name.startswith("z_")]
    obj_cols = [i for i, name in enumerate(header) if name.startswith("obj_")]
    if len(z_cols) != 1 or not obj_cols:
        raise ConfigError("front CSV must have a single z_1 column and obj_* columns")
    return [
        (float(row[z_cols[0]]), np.array([float(row[i]) for i in obj_cols]))
        for row in rows[1:]
    ]


COMMANDS = {
    "ecdf": cmd_ecdf,
    "optimize": cmd_optimize,
    "bootstrap": cmd_bootstrap,
    "evidence": cmd_evidence,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="quantopt",
        description="Quantile-objective robust optimization toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON run configuration")
        cmd.add_argument("--seed", type=int, default=None,
                         help="override every per-section seed")
        cmd.add_argument("--out", default=None, help="output directory")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads (never changes results)")
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2

    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    writer = None
    try:
        cfg = validate_config(args.command, raw)
        cfg = apply_seed_override(cfg, args.seed)
        out_dir = args.out or cfg["output"].get("directory")
        if not out_dir:
            raise ConfigError("no output directory (use --out or output.directory)")
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        seed_label = "config" if args.seed is None else str(args.seed)
        writer = RunWriter(out_dir, args.command, config_hash(cfg), seed_label,
                           cfg["output"]["formats"])
        COMMANDS[args.command](cfg, writer, args.threads)
        writer.manifest(args.config, args.threads)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        if writer is not None:
            writer.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
