"""Command-line entry point (``edc-eval``).

Exit status: 0 on success, 1 for invalid input or configuration, 2 for I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .alt_metrics import (
    SingularStepError,
    SkippedThresholdWarning,
    cs_dc,
    det_vs_discard,
    dprime_dc,
    error_proxy_correlation,
    fc_edc,
    qs_cs_correlation,
    sample_utility_scores,
)
from .edc import (
    EdcCurve,
    EdcError,
    ErrorMode,
    compute_edc,
    random_baseline,
    threshold_for_fmr,
    threshold_for_starting_error,
)
from .normalisation import (
    BIN_CONVENTION,
    CalibrationError,
    DivergenceError,
    area_between,
    calibrate,
    curve_divergence,
    normalise_table,
)
from .pauc import Adjustment, Interpolation, PaucConfig, PaucConfigError, pauc, rank
from .records import RunManifest, dumps, read_record, write_record
from .score_data import (
    ComparisonSet,
    Kind,
    QualityScoreTable,
    ScoreDataError,
    dump_comparisons,
    dump_quality_scores,
    pairwise_min_qs,
    read_comparisons,
    read_quality_scores,
)
from .stability import (
    DIVERGENCE_SCALE,
    PLACEMENT_SCALE,
    GridConfig,
    GridConfigError,
    build_grid,
    divergence_by_cell,
    evaluate_grid,
    placement_stats,
)
from .svg import render_edc_svg
from .synthetic import (
    SyntheticSpec,
    SyntheticSpecError,
    expected_placements,
    generate,
)

log = logging.getLogger("edc_eval")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2

VALIDATION_ERRORS = (
    ScoreDataError, EdcError, PaucConfigError, CalibrationError, DivergenceError,
    GridConfigError, SyntheticSpecError, SingularStepError, KeyError, ValueError,
)


class UsageError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _select_algorithms(table: QualityScoreTable, requested: list[str] | None) -> list[str]:
    available = table.algorithm_names
    if not requested:
        if not available:
            raise UsageError("quality-score file contains no algorithms")
        return available
    unknown = [a for a in requested if a not in available]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    return list(requested)


def _threshold(comparisons: ComparisonSet, kind: Kind, target: float):
    scores = comparisons.scores()
    if kind is Kind.MATED:
        return threshold_for_starting_error(scores, target)
    return threshold_for_fmr(scores, target)


def _load_kind(path, kind: Kind) -> ComparisonSet:
    subset = read_comparisons(path).of_kind(kind)
    if len(subset) == 0:
        raise UsageError(f"{path}: no {kind.value} comparisons")
    return subset


def _edc_curves(table, comparisons, kind, target, algorithms, mode):
    thr = _threshold(comparisons, kind, target)
    curves = [compute_edc(comparisons, pairwise_min_qs(comparisons, table, alg),
                          thr.threshold, mode, algorithm=alg) for alg in algorithms]
    return thr, curves


# -- commands ---------------------------------------------------------------

def cmd_edc(args) -> int:
    kind = Kind(args.kind)
    mode = ErrorMode.parse(args.error_mode)
    table = read_quality_scores(args.scores)
    comparisons = _load_kind(args.comparisons, kind)
    algorithms = _select_algorithms(table, args.algorithms)
    thr, curves = _edc_curves(table, comparisons, kind, args.starting_error, algorithms, mode)
    manifest = RunManifest("edc", {
        "kind": kind.value,
        "starting_error_target": args.starting_error,
        "starting_error_achieved": thr.achieved_starting_error,
        "threshold": thr.threshold,
        "error_mode": mode.value,
        "algorithms": algorithms,
    }, seed=args.seed)
    manifest.add_input("scores", args.scores)
    manifest.add_input("comparisons", args.comparisons)
    write_record(args.out, manifest, {"curves": {c.algorithm: c.to_dict() for c in curves}})
    if args.svg:
        Path(args.svg).write_text(render_edc_svg(curves, thr.achieved_starting_error,
                                                 x_max=args.svg_limit), encoding="utf-8")
    _say(args, f"starting error target {args.starting_error}, achieved "
               f"{thr.achieved_starting_error} (threshold {thr.threshold})")
    return EXIT_OK


def _read_paucs(path) -> dict[str, float]:
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or (i == 1 and row[0].strip() == "algorithm"):
                continue
            if len(row) != 2:
                raise UsageError(f"{path}:{i}: expected 2 columns (algorithm,pauc)")
            try:
                out[row[0].strip()] = float(row[1])
            except ValueError:
                raise UsageError(f"{path}:{i}: non-numeric pAUC {row[1]!r}") from None
    return out


def cmd_rank(args) -> int:
    config = PaucConfig(args.pauc_limit, Interpolation(args.interpolation))
    manifest = RunManifest("rank", {"pauc_limit": args.pauc_limit,
                                    "interpolation": config.interpolation.value,
                                    "adjust": args.adjust}, seed=args.seed)
    achieved = None
    if args.curves:
        record = read_record(args.curves)
        curves = [EdcCurve.from_dict(d) for d in record["curves"].values()]
        if not curves:
            raise UsageError(f"{args.curves}: no curves")
        achieved = curves[0].starting_error
        starting_error = args.starting_error if args.starting_error is not None else achieved
        paucs = {c.algorithm: pauc(c, config) for c in curves}
        manifest.add_input("curves", args.curves)
    else:
        if args.starting_error is None:
            raise UsageError("--paucs requires --starting-error")
        paucs = _read_paucs(args.paucs)
        starting_error = args.starting_error
        manifest.add_input("paucs", args.paucs)
    report = rank(paucs, starting_error, config, Adjustment(args.adjust), achieved)
    manifest.config["starting_error"] = starting_error
    manifest.config["achieved_starting_error"] = achieved
    write_record(args.out, manifest, {"ranking": report.to_dict()})
    for name in report.order():
        e = report.entries[name]
        _say(args, f"{e.discrete_rank:>3}  {e.relative_rank:5.2f}  {e.raw_pauc:.5f}  {name}")
    return EXIT_OK


def cmd_normalise(args) -> int:
    table = read_quality_scores(args.scores)
    calib_table = read_quality_scores(args.calibration) if args.calibration else table
    algorithms = _select_algorithms(table, args.algorithms)
    boundaries = {}
    for alg in algorithms:
        values = list(calib_table.for_algorithm(alg).values())
        if args.combine and args.calibration:
            values += list(table.for_algorithm(alg).values())
        boundaries[alg] = calibrate(values, args.function)
    subset = QualityScoreTable({k: v for k, v in table.scores.items() if k[1] in boundaries})
    normalised = normalise_table(subset, boundaries)
    variant = "combined" if (args.combine and args.calibration) else ("other" if args.calibration else "same")
    manifest = RunManifest("normalise", {"calibration_function": args.function,
                                         "calibration_variant": variant,
                                         "bin_convention": BIN_CONVENTION,
                                         "algorithms": algorithms}, seed=args.seed)
    manifest.add_input("scores", args.scores)
    if args.calibration:
        manifest.add_input("calibration", args.calibration)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        dump_quality_scores(normalised, fh, integer=True)
    Path(str(args.out) + ".manifest.json").write_text(dumps({"manifest": manifest.to_dict()}),
                                                      encoding="utf-8")
    if args.boundaries:
        write_record(args.boundaries, manifest,
                     {"calibrations": {a: b.to_dict() for a, b in boundaries.items()}})
    return EXIT_OK


def cmd_divergence(args) -> int:
    kind = Kind(args.kind)
    mode = ErrorMode.parse(args.error_mode)
    raw = read_quality_scores(args.scores)
    norm = read_quality_scores(args.normalised)
    comparisons = _load_kind(args.comparisons, kind)
    algorithms = _select_algorithms(raw, args.algorithms)
    config = PaucConfig(args.pauc_limit)
    thr = _threshold(comparisons, kind, args.starting_error)
    results = {}
    for alg in algorithms:
        rc = compute_edc(comparisons, pairwise_min_qs(comparisons, raw, alg), thr.threshold, mode, alg)
        nc = compute_edc(comparisons, pairwise_min_qs(comparisons, norm, alg), thr.threshold, mode, alg)
        results[alg] = {
            "divergence_percent": curve_divergence(rc, nc, config),
            "area_between": area_between(rc, nc, config.discard_limit),
            "raw_pauc": pauc(rc, config),
            "normalised_pauc": pauc(nc, config),
        }
    values = [r["divergence_percent"] for r in results.values()]
    manifest = RunManifest("divergence", {"kind": kind.value, "error_mode": mode.value,
                                          "starting_error_target": args.starting_error,
                                          "starting_error_achieved": thr.achieved_starting_error,
                                          "threshold": thr.threshold,
                                          "pauc_limit": args.pauc_limit}, seed=args.seed)
    for role, p in (("scores", args.scores), ("normalised", args.normalised),
                    ("comparisons", args.comparisons)):
        manifest.add_input(role, p)
    write_record(args.out, manifest, {"mean_divergence_percent": float(np.mean(values)),
                                      "algorithms": results})
    for alg, r in results.items():
        _say(args, f"{r['divergence_percent']:7.2f}%  {alg}")
    return EXIT_OK


def _load_toml(path):
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise GridConfigError(f"{path}: {exc}") from None


def _read_expected(path) -> dict[str, float]:
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or (i == 1 and row[0].strip() == "algorithm"):
                continue
            if len(row) != 2:
                raise UsageError(f"{path}:{i}: expected 2 columns (algorithm,expected_placement)")
            try:
                out[row[0].strip()] = float(row[1])
            except ValueError:
                raise UsageError(f"{path}:{i}: non-numeric placement {row[1]!r}") from None
    return out


def cmd_stability(args) -> int:
    cfg = _load_toml(args.grid_config)
    base = Path(args.grid_config).parent
    try:
        grid = GridConfig.from_ranges(cfg["starting_errors"], cfg["pauc_limits"])
        scores_path = base / cfg["scores"]
        comparisons_path = base / cfg["comparisons"]
    except KeyError as exc:
        raise GridConfigError(f"{args.grid_config}: missing key {exc.args[0]!r}") from None
    interpolation = Interpolation(cfg.get("interpolation", "stepwise"))
    mode = ErrorMode.parse(cfg.get("error_mode", "without_discarded"))
    table = read_quality_scores(scores_path)
    mated = _load_kind(comparisons_path, Kind.MATED)
    algorithms = _select_algorithms(table, cfg.get("algorithms"))
    expected = _read_expected(args.expected) if args.expected else None
    if expected is not None:
        missing = [a for a in algorithms if a not in expected]
        if missing:
            raise UsageError(f"{args.expected}: no expected placement for {', '.join(missing)}")
    pairwise = {a: pairwise_min_qs(mated, table, a) for a in algorithms}
    ranking = evaluate_grid(mated.scores(), pairwise, grid, interpolation, mode)
    divergence = divergence_by_cell(ranking, expected)
    stats = placement_stats(ranking)

    manifest = RunManifest("stability", {
        "grid_cells": len(build_grid(grid)),
        "starting_errors": list(grid.starting_errors),
        "pauc_limits": list(grid.pauc_limits),
        "interpolation": interpolation.value,
        "error_mode": mode.value,
        "reference": "expected" if expected is not None else "mean",
        "divergence_scale": DIVERGENCE_SCALE,
        "placement_scale": PLACEMENT_SCALE,
        "algorithms": algorithms,
    }, seed=args.seed)
    manifest.add_input("grid_config", args.grid_config)
    manifest.add_input("scores", scores_path)
    manifest.add_input("comparisons", comparisons_path)
    if args.expected:
        manifest.add_input("expected", args.expected)
    write_record(args.out, manifest, {
        "cells": [c.to_dict(float(d)) for c, d in zip(ranking.cells, divergence)],
        "placement_stats": {a: s.to_dict() for a, s in stats.items()},
    })
    stats_path = args.stats or str(args.out) + ".stats.csv"
    with open(stats_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "span", "best", "worst", "median", "mean", "std_dev"])
        for a, s in stats.items():
            w.writerow([a] + [repr(v) for v in s.to_dict().values()])
    _say(args, f"{len(ranking.cells)} cells; mean divergence {float(divergence.mean()):.4f}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SyntheticSpec(args.subjects, args.samples_per_subject, tuple(args.scales), args.seed)
    data = generate(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "scores.csv", "w", encoding="utf-8", newline="") as fh:
        dump_quality_scores(data.quality_table(), fh)
    with open(out / "comparisons.csv", "w", encoding="utf-8", newline="") as fh:
        dump_comparisons(data.comparisons(), fh)
    with open(out / "utilities.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample_id", "utility"])
        for sid, u in zip(data.sample_ids, data.utility.tolist()):
            w.writerow([sid, repr(u)])
    files = ["scores.csv", "comparisons.csv", "utilities.csv"]
    if len(set(spec.offset_scales)) >= 2:
        with open(out / "expected.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["algorithm", "expected_placement"])
            for a, e in expected_placements(spec.offset_scales, spec.names).items():
                w.writerow([a, repr(e)])
        files.append("expected.csv")
    manifest = RunManifest("synth", spec.to_dict(), seed=args.seed)
    manifest.config["mated_pairs"] = data.n_pairs
    manifest.config["oracle_only"] = ["utilities.csv"]
    manifest.config["files"] = files
    (out / "manifest.json").write_text(dumps({"manifest": manifest.to_dict()}), encoding="utf-8")
    _say(args, f"{len(data.sample_ids)} samples, {data.n_pairs} mated pairs -> {out}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    kind = Kind(args.kind)
    mode = ErrorMode.parse(args.error_mode)
    comparisons = _load_kind(args.comparisons, kind)
    thr = _threshold(comparisons, kind, args.starting_error)
    seed = 0 if args.seed is None else args.seed
    curve = random_baseline(comparisons, thr.threshold, args.trials, seed, mode)
    manifest = RunManifest("baseline", {"kind": kind.value, "error_mode": mode.value,
                                        "starting_error_target": args.starting_error,
                                        "starting_error_achieved": thr.achieved_starting_error,
                                        "threshold": thr.threshold, "trials": args.trials},
                           seed=seed)
    manifest.add_input("comparisons", args.comparisons)
    write_record(args.out, manifest, {"baseline": curve.to_dict()})
    if args.svg:
        curve.algorithm = f"random QS mean ({args.trials} trials)"
        Path(args.svg).write_text(render_edc_svg([curve], thr.achieved_starting_error),
                                  encoding="utf-8")
    return EXIT_OK


def cmd_altmetrics(args) -> int:
    table = read_quality_scores(args.scores)
    all_comparisons = read_comparisons(args.comparisons)
    algorithms = _select_algorithms(table, args.algorithms)
    mated = all_comparisons.of_kind(Kind.MATED)
    nonmated = all_comparisons.of_kind(Kind.NONMATED)
    metric = args.metric
    config = {"metric": metric, "algorithms": algorithms}
    body: dict = {}

    def need_both():
        if len(mated) == 0 or len(nonmated) == 0:
            raise UsageError(f"{metric} needs both mated and non-mated comparisons")

    if metric == "cs-dc":
        subset = mated if args.kind == "mated" else nonmated
        if len(subset) == 0:
            raise UsageError(f"no {args.kind} comparisons")
        config["kind"] = args.kind
        body["curves"] = {a: cs_dc(subset, pairwise_min_qs(subset, table, a)).to_dict()
                          for a in algorithms}
    elif metric == "dprime-dc":
        need_both()
        curves = {}
        for a in algorithms:
            curves[a] = dprime_dc(mated, nonmated, pairwise_min_qs(mated, table, a),
                                  pairwise_min_qs(nonmated, table, a), on_singular="stop").to_dict()
        config["score_convention"] = "similarity; d' = (mean_mated - mean_nonmated) / sqrt(var_m + var_n)"
        config["on_singular"] = "curve ends at the first zero-variance step"
        body["curves"] = curves
    elif metric == "fc-edc":
        need_both()
        config["fixed_fmr_target"] = args.fmr
        body["curves"] = {a: fc_edc(mated, nonmated, pairwise_min_qs(mated, table, a),
                                    pairwise_min_qs(nonmated, table, a), args.fmr).to_dict()
                          for a in algorithms}
    elif metric == "correlation":
        config["method"] = args.method
        config["target"] = args.correlate
        result = {}
        if args.correlate == "utility":
            util = sample_utility_scores(all_comparisons)
            config["utility_label"] = util.label
            body["omitted_samples"] = util.omitted
            ids = sorted(util.scores)
            for a in algorithms:
                qs = table.for_algorithm(a)
                use = [s for s in ids if s in qs]
                result[a] = qs_cs_correlation([qs[s] for s in use], [util.scores[s] for s in use],
                                              args.method)
        else:
            subset = mated if args.kind == "mated" else nonmated
            config["kind"] = args.kind
            if args.correlate == "proxy":
                if args.starting_error is None:
                    raise UsageError("--correlate proxy requires --starting-error")
                thr = _threshold(subset, Kind(args.kind), args.starting_error)
                config["threshold"] = thr.threshold
                config["starting_error_achieved"] = thr.achieved_starting_error
                for a in algorithms:
                    result[a] = error_proxy_correlation(pairwise_min_qs(subset, table, a),
                                                        subset, thr.threshold)
            else:
                for a in algorithms:
                    result[a] = qs_cs_correlation(pairwise_min_qs(subset, table, a),
                                                  subset.scores(), args.method)
        body["correlations"] = result
    elif metric == "det":
        need_both()
        if not args.qs_thresholds:
            raise UsageError("det needs --qs-thresholds")
        config["qs_thresholds"] = args.qs_thresholds
        curves, skipped = {}, []
        for a in algorithms:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", SkippedThresholdWarning)
                dets = det_vs_discard(mated, nonmated, pairwise_min_qs(mated, table, a),
                                      pairwise_min_qs(nonmated, table, a), args.qs_thresholds)
            skipped += [f"{a}: {w.message}" for w in caught]
            curves[a] = [d.to_dict() for d in dets]
        body["curves"] = curves
        body["skipped"] = skipped
        for s in skipped:
            log.warning(s)
    manifest = RunManifest("altmetrics", config, seed=args.seed)
    manifest.add_input("scores", args.scores)
    manifest.add_input("comparisons", args.comparisons)
    write_record(args.out, manifest, body)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 so that 2 stays reserved for I/O failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (recorded in the manifest)")
    common.add_argument("--out", required=True, help="output record file")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    parser = _Parser(prog="edc-eval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def scores_args(p, kind=True):
        p.add_argument("--scores", required=True, help="quality-score CSV")
        p.add_argument("--comparisons", required=True, help="comparison CSV")
        if kind:
            p.add_argument("--kind", choices=["mated", "nonmated"], default="mated")
        p.add_argument("--algorithms", type=_names, default=None, help="comma-separated subset")

    p = sub.add_parser("edc", parents=[common], help="compute EDC step curves")
    scores_args(p)
    p.add_argument("--starting-error", type=float, required=True, help="target starting error")
    p.add_argument("--error-mode", choices=["without", "with"], default="without")
    p.add_argument("--svg", help="also write an SVG plot")
    p.add_argument("--svg-limit", type=float, default=1.0, help="x-axis extent of the SVG")
    p.set_defaults(func=cmd_edc)

    p = sub.add_parser("rank", parents=[common], help="rank algorithms by pAUC")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--curves", help="curve record written by 'edc'")
    src.add_argument("--paucs", help="CSV algorithm,pauc")
    p.add_argument("--starting-error", type=float, default=None)
    p.add_argument("--pauc-limit", type=float, required=True)
    p.add_argument("--interpolation", choices=["stepwise", "linear"], default="stepwise")
    p.add_argument("--adjust", choices=["none", "best", "best+upper"], default="best")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("normalise", parents=[common], help="normalise QSs to [0, 100] integers")
    p.add_argument("--scores", required=True)
    p.add_argument("--calibration", help="calibration QS CSV (default: the scores themselves)")
    p.add_argument("--combine", action="store_true", help="calibrate on calibration + scores")
    p.add_argument("--function", choices=["minmax", "proportional"], default="minmax")
    p.add_argument("--algorithms", type=_names, default=None)
    p.add_argument("--boundaries", help="write calibrated boundaries to this file")
    p.set_defaults(func=cmd_normalise)

    p = sub.add_parser("divergence", parents=[common], help="raw vs normalised curve divergence")
    scores_args(p)
    p.add_argument("--normalised", required=True, help="normalised quality-score CSV")
    p.add_argument("--starting-error", type=float, required=True)
    p.add_argument("--pauc-limit", type=float, default=0.2)
    p.add_argument("--error-mode", choices=["without", "with"], default="without")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("stability", parents=[common], help="ranking stability over a config grid")
    p.add_argument("--grid-config", required=True)
    p.add_argument("--expected", help="CSV algorithm,expected_placement")
    p.add_argument("--stats", help="placement statistics CSV (default: OUT.stats.csv)")
    p.set_defaults(func=cmd_stability)

    synth_common = _Parser(add_help=False)
    synth_common.add_argument("--seed", type=int, default=0)
    synth_common.add_argument("--quiet", action="store_true")
    p = sub.add_parser("synth", parents=[synth_common], help="generate synthetic score files")
    p.add_argument("--subjects", type=int, required=True)
    p.add_argument("--samples-per-subject", type=int, required=True)
    p.add_argument("--scales", type=_floats, required=True)
    p.add_argument("--out-dir", "--out", dest="out_dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("baseline", parents=[common], help="mean EDC under random QSs")
    p.add_argument("--comparisons", required=True)
    p.add_argument("--kind", choices=["mated", "nonmated"], default="mated")
    p.add_argument("--starting-error", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--error-mode", choices=["without", "with"], default="without")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("altmetrics", parents=[common], help="CS-DC, d'-DC, FC-EDC, correlation, DET")
    scores_args(p)
    p.add_argument("--metric", required=True,
                   choices=["cs-dc", "dprime-dc", "fc-edc", "correlation", "det"])
    p.add_argument("--fmr", type=float, default=0.001, help="fixed FMR target for fc-edc")
    p.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    p.add_argument("--correlate", choices=["cs", "proxy", "utility"], default="cs")
    p.add_argument("--starting-error", type=float, default=None, help="for --correlate proxy")
    p.add_argument("--qs-thresholds", type=_floats, default=None)
    p.set_defaults(func=cmd_altmetrics)
    return parser


def _say(args, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, *VALIDATION_ERRORS) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"edc-eval {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"edc-eval {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
