"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the verdict lines are printed
even when output capture is on).
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from edc_eval.alt_metrics import dprime, dprime_dc, fc_edc, qs_cs_correlation
from edc_eval.cli import main
from edc_eval.edc import EdcCurve, compute_edc, random_baseline, threshold_for_starting_error
from edc_eval.normalisation import apply_normalisation, calibrate, calibrate_minmax, curve_divergence
from edc_eval.pauc import PaucConfig, area_under_theoretical_best, pauc, rank
from edc_eval.score_data import ComparisonSet, Kind, dump_comparisons, dump_quality_scores
from edc_eval.stability import (
    GridConfig,
    evaluate_grid,
    mean_divergence_at_limit,
    placement_stats,
    ranking_divergence_expected,
    value_range,
)
from edc_eval.synthetic import SyntheticSpec, expected_placements, generate

from conftest import VARIANT_1, synthetic_nonmated
from oracles import average_ranks, brute_edc, fmr_cut_points, pearson_two_pass, riemann_left


@pytest.fixture
def verdict(capsys):
    """Print one PASS/FAIL line, then fail the test if needed."""

    def report(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return report


def mated(cs):
    n = len(cs)
    return ComparisonSet.from_arrays([f"a{i}" for i in range(n)], [f"b{i}" for i in range(n)], cs, Kind.MATED)


# 1 ------------------------------------------------------------------------------

PUBLISHED_PAUCS = {
    "LFW": ([("MagFace", 0.00362), ("CR-FIQA(L)", 0.00383), ("PCNet", 0.00506),
             ("CR-FIQA(S)", 0.00572), ("SER-FIQ", 0.00672)], [0.00, 0.07, 0.46, 0.68, 1.00]),
    "TinyFace": ([("CR-FIQA(L)", 0.00588), ("SER-FIQ", 0.00589), ("MagFace", 0.00666),
                  ("CR-FIQA(S)", 0.00787), ("PCNet", 0.00793)], [0.00, 0.00, 0.38, 0.97, 1.00]),
}


def test_criterion_1_published_rankings(verdict):
    t0 = time.perf_counter()
    failures = []
    for block, (rows, published) in PUBLISHED_PAUCS.items():
        report = rank(dict(rows), 0.05, PaucConfig(0.2))
        rel, disc = report.relative(), report.discrete()
        for (name, _), want, k in zip(rows, published, range(1, 6)):
            if abs(rel[name] - want) > 0.005 or disc[name] != k:
                failures.append(f"{block}/{name}: rel {rel[name]:.4f} rank {disc[name]}")
    elapsed = time.perf_counter() - t0
    verdict(1, "published ranking fixture", not failures and elapsed < 1,
            "; ".join(failures) or f"{elapsed * 1000:.1f} ms")


# 2 ------------------------------------------------------------------------------

def test_criterion_2_theoretical_best(verdict, rng):
    exact = area_under_theoretical_best(0.05, 0.2) == 0.00125
    worst = 0.0
    for _ in range(100):
        e0 = float(rng.uniform(0.01, 1.0))
        limit = float(rng.uniform(0.0, e0))
        E, L = Fraction(e0), Fraction(limit)
        integral = E * L - L * L / 2  # exact antiderivative of E0 - x on [0, L]
        worst = max(worst, abs(area_under_theoretical_best(e0, limit) - float(integral)))
    verdict(2, "area under theoretical best", exact and worst <= 1e-12,
            f"0.05/0.2 exact={exact}, max error {worst:.1e}")


# 3 ------------------------------------------------------------------------------

def test_criterion_3_edc_oracle(verdict, rng):
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        cs = (rng.integers(0, 10, n) / 10).tolist()
        qs = rng.integers(0, max(1, n // 2), n).tolist()  # few levels -> ties
        thr = float(rng.integers(0, 11)) / 10
        comps = mated(cs)
        for mode, with_d in (("without_discarded", False), ("with_discarded", True)):
            got = compute_edc(comps, qs, thr, mode).points
            want = brute_edc(cs, qs, thr, mated=True, with_discarded=with_d)
            if len(got) != len(want) or any(gx != wx or abs(gy - wy) > 1e-15
                                             for (gx, gy), (wx, wy) in zip(got, want)):
                bad += 1
    elapsed = time.perf_counter() - t0
    verdict(3, "EDC equals brute-force oracle", bad == 0 and elapsed < 5,
            f"{bad} mismatches, {elapsed:.2f} s")


# 4 ------------------------------------------------------------------------------

def test_criterion_4_pauc_riemann(verdict, rng):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 20))
        xs = np.concatenate([[0.0], np.sort(rng.choice(np.arange(1, 1000), n - 1, replace=False)) / 1000])
        ys = rng.uniform(0, 1, n)
        curve = EdcCurve(xs, ys, float(ys[0]), 0.0)
        limit = float(rng.choice([0.05, 0.1, 0.2, 0.3, 0.5]))
        worst = max(worst, abs(pauc(curve, PaucConfig(limit)) - riemann_left(curve.points, limit)))
    elapsed = time.perf_counter() - t0
    verdict(4, "stepwise pAUC equals Riemann sum", worst <= 1e-8 and elapsed < 5,
            f"max error {worst:.1e}, {elapsed:.2f} s")


# 5 ------------------------------------------------------------------------------

def test_criterion_5_random_baseline(verdict, rng):
    t0 = time.perf_counter()
    cs = rng.uniform(size=1000)
    thr = threshold_for_starting_error(cs, 0.05)
    curve = random_baseline(mated(cs), thr.threshold, 100, seed=0)
    sel = curve.discard_fractions <= 0.8
    dev = float(np.max(np.abs(curve.errors[sel] - 0.05)))
    elapsed = time.perf_counter() - t0
    ok = thr.achieved_starting_error == 0.05 and dev <= 0.03 and elapsed < 10
    verdict(5, "random-QS baseline stays at the starting error", ok,
            f"achieved {thr.achieved_starting_error}, max |dev| {dev:.4f}, {elapsed:.2f} s")


# 6 ------------------------------------------------------------------------------

def test_criterion_6_synthetic_stability(verdict):
    t0 = time.perf_counter()
    spec = SyntheticSpec(2000, 5, VARIANT_1, seed=0)
    data = generate(spec)
    pairwise = {a: data.pairwise_qs(a) for a in spec.names}
    cfg = GridConfig(value_range(0.01, 0.10, 0.01), (0.01, 0.05, 0.10, 0.15, 0.20))
    grid = evaluate_grid(data.mated_scores, pairwise, cfg)
    expected_order = {name: k + 1 for k, name in enumerate(spec.names)}
    a = all(c.discrete == expected_order for c in grid.cells if c.pauc_limit == 0.2)
    d = ranking_divergence_expected(grid, expected_placements(spec.offset_scales, spec.names))
    d20, d01 = mean_divergence_at_limit(grid, d, 0.2), mean_divergence_at_limit(grid, d, 0.01)
    means = [placement_stats(grid)[n].mean for n in spec.names]
    c = all(x < y for x, y in zip(means, means[1:]))
    elapsed = time.perf_counter() - t0
    verdict(6, "synthetic ranking stability", a and d20 < d01 and c and elapsed < 120,
            f"(a)={a}, (b) {d20:.3f} < {d01:.3f}, (c)={c}, {elapsed:.1f} s")


# 7 ------------------------------------------------------------------------------

def test_criterion_7_normalisation(verdict, rng):
    t0 = time.perf_counter()
    mono = ends = True
    for fn in ("minmax", "proportional"):
        for _ in range(1000):
            cal = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 3), int(rng.integers(2, 60)))
            b = calibrate(cal, fn)
            q = np.sort(rng.uniform(cal.min() - 1, cal.max() + 1, (100, 2)), axis=1)
            bins = apply_normalisation(q, b)
            mono &= bool(np.all(bins[:, 0] <= bins[:, 1]))
            if fn == "minmax":
                ends &= apply_normalisation(cal.min(), b) == 0 and apply_normalisation(cal.max(), b) == 100

    data = generate(SyntheticSpec(2000, 5, VARIANT_1, seed=0))
    comps = data.comparisons()
    thr = threshold_for_starting_error(data.mated_scores, 0.05).threshold
    config = PaucConfig(0.2)
    shifted = []
    for name in data.spec.names:
        qs = data.quality[name]
        raw = compute_edc(comps, data.pairwise_qs(name), thr)
        for calibration in (qs, qs + 0.5):
            b = calibrate_minmax(calibration)
            nq = apply_normalisation(qs, b)
            norm = compute_edc(comps, np.minimum(nq[data.pair_index[:, 0]], nq[data.pair_index[:, 1]]), thr)
            shifted.append(curve_divergence(raw, norm, config))
    same, other = shifted[0::2], shifted[1::2]
    order = all(s <= o for s, o in zip(same, other))
    elapsed = time.perf_counter() - t0
    verdict(7, "normalisation properties", mono and ends and order and elapsed < 30,
            f"monotone={mono}, minmax ends={ends}, same<=other={order} "
            f"(same max {max(same):.2f}%, other min {min(other):.2f}%), {elapsed:.1f} s")


# 8 ------------------------------------------------------------------------------

def test_criterion_8_dprime_and_correlation(verdict, rng):
    value = float(dprime_dc([0.8, 0.9], [0.1, 0.2], [1, 1], [1, 1]).values[0])
    closed_form = 0.7 / math.sqrt(0.005)
    fixture = abs(value - closed_form) <= 1e-9 and round(value, 5) == 9.89949

    worst_corr = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 40))
        x, y = rng.normal(size=n), rng.normal(size=n)
        worst_corr = max(worst_corr, abs(qs_cs_correlation(x, y) - pearson_two_pass(x.tolist(), y.tolist())))
        xi, yi = rng.integers(0, 6, n).tolist(), rng.integers(0, 6, n).tolist()
        if len(set(xi)) > 1 and len(set(yi)) > 1:
            want = pearson_two_pass(average_ranks(xi), average_ranks(yi))
            worst_corr = max(worst_corr, abs(qs_cs_correlation(xi, yi, "spearman") - want))

    worst_affine = 0.0
    m, nm = rng.normal(0.7, 0.1, 50), rng.normal(0.2, 0.1, 80)
    qm, qn = rng.integers(0, 10, 50), rng.integers(0, 10, 80)
    base = dprime_dc(m, nm, qm, qn, on_singular="stop")
    for _ in range(100):
        a, b = float(rng.uniform(0.01, 100)), float(rng.uniform(-100, 100))
        moved = dprime_dc(m * a + b, nm * a + b, qm, qn, on_singular="stop")
        worst_affine = max(worst_affine, float(np.max(np.abs(moved.values - base.values))))
        worst_affine = max(worst_affine, abs(dprime(m * a + b, nm * a + b) - dprime(m, nm)))
    ok = fixture and worst_corr <= 1e-12 and worst_affine <= 1e-9
    verdict(8, "d' and correlation fixtures", ok,
            f"d'={value!r}, correlation max error {worst_corr:.1e}, affine max error {worst_affine:.1e}")


# 9 ------------------------------------------------------------------------------

def test_criterion_9_fc_cut_points(verdict, rng):
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        n_m, n_n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        m = (rng.integers(0, 10, n_m) / 10).tolist()
        nm = (rng.integers(0, 10, n_n) / 10).tolist()
        qm = rng.integers(0, 4, n_m).tolist()
        qn = rng.integers(0, 4, n_n).tolist()
        target = float(rng.choice([0.0, 0.1, 0.2, 0.25, 1 / 3, 0.5, 1.0]))
        curve = fc_edc(m, nm, qm, qn, target)
        levels = sorted(set(qm + qn))
        n = n_m + n_n
        for x, y, t, fmr in zip(curve.discard_fractions, curve.values,
                                curve.extra["thresholds"], curve.extra["achieved_fmr"]):
            # reconstruct the remaining set from the discard fraction
            removed = round(x * n)
            lv = next(v for v in levels if sum(q < v for q in qm + qn) == removed)
            rm = [s for s, q in zip(m, qm) if q >= lv]
            rn = [s for s, q in zip(nm, qn) if q >= lv]
            want_t, want_fmr = fmr_cut_points(rn, target)
            true_fmr = sum(s >= t for s in rn) / len(rn)
            if not (fmr <= target and true_fmr == fmr and t == want_t and fmr == want_fmr
                    and y == sum(s < t for s in rm) / len(rm)):
                bad += 1
    elapsed = time.perf_counter() - t0
    verdict(9, "FC-EDC thresholds are minimal cut points within target", bad == 0 and elapsed < 10,
            f"{bad} violations, {elapsed:.2f} s")


# 10 -----------------------------------------------------------------------------

def run_cli(*argv):
    return main([str(a) for a in argv])


def test_criterion_10_determinism(verdict, tmp_path):
    data = generate(SyntheticSpec(80, 4, VARIANT_1, seed=5))
    nm, _, _ = synthetic_nonmated(data, 400, seed=5)
    with open(tmp_path / "scores.csv", "w", encoding="utf-8", newline="") as fh:
        dump_quality_scores(data.quality_table(), fh)
    with open(tmp_path / "comparisons.csv", "w", encoding="utf-8", newline="") as fh:
        dump_comparisons(ComparisonSet(data.comparisons().comparisons + nm.comparisons), fh)
    (tmp_path / "grid.toml").write_text('scores = "scores.csv"\ncomparisons = "comparisons.csv"\n'
                                        "starting_errors = { lo = 0.01, hi = 0.05, step = 0.01 }\n"
                                        "pauc_limits = [0.05, 0.1, 0.2]\n")
    (tmp_path / "paucs.csv").write_text("A,0.1\nB,0.2\nC,0.15\n")
    s, c = tmp_path / "scores.csv", tmp_path / "comparisons.csv"

    def commands(tag):
        d = tmp_path / tag
        d.mkdir()
        return d, [
            ["synth", "--subjects", 20, "--samples-per-subject", 3, "--scales", "0.1,0.2,0.3",
             "--seed", 7, "--out-dir", d / "synth"],
            ["edc", "--scores", s, "--comparisons", c, "--starting-error", 0.05, "--out", d / "edc.json"],
            ["rank", "--curves", d / "edc.json", "--pauc-limit", 0.2, "--out", d / "rank.json"],
            ["rank", "--paucs", tmp_path / "paucs.csv", "--starting-error", 0.05, "--pauc-limit", 0.2,
             "--out", d / "rank2.json"],
            ["normalise", "--scores", s, "--function", "proportional", "--boundaries", d / "b.json",
             "--out", d / "norm.csv"],
            ["divergence", "--scores", s, "--normalised", d / "norm.csv", "--comparisons", c,
             "--starting-error", 0.05, "--out", d / "div.json"],
            ["stability", "--grid-config", tmp_path / "grid.toml", "--out", d / "stab.json"],
            ["baseline", "--comparisons", c, "--starting-error", 0.05, "--trials", 10, "--seed", 3,
             "--out", d / "base.json"],
            ["altmetrics", "--scores", s, "--comparisons", c, "--metric", "cs-dc", "--out", d / "csdc.json"],
            ["altmetrics", "--scores", s, "--comparisons", c, "--metric", "dprime-dc", "--out", d / "dp.json"],
            ["altmetrics", "--scores", s, "--comparisons", c, "--metric", "fc-edc", "--fmr", 0.01,
             "--out", d / "fc.json"],
            ["altmetrics", "--scores", s, "--comparisons", c, "--metric", "correlation",
             "--correlate", "utility", "--out", d / "corr.json"],
            ["altmetrics", "--scores", s, "--comparisons", c, "--metric", "det",
             "--qs-thresholds=-1,0,0.5", "--out", d / "det.json"],
        ]

    outputs = []
    codes = []
    for tag in ("first", "second"):
        d, cmds = commands(tag)
        codes += [run_cli(*cmd, "--quiet") for cmd in cmds]
        files = sorted(p for p in d.rglob("*") if p.is_file() and p.suffix != ".svg")
        # outputs reference their own directory only through manifests; normalise that away
        outputs.append({str(p.relative_to(d)): p.read_bytes().replace(str(d).encode(), b"<run>") for p in files})
    same = outputs[0] == outputs[1]
    verdict(10, "CLI reruns are byte-identical", same and all(code == 0 for code in codes),
            f"{len(outputs[0])} files, exit codes {sorted(set(codes))}")
