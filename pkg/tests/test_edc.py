import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edc_eval.edc import (
    EdcCurve,
    EdcError,
    ErrorMode,
    compute_edc,
    curve_value_at,
    random_baseline,
    theoretical_best_error,
    threshold_for_fmr,
    threshold_for_starting_error,
)
from edc_eval.score_data import Comparison, ComparisonSet, Kind

from oracles import brute_edc, fnmr_cut_points


def mated(scores):
    return ComparisonSet.from_arrays([f"a{i}" for i in range(len(scores))],
                                     [f"b{i}" for i in range(len(scores))], scores, Kind.MATED)


def nonmated(scores):
    return ComparisonSet.from_arrays([f"a{i}" for i in range(len(scores))],
                                     [f"b{i}" for i in range(len(scores))], scores, Kind.NONMATED)


# -- thresholds ----------------------------------------------------------------

@pytest.mark.parametrize("scores, target, threshold, achieved", [
    ([0.1, 0.2, 0.3, 0.4], 0.5, 0.3, 0.5),
    ([0.1, 0.2, 0.3, 0.4], 0.0, 0.1, 0.0),
    ([0.1, 0.1, 0.1, 0.9], 0.5, 0.1, 0.0),
    ([0.1, 0.1, 0.1, 0.9], 0.75, 0.9, 0.75),
])
def test_threshold_examples(scores, target, threshold, achieved):
    r = threshold_for_starting_error(scores, target)
    assert (r.threshold, r.achieved_starting_error) == (threshold, achieved)


def test_threshold_full_error():
    r = threshold_for_starting_error([0.1, 0.2], 1.0)
    assert r.achieved_starting_error == 1.0
    assert all(s < r.threshold for s in [0.1, 0.2])


@settings(max_examples=200)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=12), st.floats(0, 1))
def test_threshold_matches_enumeration(raw, target):
    scores = [v / 10 for v in raw]
    r = threshold_for_starting_error(scores, target)
    options = [o for o in fnmr_cut_points(scores) if o[0] <= target]
    best = max(f for f, _ in options)
    expected_t = min(t for f, t in options if f == best)
    assert r.achieved_starting_error == best <= target
    assert r.threshold == expected_t
    # achieved is exactly the fraction strictly below the threshold
    assert r.achieved_starting_error == sum(s < r.threshold for s in scores) / len(scores)
    if any(f == target for f, _ in fnmr_cut_points(scores)):
        assert r.achieved_starting_error == target


def test_threshold_for_fmr_examples():
    r = threshold_for_fmr([0.1, 0.2, 0.3, 0.4], 0.25)
    assert (r.threshold, r.achieved_starting_error) == (0.4, 0.25)
    r = threshold_for_fmr([0.1, 0.2, 0.3, 0.4], 0.0)
    assert r.threshold > 0.4 and r.achieved_starting_error == 0.0
    assert threshold_for_fmr([0.1, 0.2], 1.0).threshold == 0.1


# -- curves ----------------------------------------------------------------------

def test_compute_edc_hand_example():
    curve = compute_edc(mated([0.1, 0.4, 0.2, 0.5]), [1, 2, 3, 4], 0.3)
    assert curve.discard_fractions.tolist() == [0, 0.25, 0.5, 0.75]
    assert curve.errors == pytest.approx([0.5, 1 / 3, 0.5, 0.0], abs=1e-15)
    assert curve.starting_error == 0.5
    assert curve.total_comparisons == 4


def test_compute_edc_no_errors():
    curve = compute_edc(mated([0.5, 0.6, 0.7]), [3, 1, 2], 0.3)
    assert np.all(curve.errors == 0)


def test_compute_edc_all_ties_single_point():
    curve = compute_edc(mated([0.1, 0.4, 0.2, 0.5]), [7, 7, 7, 7], 0.3)
    assert curve.points == [(0.0, 0.5)]


def test_compute_edc_fm_variant_uses_ge():
    curve = compute_edc(nonmated([0.3, 0.1, 0.5]), [1, 2, 3], 0.3)
    assert curve.kind is Kind.NONMATED
    assert curve.points[0] == (0.0, pytest.approx(2 / 3))
    assert curve.errors[1] == pytest.approx(0.5)


def test_compute_edc_errors():
    with pytest.raises(EdcError):
        compute_edc(ComparisonSet(), [], 0.3)
    mixed = ComparisonSet([Comparison("a", "b", 0.1, Kind.MATED), Comparison("c", "d", 0.2, Kind.NONMATED)])
    with pytest.raises(EdcError, match="mixes"):
        compute_edc(mixed, [1, 2], 0.3)


def test_with_discarded_mode():
    curve = compute_edc(mated([0.1, 0.4, 0.2, 0.5]), [1, 2, 3, 4], 0.3, "with_discarded")
    assert curve.errors == pytest.approx([0.5, 0.25, 0.25, 0.0])


instances = st.integers(1, 10).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 9), min_size=n, max_size=n),
    st.lists(st.integers(0, 4), min_size=n, max_size=n),
    st.integers(0, 9),
))


@settings(max_examples=300)
@given(instances, st.booleans())
def test_matches_brute_force(inst, is_mated):
    cs_raw, qs, thr = inst
    cs = [v / 10 for v in cs_raw]
    comps = mated(cs) if is_mated else nonmated(cs)
    for mode, with_d in ((ErrorMode.WITHOUT_DISCARDED, False), (ErrorMode.WITH_DISCARDED, True)):
        got = compute_edc(comps, qs, thr / 10, mode).points
        want = brute_edc(cs, qs, thr / 10, mated=is_mated, with_discarded=with_d)
        assert len(got) == len(want)
        for (gx, gy), (wx, wy) in zip(got, want):
            assert gx == wx
            assert gy == pytest.approx(wy, abs=1e-15)


@settings(max_examples=100)
@given(instances)
def test_curve_invariants(inst):
    cs_raw, qs, thr = inst
    comps = mated([v / 10 for v in cs_raw])
    a = compute_edc(comps, qs, thr / 10)
    b = compute_edc(comps, qs, thr / 10, "with_discarded")
    n = len(cs_raw)
    assert a.discard_fractions[0] == 0
    assert np.all(np.diff(a.discard_fractions) > 0)
    assert np.all(a.discard_fractions < 1)
    k = a.discard_fractions * n
    assert np.allclose(k, np.round(k))
    assert np.array_equal(a.discard_fractions, b.discard_fractions)
    assert np.all(np.diff(b.errors) <= 1e-15)


@settings(max_examples=100)
@given(instances)
def test_monotone_relabelling_invariance(inst):
    cs_raw, qs, thr = inst
    comps = mated([v / 10 for v in cs_raw])
    base = compute_edc(comps, qs, thr / 10)
    transformed = compute_edc(comps, np.exp(np.asarray(qs, float)) * 3 - 7, thr / 10)
    assert base.points == transformed.points


def test_input_order_irrelevant(rng):
    cs = rng.uniform(size=50)
    qs = rng.integers(0, 10, size=50)
    perm = rng.permutation(50)
    a = compute_edc(mated(cs), qs, 0.3)
    b = compute_edc(mated(cs[perm]), qs[perm], 0.3)
    assert a.points == b.points


def test_curve_value_at():
    curve = EdcCurve(np.array([0.0, 0.25]), np.array([0.5, 1 / 3]), 0.5, 0.3)
    assert curve_value_at(curve, 0.1) == 0.5
    assert curve_value_at(curve, 0.25) == 1 / 3
    assert curve_value_at(curve, 0.9) == 1 / 3
    for bad in (-0.1, 1.0):
        with pytest.raises(EdcError):
            curve_value_at(curve, bad)


@pytest.mark.parametrize("e0, x, want", [(0.05, 0.02, 0.03), (0.05, 0.05, 0.0), (0.05, 0.2, 0.0)])
def test_theoretical_best(e0, x, want):
    assert theoretical_best_error(e0, x) == pytest.approx(want, abs=1e-15)


def test_curve_dict_round_trip():
    curve = compute_edc(mated([0.1, 0.4, 0.2, 0.5]), [1, 2, 3, 4], 0.3, algorithm="A")
    again = EdcCurve.from_dict(curve.to_dict())
    assert again.points == curve.points
    assert again.algorithm == "A" and again.threshold == 0.3


# -- random baseline --------------------------------------------------------------

def test_baseline_deterministic_two_points():
    comps = mated([0.1, 0.9])
    a = random_baseline(comps, 0.5, 1, seed=3)
    b = random_baseline(comps, 0.5, 1, seed=3)
    assert len(a.discard_fractions) == 2
    assert np.array_equal(a.errors, b.errors)
    assert a.errors[0] == 0.5


def test_baseline_two_comparisons_expectation():
    # exact: either order leaves the error or the non-error comparison -> mean 0.5
    orders = [[0.9], [0.1]]
    exact = sum(sum(c < 0.5 for c in left) / len(left) for left in orders) / len(orders)
    assert exact == 0.5
    curve = random_baseline(mated([0.1, 0.9]), 0.5, 4000, seed=1)
    assert curve.errors[1] == pytest.approx(exact, abs=0.03)


def test_baseline_rejects_zero_trials():
    with pytest.raises(EdcError):
        random_baseline(mated([0.1, 0.9]), 0.5, 0, seed=1)
