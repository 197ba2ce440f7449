"""Alternatives to the plain EDC: CS-DC, d'-DC, FC-EDC, correlations and DET-versus-discard.

All discard-based curves share the EDC step rule: every step removes the whole
group of comparisons with the next lowest pairwise QS, and discard fractions are
relative to the total number of comparisons that enter the curve.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .edc import EdcError, discard_steps, error_flags
from .score_data import ComparisonSet, Kind

UTILITY_LABEL = "d'-style utility"


class ValueKind(str, Enum):
    MEAN_CS = "mean_cs"
    D_PRIME = "d_prime"
    FNMR_AT_FIXED_FMR = "fnmr_at_fixed_fmr"


class SingularStepError(ValueError):
    def __init__(self, discard_fraction: float):
        self.discard_fraction = discard_fraction
        super().__init__(f"zero combined variance at discard fraction {discard_fraction!r}")


class CorrelationError(ValueError):
    pass


class SkippedThresholdWarning(UserWarning):
    pass


@dataclass
class ScalarCurve:
    discard_fractions: np.ndarray
    values: np.ndarray
    value_kind: ValueKind
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def errors(self) -> np.ndarray:
        # lets pauc() and friends consume scalar curves unchanged
        return self.values

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.discard_fractions.tolist(), self.values.tolist()))

    def to_dict(self) -> dict:
        d = {
            "value_kind": self.value_kind.value,
            "points": [[float(x), float(y)] for x, y in self.points],
        }
        for k, v in self.extra.items():
            d[k] = [float(x) for x in v]
        return d


@dataclass
class DetCurve:
    qs_threshold: float
    thresholds: np.ndarray
    fmr: np.ndarray
    fnmr: np.ndarray
    n_mated: int = 0
    n_nonmated: int = 0

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fmr.tolist(), self.fnmr.tolist()))

    def to_dict(self) -> dict:
        return {
            "qs_threshold": float(self.qs_threshold),
            "n_mated": self.n_mated,
            "n_nonmated": self.n_nonmated,
            "decision_thresholds": [float(t) for t in self.thresholds],
            "points": [[float(x), float(y)] for x, y in self.points],
        }


def _scores(x) -> np.ndarray:
    if isinstance(x, ComparisonSet):
        return x.scores()
    return np.asarray(x, dtype=float)


def _single_kind(comparisons) -> Kind | None:
    if not isinstance(comparisons, ComparisonSet):
        return None
    kinds = {c.kind for c in comparisons}
    if len(kinds) > 1:
        raise EdcError("comparison set mixes mated and non-mated comparisons")
    return kinds.pop() if kinds else None


def _emitted(level_ends: np.ndarray, n: int) -> np.ndarray:
    return np.concatenate([[0], level_ends[level_ends < n]]).astype(np.int64)


def cs_dc(comparisons, pairwise_qs: Sequence[float]) -> ScalarCurve:
    """Mean CS of the remaining comparisons per discard step (one kind only)."""
    _single_kind(comparisons)
    cs = _scores(comparisons)
    n = cs.size
    if n == 0:
        raise EdcError("empty comparison set")
    steps = discard_steps(pairwise_qs)
    c = cs[steps.order]
    # suffix sums avoid cancellation from total - prefix
    suffix = np.concatenate([np.cumsum(c[::-1])[::-1], [0.0]])
    d = _emitted(steps.level_ends, n)
    return ScalarCurve(d / n, suffix[d] / (n - d), ValueKind.MEAN_CS)


def dprime(mated: np.ndarray, nonmated: np.ndarray) -> float:
    """d' on similarity scores with population standard deviations."""
    mated = np.asarray(mated, dtype=float)
    nonmated = np.asarray(nonmated, dtype=float)
    denom = np.sqrt(mated.var() + nonmated.var())
    if denom == 0:
        raise SingularStepError(0.0)
    return float((mated.mean() - nonmated.mean()) / denom)


def _joint(mated_qs, nonmated_qs):
    qm = np.asarray(mated_qs, dtype=float)
    qn = np.asarray(nonmated_qs, dtype=float)
    q = np.concatenate([qm, qn])
    is_mated = np.concatenate([np.ones(qm.size, bool), np.zeros(qn.size, bool)])
    return q, is_mated


def dprime_dc(mated, nonmated, mated_qs: Sequence[float], nonmated_qs: Sequence[float],
              on_singular: str = "raise") -> ScalarCurve:
    """d' of the remaining comparisons as both kinds are discarded jointly.

    The curve ends once either kind runs out. ``on_singular='stop'`` ends the
    curve at a zero-variance step instead of raising.
    """
    sm, sn = _scores(mated), _scores(nonmated)
    if sm.size == 0 or sn.size == 0:
        raise EdcError("d'-DC needs both mated and non-mated comparisons")
    if len(mated_qs) != sm.size or len(nonmated_qs) != sn.size:
        raise EdcError("pairwise QSs not aligned with comparisons")
    q, is_mated = _joint(mated_qs, nonmated_qs)
    cs = np.concatenate([sm - sm.mean(), sn - sn.mean()])
    n = q.size
    steps = discard_steps(q)
    c, m = cs[steps.order], is_mated[steps.order]

    def suffix(v):
        return np.concatenate([np.cumsum(v[::-1])[::-1], [0.0]])

    def suffix_spread(v, mask):
        # max - min of the remaining values of one kind; 0 means exactly constant
        hi = np.maximum.accumulate(np.where(mask, v, -np.inf)[::-1])[::-1]
        lo = np.minimum.accumulate(np.where(mask, v, np.inf)[::-1])[::-1]
        return np.concatenate([hi - lo, [np.nan]])

    raw = np.concatenate([sm, sn])[steps.order]
    flat_m, flat_n = suffix_spread(raw, m) == 0, suffix_spread(raw, ~m) == 0
    cnt_m, cnt_n = suffix(m.astype(float)), suffix((~m).astype(float))
    s1_m, s1_n = suffix(np.where(m, c, 0.0)), suffix(np.where(m, 0.0, c))
    s2_m, s2_n = suffix(np.where(m, c * c, 0.0)), suffix(np.where(m, 0.0, c * c))

    xs, ys = [], []
    for d in _emitted(steps.level_ends, n):
        km, kn = cnt_m[d], cnt_n[d]
        if km == 0 or kn == 0:
            break
        mu_m, mu_n = s1_m[d] / km, s1_n[d] / kn
        var_m = 0.0 if flat_m[d] else max(s2_m[d] / km - mu_m * mu_m, 0.0)
        var_n = 0.0 if flat_n[d] else max(s2_n[d] / kn - mu_n * mu_n, 0.0)
        if var_m + var_n <= 0.0:
            if on_singular == "stop":
                break
            raise SingularStepError(d / n)
        # centring offsets differ per kind, so add them back for the mean difference
        diff = (mu_m + sm.mean()) - (mu_n + sn.mean())
        xs.append(d / n)
        ys.append(diff / np.sqrt(var_m + var_n))
    return ScalarCurve(np.array(xs), np.array(ys), ValueKind.D_PRIME)


class _Fenwick:
    """Counts over value ranks with prefix sums and order-statistic search."""

    def __init__(self, size: int):
        self.n = size
        self.tree = [0] * (size + 1)
        self.top = 1 << max(size.bit_length() - 1, 0)

    def add(self, i: int, delta: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Count of items with rank ``<= i``."""
        i += 1
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & -i
        return total

    def kth(self, k: int) -> int:
        """Rank of the ``k``-th smallest item (1-based ``k``)."""
        pos = 0
        step = self.top
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] < k:
                pos = nxt
                k -= self.tree[nxt]
            step >>= 1
        return pos


def _max_count(target: float, m: int) -> int:
    """Largest ``c`` in ``[0, m]`` with ``c / m <= target``."""
    c = min(m, int(np.floor(target * m)))
    while c < m and (c + 1) / m <= target:
        c += 1
    while c > 0 and c / m > target:
        c -= 1
    return c


def fc_edc(mated, nonmated, mated_qs: Sequence[float], nonmated_qs: Sequence[float],
           fixed_fmr_target: float) -> ScalarCurve:
    """FNMR of the remaining mated comparisons with the threshold re-fixed per step.

    At each step the threshold is the smallest remaining distinct non-mated
    score whose FMR (``cs >= t``) is within the target, or just above the
    remaining maximum when none qualifies.
    """
    if not 0.0 <= fixed_fmr_target <= 1.0:
        raise EdcError(f"FMR target {fixed_fmr_target} outside [0, 1]")
    sm, sn = _scores(mated), _scores(nonmated)
    if sm.size == 0 or sn.size == 0:
        raise EdcError("FC-EDC needs both mated and non-mated comparisons")
    if len(mated_qs) != sm.size or len(nonmated_qs) != sn.size:
        raise EdcError("pairwise QSs not aligned with comparisons")
    q, is_mated = _joint(mated_qs, nonmated_qs)
    cs = np.concatenate([sm, sn])
    values = np.unique(cs)
    ranks = np.searchsorted(values, cs).tolist()
    n = q.size
    bit_m, bit_n = _Fenwick(values.size), _Fenwick(values.size)
    for r, mt in zip(ranks, is_mated.tolist()):
        (bit_m if mt else bit_n).add(r, 1)
    left_m, left_n = int(sm.size), int(sn.size)

    steps = discard_steps(q)
    order = steps.order.tolist()
    emitted = _emitted(steps.level_ends, n).tolist()
    xs, ys, thresholds, fmrs = [], [], [], []
    done = 0
    for d in emitted:
        for idx in order[done:d]:
            if is_mated[idx]:
                bit_m.add(ranks[idx], -1)
                left_m -= 1
            else:
                bit_n.add(ranks[idx], -1)
                left_n -= 1
        done = d
        if left_n == 0 or left_m == 0:
            break
        allowed = _max_count(fixed_fmr_target, left_n)
        need = left_n - allowed  # non-mated scores that must fall below the threshold
        if need == 0:
            r = bit_n.kth(1)
            threshold, below_m, count_ge = float(values[r]), bit_m.prefix(r - 1), left_n
        else:
            v = bit_n.kth(need)
            le = bit_n.prefix(v)
            if le == left_n:
                threshold = float(np.nextafter(values[v], np.inf))
                below_m, count_ge = bit_m.prefix(v), 0
            else:
                r = bit_n.kth(le + 1)
                threshold, below_m, count_ge = float(values[r]), bit_m.prefix(r - 1), left_n - le
        xs.append(d / n)
        ys.append(below_m / left_m)
        thresholds.append(threshold)
        fmrs.append(count_ge / left_n)
    return ScalarCurve(np.array(xs), np.array(ys), ValueKind.FNMR_AT_FIXED_FMR,
                       {"thresholds": np.array(thresholds), "achieved_fmr": np.array(fmrs)})


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = np.dot(dx, dx), np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        raise CorrelationError("correlation undefined for zero-variance input")
    r = np.dot(dx, dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def qs_cs_correlation(x: Sequence[float], y: Sequence[float], method: str = "pearson") -> float:
    """Pearson, or Spearman as Pearson on average ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise CorrelationError("inputs differ in length")
    if x.size < 2:
        raise CorrelationError("need at least two values")
    if method == "spearman":
        x, y = rankdata(x), rankdata(y)
    elif method != "pearson":
        raise ValueError(f"unknown correlation method {method!r}")
    return _pearson(x, y)


def error_proxy_correlation(pairwise_qs: Sequence[float], comparisons, threshold: float,
                            kind: Kind | str | None = None) -> float:
    """Pearson between pairwise QSs and 1 (non-error) / 0 (error) proxies."""
    found = _single_kind(comparisons)
    kind = Kind(kind) if kind is not None else (found or Kind.MATED)
    proxy = (~error_flags(_scores(comparisons), threshold, kind)).astype(float)
    return qs_cs_correlation(pairwise_qs, proxy, "pearson")


@dataclass
class UtilityScores:
    scores: dict[str, float]
    omitted: dict[str, str]
    label: str = UTILITY_LABEL


def sample_utility_scores(comparisons: ComparisonSet) -> UtilityScores:
    """Per-sample d'-style utility over the comparisons each sample takes part in.

    A stand-in for a published per-sample utility definition that is not
    reproduced here.
    """
    mated, nonmated = defaultdict(list), defaultdict(list)
    for c in comparisons:
        bucket = mated if c.kind is Kind.MATED else nonmated
        bucket[c.sample_a].append(c.comparison_score)
        bucket[c.sample_b].append(c.comparison_score)
    scores, omitted = {}, {}
    for sid in sorted(set(mated) | set(nonmated)):
        if not mated.get(sid):
            omitted[sid] = "no mated comparisons"
            continue
        if not nonmated.get(sid):
            omitted[sid] = "no non-mated comparisons"
            continue
        try:
            scores[sid] = dprime(mated[sid], nonmated[sid])
        except SingularStepError:
            omitted[sid] = "zero combined variance"
    return UtilityScores(scores, omitted)


def det_curve(mated_scores, nonmated_scores, qs_threshold: float = float("-inf")) -> DetCurve:
    """(FMR, FNMR) at every distinct CS used as the decision threshold."""
    m = np.sort(_scores(mated_scores))
    nm = np.sort(_scores(nonmated_scores))
    if m.size == 0 or nm.size == 0:
        raise EdcError("DET needs both mated and non-mated comparisons")
    t = np.unique(np.concatenate([m, nm]))
    fmr = (nm.size - np.searchsorted(nm, t, side="left")) / nm.size
    fnmr = np.searchsorted(m, t, side="left") / m.size
    return DetCurve(qs_threshold, t, fmr, fnmr, int(m.size), int(nm.size))


def det_vs_discard(mated, nonmated, mated_qs: Sequence[float], nonmated_qs: Sequence[float],
                   qs_thresholds: Sequence[float]) -> list[DetCurve]:
    """One DET curve per QS threshold, keeping comparisons with pairwise QS >= threshold."""
    sm, sn = _scores(mated), _scores(nonmated)
    qm = np.asarray(mated_qs, dtype=float)
    qn = np.asarray(nonmated_qs, dtype=float)
    out = []
    for t in qs_thresholds:
        keep_m, keep_n = sm[qm >= t], sn[qn >= t]
        if keep_m.size == 0 or keep_n.size == 0:
            warnings.warn(f"QS threshold {t!r} leaves no "
                          f"{'mated' if keep_m.size == 0 else 'non-mated'} comparisons; skipped",
                          SkippedThresholdWarning, stacklevel=2)
            continue
        out.append(det_curve(keep_m, keep_n, float(t)))
    return out
