"""Error-versus-discard step curves.

A false non-match is ``cs < threshold`` and a false match is
``cs >= threshold``; both rules are used everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .score_data import ComparisonSet, Kind


class ErrorMode(str, Enum):
    WITHOUT_DISCARDED = "without_discarded"
    WITH_DISCARDED = "with_discarded"

    @classmethod
    def parse(cls, value: "ErrorMode | str") -> "ErrorMode":
        if isinstance(value, cls):
            return value
        aliases = {"without": cls.WITHOUT_DISCARDED, "with": cls.WITH_DISCARDED}
        return aliases.get(value) or cls(value)


class EdcError(ValueError):
    pass


@dataclass
class EdcCurve:
    discard_fractions: np.ndarray
    errors: np.ndarray
    starting_error: float
    threshold: float
    error_mode: ErrorMode = ErrorMode.WITHOUT_DISCARDED
    total_comparisons: int = 0
    kind: Kind = Kind.MATED
    algorithm: str | None = None

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.discard_fractions.tolist(), self.errors.tolist()))

    def __len__(self) -> int:
        return len(self.discard_fractions)

    def value_at(self, x: float) -> float:
        return curve_value_at(self, x)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "kind": self.kind.value,
            "threshold": float(self.threshold),
            "starting_error": float(self.starting_error),
            "error_mode": self.error_mode.value,
            "total_comparisons": int(self.total_comparisons),
            "points": [[float(x), float(y)] for x, y in self.points],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EdcCurve":
        pts = np.asarray(d["points"], dtype=float).reshape(-1, 2)
        return cls(
            discard_fractions=pts[:, 0],
            errors=pts[:, 1],
            starting_error=float(d["starting_error"]),
            threshold=float(d["threshold"]),
            error_mode=ErrorMode(d["error_mode"]),
            total_comparisons=int(d["total_comparisons"]),
            kind=Kind(d.get("kind", "mated")),
            algorithm=d.get("algorithm"),
        )


@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    achieved_starting_error: float


def _above(x: float) -> float:
    return float(np.nextafter(x, np.inf))


def threshold_for_starting_error(mated_scores: Sequence[float], target: float) -> ThresholdResult:
    """Pick the CS threshold giving the largest achievable FNMR not above ``target``.

    Achievable FNMRs are the fractions of scores strictly below each distinct
    score, plus 1.0 (threshold just above the maximum).
    """
    s = np.sort(np.asarray(mated_scores, dtype=float))
    n = s.size
    if n == 0:
        raise EdcError("no mated scores")
    if not 0.0 <= target <= 1.0:
        raise EdcError(f"target starting error {target} outside [0, 1]")
    if target >= 1.0:
        return ThresholdResult(_above(s[-1]), 1.0)
    distinct = np.unique(s)
    below = np.searchsorted(s, distinct, side="left")
    fnmr = below / n
    j = int(np.searchsorted(fnmr, target, side="right")) - 1
    return ThresholdResult(float(distinct[j]), float(fnmr[j]))


def threshold_for_fmr(nonmated_scores: Sequence[float], target: float) -> ThresholdResult:
    """Smallest distinct-score threshold whose FMR (``cs >= t``) is at most ``target``.

    Falls back to just above the maximum (FMR 0) when no score qualifies.
    ``achieved_starting_error`` holds the achieved FMR.
    """
    s = np.sort(np.asarray(nonmated_scores, dtype=float))
    n = s.size
    if n == 0:
        raise EdcError("no non-mated scores")
    if not 0.0 <= target <= 1.0:
        raise EdcError(f"target FMR {target} outside [0, 1]")
    distinct = np.unique(s)
    fmr = (n - np.searchsorted(s, distinct, side="left")) / n
    ok = np.nonzero(fmr <= target)[0]
    if ok.size == 0:
        return ThresholdResult(_above(s[-1]), 0.0)
    return ThresholdResult(float(distinct[ok[0]]), float(fmr[ok[0]]))


def error_flags(scores: np.ndarray, threshold: float, kind: Kind | str) -> np.ndarray:
    if Kind(kind) is Kind.MATED:
        return scores < threshold
    return scores >= threshold


@dataclass
class DiscardSteps:
    """Comparisons grouped by pairwise QS level, lowest level first."""

    order: np.ndarray
    level_ends: np.ndarray = field(repr=False)

    @property
    def total(self) -> int:
        return int(self.order.size)


def discard_steps(pairwise_qs: Sequence[float]) -> DiscardSteps:
    q = np.asarray(pairwise_qs, dtype=float)
    order = np.argsort(q, kind="stable")
    qs = q[order]
    if qs.size:
        boundary = np.nonzero(qs[1:] != qs[:-1])[0] + 1
        ends = np.append(boundary, qs.size)
    else:
        ends = np.zeros(0, dtype=int)
    return DiscardSteps(order=order, level_ends=ends.astype(np.int64))


def edc_from_flags(flags: np.ndarray, pairwise_qs: Sequence[float],
                   error_mode: ErrorMode | str = ErrorMode.WITHOUT_DISCARDED
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Discard fractions and errors for boolean per-comparison error flags."""
    mode = ErrorMode.parse(error_mode)
    flags = np.asarray(flags, dtype=bool)
    n = flags.size
    steps = discard_steps(pairwise_qs)
    errs_sorted = flags[steps.order].astype(np.int64)
    cum_err = np.concatenate([[0], np.cumsum(errs_sorted)])
    # discarded counts at each emitted point: 0 plus every level end short of n
    discarded = np.concatenate([[0], steps.level_ends[steps.level_ends < n]])
    remaining_err = cum_err[-1] - cum_err[discarded]
    if mode is ErrorMode.WITHOUT_DISCARDED:
        err = remaining_err / (n - discarded)
    else:
        err = remaining_err / n
    return discarded / n, err.astype(float)


def compute_edc(comparisons: ComparisonSet, pairwise_qs: Sequence[float], threshold: float,
                error_mode: ErrorMode | str = ErrorMode.WITHOUT_DISCARDED,
                algorithm: str | None = None) -> EdcCurve:
    """FNM-EDC (mated input) or FM-EDC (non-mated input) step curve."""
    if len(comparisons) == 0:
        raise EdcError("empty comparison set")
    kinds = {c.kind for c in comparisons}
    if len(kinds) != 1:
        raise EdcError("comparison set mixes mated and non-mated comparisons")
    kind = kinds.pop()
    q = np.asarray(pairwise_qs, dtype=float)
    if q.size != len(comparisons):
        raise EdcError(f"{q.size} pairwise QSs for {len(comparisons)} comparisons")
    flags = error_flags(comparisons.scores(), threshold, kind)
    mode = ErrorMode.parse(error_mode)
    x, y = edc_from_flags(flags, q, mode)
    return EdcCurve(
        discard_fractions=x,
        errors=y,
        starting_error=float(flags.mean()),
        threshold=float(threshold),
        error_mode=mode,
        total_comparisons=len(comparisons),
        kind=kind,
        algorithm=algorithm,
    )


def step_values(xs: np.ndarray, ys: np.ndarray, at: np.ndarray | float) -> np.ndarray:
    """Right-constant step evaluation of points ``(xs, ys)``."""
    idx = np.searchsorted(xs, at, side="right") - 1
    return ys[np.clip(idx, 0, None)]


def curve_value_at(curve: EdcCurve, x: float) -> float:
    if not 0.0 <= x < 1.0:
        raise EdcError(f"discard fraction {x} outside [0, 1)")
    return float(step_values(curve.discard_fractions, curve.errors, x))


def theoretical_best_error(starting_error: float, x: float) -> float:
    return max(0.0, starting_error - x)


@dataclass
class BaselineCurve:
    discard_fractions: np.ndarray
    errors: np.ndarray
    n_trials: int
    seed: int
    threshold: float
    starting_error: float
    error_mode: ErrorMode

    def to_dict(self) -> dict:
        return {
            "kind": "random_baseline",
            "n_trials": self.n_trials,
            "seed": self.seed,
            "threshold": float(self.threshold),
            "starting_error": float(self.starting_error),
            "error_mode": self.error_mode.value,
            "points": [[float(x), float(y)] for x, y in
                       zip(self.discard_fractions, self.errors)],
        }


def random_baseline(comparisons: ComparisonSet, threshold: float, n_trials: int, seed: int,
                    error_mode: ErrorMode | str = ErrorMode.WITHOUT_DISCARDED) -> BaselineCurve:
    """Mean of ``n_trials`` EDC curves under uniform random pairwise QSs."""
    if n_trials < 1:
        raise EdcError("n_trials must be >= 1")
    mode = ErrorMode.parse(error_mode)
    rng = np.random.default_rng(seed)
    curves = []
    for _ in range(n_trials):
        qs = rng.uniform(0.0, 1.0, size=len(comparisons))
        c = compute_edc(comparisons, qs, threshold, mode)
        curves.append((c.discard_fractions, c.errors))
    grid = np.unique(np.concatenate([x for x, _ in curves]))
    mean = np.mean([step_values(x, y, grid) for x, y in curves], axis=0)
    return BaselineCurve(grid, mean, n_trials, seed, float(threshold), float(mean[0]), mode)
