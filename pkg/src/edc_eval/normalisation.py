"""Quality-score normalisation to the ``[0, 100]`` integer range.

Both calibration functions produce 100 boundaries; a score is mapped to the
number of boundaries that are ``<=`` the score (left-closed bins), so the
result is always an integer in ``[0, 100]`` and out-of-range scores clamp.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .edc import EdcCurve, step_values
from .pauc import PaucConfig, pauc
from .score_data import QualityScoreTable

N_BOUNDARIES = 100
N_BINS = N_BOUNDARIES + 1

BIN_CONVENTION = "bin = count of boundaries <= score; minmax splits [min, max] into 101 equal intervals"


class CalibrationFunction(str, Enum):
    MINMAX = "minmax"
    PROPORTIONAL = "proportional"


class CalibrationError(ValueError):
    pass


class DivergenceError(ValueError):
    pass


@dataclass(frozen=True)
class BinBoundaries:
    boundaries: np.ndarray
    calibration_function: CalibrationFunction

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float)
        if b.shape != (N_BOUNDARIES,):
            raise CalibrationError(f"expected {N_BOUNDARIES} boundaries, got {b.shape}")
        if np.any(np.diff(b) < 0):
            raise CalibrationError("boundaries must be non-decreasing")
        object.__setattr__(self, "boundaries", b)

    def apply(self, q):
        return apply_normalisation(q, self)

    def to_dict(self) -> dict:
        return {
            "calibration_function": self.calibration_function.value,
            "bin_convention": BIN_CONVENTION,
            "boundaries": [float(x) for x in self.boundaries],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BinBoundaries":
        return cls(np.asarray(d["boundaries"], dtype=float),
                   CalibrationFunction(d["calibration_function"]))


def calibrate_minmax(calibration_qs: Iterable[float]) -> BinBoundaries:
    q = np.asarray(list(calibration_qs), dtype=float)
    if q.size < 2 or q.min() == q.max():
        raise CalibrationError("MinMax calibration needs at least two distinct values")
    lo, hi = q.min(), q.max()
    i = np.arange(1, N_BOUNDARIES + 1)
    return BinBoundaries(lo + i * (hi - lo) / N_BINS, CalibrationFunction.MINMAX)


def calibrate_proportional(calibration_qs: Iterable[float]) -> BinBoundaries:
    q = np.asarray(list(calibration_qs), dtype=float)
    if q.size == 0:
        raise CalibrationError("Proportional calibration needs at least one value")
    probs = np.arange(1, N_BOUNDARIES + 1) / N_BINS
    b = np.quantile(q, probs, method="linear")
    # quantile interpolation can wobble by an ulp on flat stretches
    b = np.maximum.accumulate(b)
    return BinBoundaries(b, CalibrationFunction.PROPORTIONAL)


def calibrate(calibration_qs: Iterable[float], function: CalibrationFunction | str) -> BinBoundaries:
    function = CalibrationFunction(function)
    if function is CalibrationFunction.MINMAX:
        return calibrate_minmax(calibration_qs)
    return calibrate_proportional(calibration_qs)


def apply_normalisation(q, b: BinBoundaries):
    """Map raw score(s) to integer bins in ``[0, 100]``."""
    idx = np.searchsorted(b.boundaries, q, side="right")
    if np.ndim(idx) == 0:
        return int(idx)
    return idx.astype(np.int64)


def normalise_table(table: QualityScoreTable,
                    calibration: dict[str, BinBoundaries]) -> QualityScoreTable:
    out = QualityScoreTable()
    for (sid, alg), q in table.scores.items():
        if alg not in calibration:
            raise CalibrationError(f"no calibration for algorithm {alg!r}")
        out.scores[(sid, alg)] = float(apply_normalisation(q, calibration[alg]))
    return out


def combined_calibration(same: Sequence[float], other: Sequence[float]) -> np.ndarray:
    """Multiset union of same-dataset and other-dataset calibration scores."""
    return np.concatenate([np.asarray(same, dtype=float), np.asarray(other, dtype=float)])


def area_between(a: EdcCurve, b: EdcCurve, limit: float) -> float:
    """Integral of ``|a(x) - b(x)|`` over ``[0, limit]`` for two step curves."""
    ax, ay = np.asarray(a.discard_fractions), np.asarray(a.errors)
    bx, by = np.asarray(b.discard_fractions), np.asarray(b.errors)
    xs = np.union1d(ax, bx)
    xs = xs[xs < limit]
    if xs.size == 0 or xs[0] != 0.0:
        xs = np.union1d(xs, [0.0])
    widths = np.diff(np.append(xs, limit))
    diff = np.abs(step_values(ax, ay, xs) - step_values(bx, by, xs))
    return float(np.dot(widths, diff))


def curve_divergence(raw_curve: EdcCurve, normalised_curve: EdcCurve,
                     config: PaucConfig | None = None) -> float:
    """Area between the curves as a percentage of the raw curve's pAUC."""
    config = config or PaucConfig()
    base = pauc(raw_curve, PaucConfig(config.discard_limit))
    if base == 0:
        raise DivergenceError("raw curve pAUC is zero; divergence undefined")
    return 100.0 * area_between(raw_curve, normalised_curve, config.discard_limit) / base
