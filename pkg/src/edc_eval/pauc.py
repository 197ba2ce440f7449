"""Partial area under EDC curves and pAUC-based QA algorithm rankings."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

import numpy as np


class Interpolation(str, Enum):
    STEPWISE = "stepwise"
    LINEAR = "linear"


class Adjustment(str, Enum):
    NONE = "none"
    BEST = "best"
    BEST_UPPER = "best+upper"


class PaucConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PaucConfig:
    discard_limit: float = 0.2
    interpolation: Interpolation = Interpolation.STEPWISE
    discard_lower: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "interpolation", Interpolation(self.interpolation))
        if not 0.0 < self.discard_limit <= 1.0:
            raise PaucConfigError(f"pAUC discard limit {self.discard_limit} outside (0, 1]")
        if self.discard_lower != 0.0:
            raise PaucConfigError("only a pAUC range starting at discard fraction 0 is supported")


def _points(curve) -> tuple[np.ndarray, np.ndarray]:
    return (np.asarray(curve.discard_fractions, dtype=float),
            np.asarray(curve.errors, dtype=float))


def stepwise_area(xs: np.ndarray, ys: np.ndarray, limit: float) -> float:
    """Area under a right-constant step function on ``[0, limit]``.

    The last step extends to ``limit`` if the points end before it.
    """
    if xs.size == 0:
        raise ValueError("empty curve")
    right = np.append(xs[1:], np.inf)
    widths = np.clip(np.minimum(right, limit) - xs, 0.0, None)
    return float(np.dot(widths, ys))


def linear_area(xs: np.ndarray, ys: np.ndarray, limit: float) -> float:
    if xs.size == 0:
        raise ValueError("empty curve")
    keep = xs < limit
    px, py = xs[keep], ys[keep]
    end = float(np.interp(limit, xs, ys))  # constant beyond the last point
    px = np.append(px, limit)
    py = np.append(py, end)
    return float(np.sum(np.diff(px) * (py[1:] + py[:-1]) / 2.0))


def pauc(curve, config: PaucConfig | None = None) -> float:
    """Raw area under ``curve`` over ``[0, config.discard_limit]``."""
    config = config or PaucConfig()
    xs, ys = _points(curve)
    if config.interpolation is Interpolation.STEPWISE:
        return stepwise_area(xs, ys, config.discard_limit)
    return linear_area(xs, ys, config.discard_limit)


def _decimal(x: float) -> Fraction:
    # the shortest repr is the decimal the user wrote, e.g. 0.05 rather than its binary neighbour
    return Fraction(repr(float(x)))


def area_under_theoretical_best(starting_error: float, limit: float) -> float:
    """Integral of ``max(0, starting_error - x)`` over ``[0, limit]``.

    Evaluated exactly on the decimal inputs and rounded once, so that e.g.
    (0.05, 0.2) gives 0.00125 rather than 0.0012500000000000002.
    """
    e, l = _decimal(starting_error), _decimal(limit)
    if l >= e:
        return float(e * e / 2)
    return float(e * l - l * l / 2)


def upper_bound_pauc(starting_error: float, limit: float) -> float:
    """Area under the constant starting-error line (random-QS expectation)."""
    return float(_decimal(starting_error) * _decimal(limit))


def relative_ranking(values: Mapping[str, float]) -> dict[str, float]:
    """Min-max normalised values; all zero when they are all equal."""
    arr = np.array(list(values.values()), dtype=float)
    lo, hi = arr.min(), arr.max()
    if hi == lo:
        return {k: 0.0 for k in values}
    return {k: float((v - lo) / (hi - lo)) for k, v in values.items()}


def competition_ranks(values: Mapping[str, float]) -> dict[str, int]:
    """Ascending ranks starting at 1; ties share the smaller rank (1, 1, 3...)."""
    ordered = sorted(values.values())
    return {k: 1 + ordered.index(v) for k, v in values.items()}


@dataclass
class AlgorithmRanking:
    raw_pauc: float
    adjusted_pauc: float
    relative_rank: float
    discrete_rank: int

    def to_dict(self) -> dict:
        return {
            "raw_pauc": self.raw_pauc,
            "adjusted_pauc": None if np.isnan(self.adjusted_pauc) else self.adjusted_pauc,
            "relative_rank": self.relative_rank,
            "discrete_rank": self.discrete_rank,
        }


@dataclass
class RankingReport:
    entries: dict[str, AlgorithmRanking]
    starting_error: float
    config: PaucConfig
    adjustment: Adjustment = Adjustment.BEST
    achieved_starting_error: float | None = None
    extra: dict = field(default_factory=dict)

    def relative(self) -> dict[str, float]:
        return {k: e.relative_rank for k, e in self.entries.items()}

    def discrete(self) -> dict[str, int]:
        return {k: e.discrete_rank for k, e in self.entries.items()}

    def order(self) -> list[str]:
        """Algorithm names from best to worst (stable for ties)."""
        return sorted(self.entries, key=lambda k: (self.entries[k].discrete_rank, k))

    def to_dict(self) -> dict:
        config = {
            "starting_error": self.starting_error,
            "achieved_starting_error": self.achieved_starting_error,
            "pauc_limit": self.config.discard_limit,
            "discard_lower": self.config.discard_lower,
            "interpolation": self.config.interpolation.value,
            "adjustment": self.adjustment.value,
        }
        if self.config.interpolation is not Interpolation.STEPWISE:
            config["non_default_interpolation"] = True
        config.update(self.extra)
        return {
            "config": config,
            "algorithms": {k: e.to_dict() for k, e in sorted(
                self.entries.items(), key=lambda kv: (kv[1].discrete_rank, kv[0]))},
        }


def adjust_pauc(raw: float, starting_error: float, limit: float,
                adjustment: Adjustment | str = Adjustment.BEST) -> float:
    """Interpretability adjustment of a raw pAUC.

    ``best`` subtracts the theoretical-best area; ``best+upper`` additionally
    scales so that the theoretical best maps to 0 and the random-QS upper
    bound maps to 1.
    """
    adjustment = Adjustment(adjustment)
    if adjustment is Adjustment.NONE:
        return raw
    best = area_under_theoretical_best(starting_error, limit)
    if adjustment is Adjustment.BEST:
        return raw - best
    span = upper_bound_pauc(starting_error, limit) - best
    if span <= 0:
        return float("nan")
    return (raw - best) / span


def rank(paucs: Mapping[str, float], starting_error: float, config: PaucConfig | None = None,
         adjustment: Adjustment | str = Adjustment.BEST,
         achieved_starting_error: float | None = None) -> RankingReport:
    """Rank algorithms by raw pAUC (lower is better)."""
    if not paucs:
        raise ValueError("nothing to rank")
    config = config or PaucConfig()
    adjustment = Adjustment(adjustment)
    relative = relative_ranking(paucs)
    discrete = competition_ranks(paucs)
    entries = {
        name: AlgorithmRanking(
            raw_pauc=float(v),
            adjusted_pauc=float(adjust_pauc(v, starting_error, config.discard_limit, adjustment)),
            relative_rank=relative[name],
            discrete_rank=discrete[name],
        )
        for name, v in paucs.items()
    }
    return RankingReport(entries, float(starting_error), config, adjustment,
                         achieved_starting_error)

