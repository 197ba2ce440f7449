"""Ranking stability over grids of starting errors and pAUC discard limits."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .edc import ErrorMode, EdcCurve, edc_from_flags, threshold_for_starting_error
from .pauc import Interpolation, PaucConfig, competition_ranks, pauc, relative_ranking

PLACEMENT_SCALE = "scaled placement = 1 + (n - 1) * p, p in [0, 1]"
DIVERGENCE_SCALE = "unscaled sum over algorithms of |p_i - reference_i|"


class GridConfigError(ValueError):
    pass


def value_range(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive ``lo..hi`` by ``step`` from integer step indices."""
    if step <= 0:
        raise GridConfigError(f"step must be positive, got {step}")
    if hi < lo:
        raise GridConfigError(f"range end {hi} below start {lo}")
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _values(spec) -> list[float]:
    if isinstance(spec, Mapping):
        try:
            return value_range(float(spec["lo"]), float(spec["hi"]), float(spec["step"]))
        except KeyError as exc:
            raise GridConfigError(f"range needs lo, hi and step (missing {exc.args[0]})") from None
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    raise GridConfigError(f"expected a list or {{lo, hi, step}} table, got {spec!r}")


@dataclass(frozen=True)
class GridConfig:
    starting_errors: tuple[float, ...]
    pauc_limits: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "starting_errors", tuple(float(v) for v in self.starting_errors))
        object.__setattr__(self, "pauc_limits", tuple(float(v) for v in self.pauc_limits))
        if not self.starting_errors or not self.pauc_limits:
            raise GridConfigError("grid axes must be non-empty")
        for v in self.starting_errors + self.pauc_limits:
            if not 0.0 < v < 1.0:
                raise GridConfigError(f"grid value {v} outside (0, 1)")

    @classmethod
    def from_ranges(cls, starting_errors, pauc_limits) -> "GridConfig":
        return cls(tuple(_values(starting_errors)), tuple(_values(pauc_limits)))

    @property
    def size(self) -> int:
        return len(self.starting_errors) * len(self.pauc_limits)


def build_grid(config: GridConfig) -> list[tuple[float, float]]:
    return [(e, l) for e in config.starting_errors for l in config.pauc_limits]


@dataclass
class GridCell:
    starting_error_target: float
    starting_error_achieved: float
    threshold: float
    pauc_limit: float
    paucs: dict[str, float]
    placements: dict[str, float]
    discrete: dict[str, int]

    def to_dict(self, divergence: float | None = None) -> dict:
        d = {
            "starting_error_target": self.starting_error_target,
            "starting_error_achieved": self.starting_error_achieved,
            "threshold": self.threshold,
            "pauc_limit": self.pauc_limit,
            "placements": dict(sorted(self.placements.items())),
            "discrete_ranks": dict(sorted(self.discrete.items())),
            "paucs": dict(sorted(self.paucs.items())),
        }
        if divergence is not None:
            d["divergence"] = divergence
        return d


@dataclass
class RankingGrid:
    cells: list[GridCell]
    algorithms: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.algorithms and self.cells:
            self.algorithms = sorted(self.cells[0].placements)
        for c in self.cells:
            if sorted(c.placements) != self.algorithms:
                raise ValueError("every grid cell must rank the same algorithm set")

    def placement_matrix(self) -> np.ndarray:
        """Array of shape ``(cells, algorithms)``."""
        return np.array([[c.placements[a] for a in self.algorithms] for c in self.cells], dtype=float)

    @classmethod
    def from_placements(cls, rows: Sequence[Mapping[str, float]]) -> "RankingGrid":
        cells = [GridCell(0.0, 0.0, 0.0, 0.0, {}, dict(r), competition_ranks(r)) for r in rows]
        return cls(cells)


def ranking_divergence_mean(grid: RankingGrid) -> np.ndarray:
    """Per-cell sum of absolute deviations from each algorithm's mean placement."""
    p = grid.placement_matrix()
    lo = p.min(axis=0)
    mean = lo + (p - lo).mean(axis=0)  # exact for constant columns
    return np.abs(p - mean).sum(axis=1)


def ranking_divergence_expected(grid: RankingGrid, expected: Mapping[str, float]) -> np.ndarray:
    missing = [a for a in grid.algorithms if a not in expected]
    if missing:
        raise KeyError(f"no expected placement for {', '.join(missing)}")
    e = np.array([expected[a] for a in grid.algorithms], dtype=float)
    if np.any((e < 0) | (e > 1)):
        raise ValueError("expected placements must lie in [0, 1]")
    return np.abs(grid.placement_matrix() - e).sum(axis=1)


@dataclass
class PlacementStats:
    span: float
    best: float
    worst: float
    median: float
    mean: float
    std_dev: float

    def to_dict(self) -> dict:
        return {"span": self.span, "best": self.best, "worst": self.worst,
                "median": self.median, "mean": self.mean, "std_dev": self.std_dev}


def placement_stats(grid: RankingGrid) -> dict[str, PlacementStats]:
    n = len(grid.algorithms)
    scaled = 1.0 + (n - 1) * grid.placement_matrix()
    out = {}
    for j, alg in enumerate(grid.algorithms):
        col = scaled[:, j]
        best, worst = float(col.min()), float(col.max())
        out[alg] = PlacementStats(
            span=worst - best, best=best, worst=worst,
            median=float(np.median(col)), mean=float(col.mean()), std_dev=float(col.std()),
        )
    return out


def worker_count() -> int:
    raw = os.environ.get("EDC_EVAL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def evaluate_grid(mated_scores: np.ndarray, pairwise: Mapping[str, np.ndarray], config: GridConfig,
                  interpolation: Interpolation | str = Interpolation.STEPWISE,
                  error_mode: ErrorMode | str = ErrorMode.WITHOUT_DISCARDED) -> RankingGrid:
    """Relative rankings for every grid cell (starting error outer, limit inner).

    ``pairwise`` maps algorithm name to pairwise QSs aligned with ``mated_scores``.
    """
    scores = np.asarray(mated_scores, dtype=float)
    algorithms = sorted(pairwise)

    def per_error(target: float) -> list[GridCell]:
        thr = threshold_for_starting_error(scores, target)
        flags = scores < thr.threshold
        curves = {}
        for alg in algorithms:
            x, y = edc_from_flags(flags, pairwise[alg], error_mode)
            curves[alg] = EdcCurve(x, y, thr.achieved_starting_error, thr.threshold,
                                   ErrorMode.parse(error_mode), scores.size, algorithm=alg)
        cells = []
        for limit in config.pauc_limits:
            cfg = PaucConfig(limit, interpolation)
            paucs = {alg: pauc(curves[alg], cfg) for alg in algorithms}
            cells.append(GridCell(target, thr.achieved_starting_error, thr.threshold, limit,
                                  paucs, relative_ranking(paucs), competition_ranks(paucs)))
        return cells

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        chunks = list(pool.map(per_error, config.starting_errors))
    return RankingGrid([c for chunk in chunks for c in chunk], algorithms)


def divergence_by_cell(grid: RankingGrid, expected: Mapping[str, float] | None = None) -> np.ndarray:
    if expected is None:
        return ranking_divergence_mean(grid)
    return ranking_divergence_expected(grid, expected)


def cells_at(grid: RankingGrid, *, limit: float | None = None,
             starting_error: float | None = None) -> list[int]:
    return [i for i, c in enumerate(grid.cells)
            if (limit is None or np.isclose(c.pauc_limit, limit))
            and (starting_error is None or np.isclose(c.starting_error_target, starting_error))]


def mean_divergence_at_limit(grid: RankingGrid, divergence: Iterable[float], limit: float) -> float:
    d = np.asarray(list(divergence), dtype=float)
    return float(d[cells_at(grid, limit=limit)].mean())
