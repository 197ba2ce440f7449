"""Synthetic utility scores, mated comparison scores and noisy quality scores.

Each random stream is a Philox generator keyed by ``(seed, stream)``, where the
stream is the utility draw or one synthetic QA algorithm. Values are consumed
in sample order (subject-major), so the value for a given sample depends only
on the seed, the stream and the sample's position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .score_data import ComparisonSet, Kind, QualityScoreTable

NOISE_MODEL = "independent uniform(-scale, +scale) offset per sample and algorithm"

_UTILITY_STREAM = 0
_QS_STREAM = 1


class SyntheticSpecError(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticSpec:
    n_subjects: int
    samples_per_subject: int
    offset_scales: tuple[float, ...]
    seed: int = 0
    algorithm_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "offset_scales", tuple(float(s) for s in self.offset_scales))
        if self.n_subjects < 1:
            raise SyntheticSpecError("n_subjects must be >= 1")
        if self.samples_per_subject < 2:
            raise SyntheticSpecError("samples_per_subject must be >= 2 to form mated pairs")
        if not self.offset_scales:
            raise SyntheticSpecError("at least one offset scale is required")
        if any(s < 0 or not np.isfinite(s) for s in self.offset_scales):
            raise SyntheticSpecError("offset scales must be finite and non-negative")
        if self.algorithm_names is not None and len(self.algorithm_names) != len(self.offset_scales):
            raise SyntheticSpecError("one algorithm name per offset scale")

    @property
    def names(self) -> tuple[str, ...]:
        if self.algorithm_names is not None:
            return self.algorithm_names
        return tuple(f"SQA{i + 1}" for i in range(len(self.offset_scales)))

    def to_dict(self) -> dict:
        return {
            "n_subjects": self.n_subjects,
            "samples_per_subject": self.samples_per_subject,
            "offset_scales": list(self.offset_scales),
            "algorithms": list(self.names),
            "seed": self.seed,
            "noise_model": NOISE_MODEL,
        }


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))


@dataclass
class SyntheticDataset:
    spec: SyntheticSpec
    sample_ids: list[str]
    utility: np.ndarray
    pair_index: np.ndarray  # (n_pairs, 2) indices into sample_ids
    mated_scores: np.ndarray
    quality: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_pairs(self) -> int:
        return int(self.pair_index.shape[0])

    def comparisons(self) -> ComparisonSet:
        ids = self.sample_ids
        return ComparisonSet.from_arrays(
            [ids[i] for i in self.pair_index[:, 0]],
            [ids[j] for j in self.pair_index[:, 1]],
            self.mated_scores, Kind.MATED)

    def quality_table(self) -> QualityScoreTable:
        table = QualityScoreTable()
        for alg, qs in self.quality.items():
            for sid, q in zip(self.sample_ids, qs.tolist()):
                table.scores[(sid, alg)] = q
        return table

    def pairwise_qs(self, algorithm: str) -> np.ndarray:
        qs = self.quality[algorithm]
        return np.minimum(qs[self.pair_index[:, 0]], qs[self.pair_index[:, 1]])

    def utilities(self) -> dict[str, float]:
        return dict(zip(self.sample_ids, self.utility.tolist()))


def within_subject_pairs(n_subjects: int, samples_per_subject: int) -> np.ndarray:
    local = np.array(list(combinations(range(samples_per_subject), 2)), dtype=np.int64)
    base = (np.arange(n_subjects, dtype=np.int64) * samples_per_subject)[:, None, None]
    return (base + local[None, :, :]).reshape(-1, 2)


def generate(spec: SyntheticSpec) -> SyntheticDataset:
    n = spec.n_subjects * spec.samples_per_subject
    width = len(str(spec.n_subjects - 1))
    sample_ids = [f"subject{s:0{width}d}_{k}"
                  for s in range(spec.n_subjects) for k in range(spec.samples_per_subject)]
    utility = _stream(spec.seed, _UTILITY_STREAM).uniform(-1.0, 1.0, size=n)
    pairs = within_subject_pairs(spec.n_subjects, spec.samples_per_subject)
    mated = np.minimum(utility[pairs[:, 0]], utility[pairs[:, 1]])
    quality = {}
    for k, (name, scale) in enumerate(zip(spec.names, spec.offset_scales)):
        offset = _stream(spec.seed, _QS_STREAM, k).uniform(-1.0, 1.0, size=n) * scale
        quality[name] = utility + offset
    return SyntheticDataset(spec, sample_ids, utility, pairs, mated, quality)


def expected_placements(offset_scales: Sequence[float],
                        names: Sequence[str] | None = None) -> dict[str, float]:
    """Min-max normalised offset scales: the expected relative placement."""
    s = np.asarray(offset_scales, dtype=float)
    if s.size < 2 or s.min() == s.max():
        raise SyntheticSpecError("need at least two distinct offset scales")
    names = list(names) if names is not None else [f"SQA{i + 1}" for i in range(s.size)]
    return {n: float(v) for n, v in zip(names, (s - s.min()) / (s.max() - s.min()))}
