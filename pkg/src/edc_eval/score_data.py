"""Score data model, CSV ingestion and the pairwise quality-score function."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence, TextIO

import numpy as np

QUALITY_HEADER = ("sample_id", "algorithm", "quality_score")
COMPARISON_HEADER = ("sample_id_a", "sample_id_b", "comparison_score", "kind")


class ScoreDataError(ValueError):
    """Base class for ingestion and lookup failures."""


class ParseError(ScoreDataError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DuplicateKeyError(ParseError):
    pass


class SelfComparisonError(ParseError):
    pass


class MissingScoreError(ScoreDataError):
    def __init__(self, sample_id: str, algorithm: str):
        self.sample_id = sample_id
        self.algorithm = algorithm
        super().__init__(f"no quality score for sample {sample_id!r} under algorithm {algorithm!r}")


class Kind(str, Enum):
    MATED = "mated"
    NONMATED = "nonmated"


@dataclass(frozen=True)
class Comparison:
    sample_a: str
    sample_b: str
    comparison_score: float
    kind: Kind


@dataclass
class QualityScoreTable:
    """Long-format quality scores keyed by ``(sample_id, algorithm)``."""

    scores: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def algorithm_names(self) -> list[str]:
        return sorted({alg for _, alg in self.scores})

    def __len__(self) -> int:
        return len(self.scores)

    def get(self, sample_id: str, algorithm: str) -> float:
        try:
            return self.scores[(sample_id, algorithm)]
        except KeyError:
            raise MissingScoreError(sample_id, algorithm) from None

    def for_algorithm(self, algorithm: str) -> dict[str, float]:
        return {s: q for (s, a), q in self.scores.items() if a == algorithm}

    def samples(self) -> list[str]:
        return sorted({s for s, _ in self.scores})

    @classmethod
    def from_mapping(cls, per_algorithm: Mapping[str, Mapping[str, float]]) -> "QualityScoreTable":
        """Build from ``{algorithm: {sample_id: qs}}``."""
        table = cls()
        for alg, scores in per_algorithm.items():
            for sid, q in scores.items():
                q = float(q)
                if not math.isfinite(q):
                    raise ScoreDataError(f"non-finite quality score for ({sid}, {alg})")
                table.scores[(sid, alg)] = q
        return table


@dataclass
class ComparisonSet:
    comparisons: list[Comparison] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.comparisons)

    def __iter__(self):
        return iter(self.comparisons)

    def of_kind(self, kind: Kind | str) -> "ComparisonSet":
        kind = Kind(kind)
        return ComparisonSet([c for c in self.comparisons if c.kind is kind])

    def scores(self) -> np.ndarray:
        return np.array([c.comparison_score for c in self.comparisons], dtype=float)

    def kinds(self) -> list[Kind]:
        return [c.kind for c in self.comparisons]

    def sample_ids(self) -> set[str]:
        ids = set()
        for c in self.comparisons:
            ids.add(c.sample_a)
            ids.add(c.sample_b)
        return ids

    @classmethod
    def from_arrays(cls, a: Sequence[str], b: Sequence[str], scores: Iterable[float],
                    kind: Kind | str) -> "ComparisonSet":
        kind = Kind(kind)
        return cls([Comparison(x, y, float(s), kind) for x, y, s in zip(a, b, scores)])


def _text(source) -> tuple[TextIO, str | None]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8")), None
    if isinstance(source, str):
        return io.StringIO(source), None
    name = getattr(source, "name", None)
    if isinstance(source, io.TextIOBase):
        return source, name
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), name


def _rows(source, header: tuple[str, ...]):
    """Yield ``(line_number, fields)``; a leading header row is optional."""
    stream, name = _text(source)
    reader = csv.reader(stream)
    first = True
    for row in reader:
        line = reader.line_num
        if not row or all(not f.strip() for f in row):
            continue
        row = [f.strip() for f in row]
        if first:
            first = False
            if tuple(row) == header:
                continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", line, name)
        yield line, row, name


def _parse_float(text: str, what: str, line: int, name: str | None) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric {what} {text!r}", line, name) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite {what} {text!r}", line, name)
    return value


def load_quality_scores(source) -> QualityScoreTable:
    """Read a ``sample_id,algorithm,quality_score`` CSV.

    ``source`` may be a path-less text/binary stream, ``bytes`` or ``str`` body.
    """
    table = QualityScoreTable()
    for line, (sid, alg, raw), name in _rows(source, QUALITY_HEADER):
        if not sid:
            raise ParseError("empty sample_id", line, name)
        if not alg:
            raise ParseError("empty algorithm", line, name)
        key = (sid, alg)
        if key in table.scores:
            raise DuplicateKeyError(f"duplicate key ({sid}, {alg})", line, name)
        table.scores[key] = _parse_float(raw, "quality score", line, name)
    return table


def load_comparisons(source) -> ComparisonSet:
    out = ComparisonSet()
    for line, (a, b, raw, kind), name in _rows(source, COMPARISON_HEADER):
        if not a or not b:
            raise ParseError("empty sample id", line, name)
        if a == b:
            raise SelfComparisonError(f"self-comparison of {a!r}", line, name)
        try:
            k = Kind(kind)
        except ValueError:
            raise ParseError(f"unknown kind {kind!r}", line, name) from None
        out.comparisons.append(Comparison(a, b, _parse_float(raw, "comparison score", line, name), k))
    return out


def read_quality_scores(path) -> QualityScoreTable:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_quality_scores(fh)


def read_comparisons(path) -> ComparisonSet:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_comparisons(fh)


def _fmt(x: float) -> str:
    return repr(float(x))


def dump_quality_scores(table: QualityScoreTable, stream: TextIO, integer: bool = False) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(QUALITY_HEADER)
    for (sid, alg), q in table.scores.items():
        writer.writerow([sid, alg, str(int(q)) if integer else _fmt(q)])


def dump_comparisons(comparisons: ComparisonSet, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COMPARISON_HEADER)
    for c in comparisons:
        writer.writerow([c.sample_a, c.sample_b, _fmt(c.comparison_score), c.kind.value])


# Single substitution point for the pairwise function.
PairwiseFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
DEFAULT_PAIRWISE: PairwiseFunction = np.minimum


def pairwise_qs(comparisons: ComparisonSet, table: QualityScoreTable, algorithm: str,
                combine: PairwiseFunction = DEFAULT_PAIRWISE) -> np.ndarray:
    scores = table.for_algorithm(algorithm)
    qa = np.empty(len(comparisons))
    qb = np.empty(len(comparisons))
    for i, c in enumerate(comparisons):
        try:
            qa[i] = scores[c.sample_a]
            qb[i] = scores[c.sample_b]
        except KeyError as exc:
            raise MissingScoreError(exc.args[0], algorithm) from None
    return combine(qa, qb)


def pairwise_min_qs(comparisons: ComparisonSet, table: QualityScoreTable, algorithm: str) -> np.ndarray:
    """Pairwise QS per comparison: the lower of the two sample QSs."""
    return pairwise_qs(comparisons, table, algorithm, np.minimum)


@dataclass
class ValidationReport:
    missing: dict[str, list[str]]
    mated_count: int
    nonmated_count: int
    distinct_scores: int
    distinct_mated_scores: int

    @property
    def ok(self) -> bool:
        return not any(self.missing.values())

    def to_dict(self) -> dict:
        return {
            "missing": self.missing,
            "mated_count": self.mated_count,
            "nonmated_count": self.nonmated_count,
            "distinct_scores": self.distinct_scores,
            "distinct_mated_scores": self.distinct_mated_scores,
        }


def validate_dataset(table: QualityScoreTable, comparisons: ComparisonSet) -> ValidationReport:
    referenced = comparisons.sample_ids()
    missing = {}
    for alg in table.algorithm_names:
        have = table.for_algorithm(alg)
        missing[alg] = sorted(s for s in referenced if s not in have)
    if not table.algorithm_names and referenced:
        missing[""] = sorted(referenced)
    kinds = Counter(c.kind for c in comparisons)
    scores = comparisons.scores()
    mated = comparisons.of_kind(Kind.MATED).scores()
    return ValidationReport(
        missing=missing,
        mated_count=kinds.get(Kind.MATED, 0),
        nonmated_count=kinds.get(Kind.NONMATED, 0),
        distinct_scores=int(np.unique(scores).size),
        distinct_mated_scores=int(np.unique(mated).size),
    )
