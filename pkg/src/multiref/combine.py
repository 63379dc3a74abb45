"""Combine per-reference scores into one score per hypothesis.

This is the integration point for externally produced neural-metric score
matrices: one row per (system, segment) hypothesis, one column per reference,
combined with max (the default), mean, or top-k mean. The row scores average
into a system-level score.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError

COMBINE_KINDS = ("max", "mean", "top_k_mean")


@dataclass(frozen=True)
class CombinePolicy:
    kind: str = "max"
    k: int | None = None

    def __post_init__(self):
        if self.kind not in COMBINE_KINDS:
            raise ValueError(f"unknown combine kind {self.kind!r}")
        if self.kind == "top_k_mean":
            if self.k is None or self.k < 1:
                raise ValueError("top_k_mean requires k >= 1")
        elif self.k is not None:
            raise ValueError(f"k is only valid for top_k_mean, not {self.kind!r}")


@dataclass(frozen=True)
class MatrixRow:
    """Per-reference scores of one hypothesis."""

    system: str
    segment: str
    scores: dict[str, float]

    def __post_init__(self):
        if not self.scores:
            raise ValueError("matrix row must have at least one score")
        for ref_id, score in self.scores.items():
            if not math.isfinite(score):
                raise ValueError(
                    f"non-finite score for ({self.system}, {self.segment}, {ref_id})"
                )


@dataclass
class ScoreMatrix:
    """All rows of one metric, keyed by (system, segment)."""

    metric_name: str
    rows: list[MatrixRow] = field(default_factory=list)
    scale: tuple[float, float] | None = None

    def __post_init__(self):
        seen = set()
        for row in self.rows:
            key = (row.system, row.segment)
            if key in seen:
                raise ValueError(f"duplicate matrix row for {key}")
            seen.add(key)


def combine_row(scores, policy: CombinePolicy | None = None) -> float:
    """Reduce one row's per-reference scores to a single value."""
    policy = policy or CombinePolicy()
    scores = list(scores)
    if not scores:
        raise ValueError("cannot combine an empty score list")
    if policy.kind == "max":
        return max(scores)
    if policy.kind == "mean":
        return math.fsum(scores) / len(scores)
    if policy.k > len(scores):
        raise ValueError(f"k={policy.k} exceeds the {len(scores)} available scores")
    top = sorted(scores, reverse=True)[: policy.k]
    return math.fsum(top) / policy.k


def combine_matrix(
    matrix: ScoreMatrix, policy: CombinePolicy | None = None
) -> dict[tuple[str, str], float]:
    """Apply combine_row per row; keys are (system, segment)."""
    if not matrix.rows:
        raise ValueError("cannot combine an empty matrix")
    return {
        (row.system, row.segment): combine_row(row.scores.values(), policy)
        for row in matrix.rows
    }


def system_score(per_segment) -> float:
    """Arithmetic mean of per-segment scores; the system-level score."""
    if not per_segment:
        raise ValueError("cannot average an empty score map")
    values = list(per_segment.values())
    return math.fsum(values) / len(values)


def load_score_matrices(path: str | Path) -> dict[str, ScoreMatrix]:
    """Read a matrix JSONL file, grouping rows by metric name.

    Each line holds `{"system": str, "segment": str, "scores": {ref: num},
    "metric": str}`. Malformed lines are reported with file and line number.
    """
    path = Path(path)
    grouped: dict[str, list[MatrixRow]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc}", str(path), lineno)
            try:
                metric = record["metric"]
                row = MatrixRow(
                    system=str(record["system"]),
                    segment=str(record["segment"]),
                    scores={str(k): float(v) for k, v in record["scores"].items()},
                )
            except (KeyError, TypeError, AttributeError, ValueError) as exc:
                raise CorpusFormatError(f"invalid matrix row: {exc}", str(path), lineno)
            grouped.setdefault(str(metric), []).append(row)
    return {metric: ScoreMatrix(metric, rows) for metric, rows in grouped.items()}


def write_score_matrix(path: str | Path, matrix: ScoreMatrix, append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8") as handle:
        for row in matrix.rows:
            handle.write(
                json.dumps(
                    {
                        "system": row.system,
                        "segment": row.segment,
                        "scores": row.scores,
                        "metric": matrix.metric_name,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
