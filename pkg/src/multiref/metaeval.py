"""Correlation of metric scores with human judgments.

System-level pairwise accuracy and Pearson, segment-level Kendall tau-b,
sample-level Spearman, and the leakage-gap report. Degenerate inputs (all
ties, zero variance) raise DegenerateDataError instead of returning NaN.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .errors import CorpusFormatError, DegenerateDataError


@dataclass(frozen=True)
class HumanJudgment:
    """One human quality score, at system level (segment None) or segment level."""

    system: str
    score: float
    segment: str | None = None
    dimension: str | None = None

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError(f"human score must be finite, got {self.score}")


@dataclass(frozen=True)
class MetaEvalReport:
    """Agreement of one metric with human judgments on one language pair / task."""

    metric: str
    pairwise_accuracy: float
    n_pairs_used: int
    pearson: float
    kendall: float | None = None
    spearman: dict[str, float] | None = None
    name: str | None = None
    n_systems: int = 0
    n_segments: int = 0

    def __post_init__(self):
        if not 0.0 <= self.pairwise_accuracy <= 1.0:
            raise ValueError(f"accuracy out of [0, 1]: {self.pairwise_accuracy}")
        for value in self._correlations():
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"correlation out of [-1, 1]: {value}")

    def _correlations(self):
        values = [self.pearson]
        if self.kendall is not None:
            values.append(self.kendall)
        if self.spearman:
            values.extend(self.spearman.values())
        return values


@dataclass(frozen=True)
class LeakageGapReport:
    """How much a between-system score gap changes from single- to multi-reference."""

    system_a: str
    system_b: str
    delta_single: float
    delta_multi: float

    @property
    def shrinkage(self) -> float:
        return self.delta_multi - self.delta_single

    @property
    def ratio(self) -> float | None:
        if self.delta_single == 0.0:
            return None
        return self.delta_multi / self.delta_single


def _check_paired(x, y):
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two paired observations")


def pearson(x, y) -> float:
    """Sample Pearson product-moment correlation."""
    _check_paired(x, y)
    n = len(x)
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("pearson is undefined for zero-variance input")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return min(max(r, -1.0), 1.0)


def _tie_pairs(values) -> int:
    return sum(c * (c - 1) // 2 for c in Counter(values).values())


def _kendall_pair_counts(x, y):
    """Concordant/discordant and tied-pair counts, exact, in O(n log n).

    Iterates items in x order; a Fenwick tree over rank-compressed y counts,
    for each equal-x block, how many previously inserted items (strictly
    smaller x) have smaller or larger y.
    """
    n = len(x)
    rank = {v: i + 1 for i, v in enumerate(sorted(set(y)))}
    size = len(rank)
    tree = [0] * (size + 1)

    def add(i):
        while i <= size:
            tree[i] += 1
            i += i & (-i)

    def count_le(i):
        total = 0
        while i > 0:
            total += tree[i]
            i -= i & (-i)
        return total

    order = sorted(range(n), key=lambda i: (x[i], y[i]))
    concordant = discordant = 0
    inserted = 0
    i = 0
    while i < n:
        j = i
        while j < n and x[order[j]] == x[order[i]]:
            j += 1
        for k in range(i, j):
            r = rank[y[order[k]]]
            below = count_le(r - 1)
            concordant += below
            discordant += inserted - count_le(r)
        for k in range(i, j):
            add(rank[y[order[k]]])
        inserted = j
        i = j
    return concordant, discordant, _tie_pairs(x), _tie_pairs(y)


def kendall_tau(x, y) -> float:
    """Tie-corrected Kendall tau-b."""
    _check_paired(x, y)
    concordant, discordant, ties_x, ties_y = _kendall_pair_counts(list(x), list(y))
    n0 = len(x) * (len(x) - 1) // 2
    if ties_x == n0 or ties_y == n0:
        raise DegenerateDataError("kendall tau is undefined when one side is all ties")
    return (concordant - discordant) / math.sqrt((n0 - ties_x) * (n0 - ties_y))


def midranks(values) -> list[float]:
    """Ranks starting at 1, with tied values receiving their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[order[j]] == values[order[i]]:
            j += 1
        average = (i + 1 + j) / 2.0
        for k in range(i, j):
            ranks[order[k]] = average
        i = j
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of mid-ranks."""
    _check_paired(x, y)
    try:
        return pearson(midranks(x), midranks(y))
    except DegenerateDataError:
        raise DegenerateDataError("spearman is undefined for zero rank-variance input")


def pairwise_accuracy(metric_scores, human_scores) -> tuple[float, int]:
    """Fraction of system pairs whose metric delta matches the human delta in sign.

    Pairs with tied human scores are excluded from the denominator; a tied
    metric delta counts as incorrect. Returns (accuracy, pairs_used).
    """
    common = sorted(set(metric_scores) & set(human_scores))
    if len(common) < 2:
        raise ValueError("pairwise accuracy needs at least two common systems")
    correct = 0
    used = 0
    for a, b in combinations(common, 2):
        human_delta = human_scores[a] - human_scores[b]
        if human_delta == 0.0:
            continue
        used += 1
        metric_delta = metric_scores[a] - metric_scores[b]
        if metric_delta != 0.0 and (metric_delta > 0.0) == (human_delta > 0.0):
            correct += 1
    if used == 0:
        raise DegenerateDataError("all human score pairs are tied")
    return correct / used, used


def segment_kendall(metric_scores, human_scores) -> float:
    """Kendall tau-b over the aligned (system, segment) score vectors."""
    common = sorted(set(metric_scores) & set(human_scores))
    if len(common) < 2:
        raise ValueError("segment kendall needs at least two common (system, segment) keys")
    return kendall_tau(
        [metric_scores[k] for k in common], [human_scores[k] for k in common]
    )


def leakage_gap(scores_single, scores_multi, a: str, b: str) -> LeakageGapReport:
    """Score gap of system a over system b under single- vs multi-reference scoring."""
    for name, scores in (("single", scores_single), ("multi", scores_multi)):
        for system in (a, b):
            if system not in scores:
                raise ValueError(f"system {system!r} missing from {name}-reference scores")
    return LeakageGapReport(
        system_a=a,
        system_b=b,
        delta_single=scores_single[a] - scores_single[b],
        delta_multi=scores_multi[a] - scores_multi[b],
    )


def load_human_judgments(path: str | Path) -> list[HumanJudgment]:
    """Read human.jsonl: `{"system", "segment"|null, "dimension"|null, "score"}`."""
    path = Path(path)
    judgments: list[HumanJudgment] = []
    seen = set()
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
                judgment = HumanJudgment(
                    system=str(record["system"]),
                    score=float(record["score"]),
                    segment=None if record.get("segment") is None else str(record["segment"]),
                    dimension=None
                    if record.get("dimension") is None
                    else str(record["dimension"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"invalid judgment: {exc}", str(path), lineno)
            key = (judgment.system, judgment.segment, judgment.dimension)
            if key in seen:
                raise CorpusFormatError(f"duplicate judgment for {key}", str(path), lineno)
            seen.add(key)
            judgments.append(judgment)
    return judgments


def system_human_scores(judgments) -> dict[str, float]:
    """System-level human scores; averages finer-grained ones when needed.

    Explicit system-level judgments (segment None, dimension None) win;
    systems without one fall back to the mean of their overall segment-level
    scores. When a corpus carries only per-dimension judgments, the mean
    across all dimensions and samples serves as the overall proxy.
    """
    explicit: dict[str, float] = {}
    segment_sums: dict[str, list[float]] = {}
    dimension_sums: dict[str, list[float]] = {}
    for j in judgments:
        if j.dimension is not None:
            dimension_sums.setdefault(j.system, []).append(j.score)
        elif j.segment is None:
            explicit[j.system] = j.score
        else:
            segment_sums.setdefault(j.system, []).append(j.score)
    if not explicit and not segment_sums:
        segment_sums = dimension_sums
    scores = {
        system: math.fsum(values) / len(values)
        for system, values in segment_sums.items()
    }
    scores.update(explicit)
    return scores


def meta_evaluate(
    metric_segment_scores,
    judgments,
    metric_name: str,
    name: str | None = None,
) -> MetaEvalReport:
    """Build a full agreement report from per-(system, segment) metric scores."""
    if not metric_segment_scores:
        raise ValueError("no metric scores given")
    by_system: dict[str, list[float]] = {}
    for (system, _segment), score in metric_segment_scores.items():
        by_system.setdefault(system, []).append(score)
    metric_system = {
        system: math.fsum(values) / len(values) for system, values in by_system.items()
    }

    human_system = system_human_scores(judgments)
    accuracy, pairs_used = pairwise_accuracy(metric_system, human_system)
    common_systems = sorted(set(metric_system) & set(human_system))
    rho = pearson(
        [metric_system[s] for s in common_systems],
        [human_system[s] for s in common_systems],
    )

    human_segment = {
        (j.system, j.segment): j.score
        for j in judgments
        if j.segment is not None and j.dimension is None
    }
    tau = None
    if human_segment:
        tau = segment_kendall(metric_segment_scores, human_segment)

    dimensions = sorted({j.dimension for j in judgments if j.dimension is not None})
    spearman_by_dim = None
    if dimensions:
        spearman_by_dim = {}
        for dim in dimensions:
            human_dim = {
                (j.system, j.segment): j.score
                for j in judgments
                if j.dimension == dim and j.segment is not None
            }
            keys = sorted(set(metric_segment_scores) & set(human_dim))
            if len(keys) < 2:
                raise ValueError(f"dimension {dim!r} shares fewer than two samples")
            spearman_by_dim[dim] = spearman(
                [metric_segment_scores[k] for k in keys],
                [human_dim[k] for k in keys],
            )

    segments = {segment for (_system, segment) in metric_segment_scores}
    return MetaEvalReport(
        metric=metric_name,
        pairwise_accuracy=accuracy,
        n_pairs_used=pairs_used,
        pearson=rho,
        kendall=tau,
        spearman=spearman_by_dim,
        name=name,
        n_systems=len(common_systems),
        n_segments=len(segments),
    )
