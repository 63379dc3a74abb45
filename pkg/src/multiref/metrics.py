"""Multi-reference n-gram metrics: BLEU, subword BLEU, chrF, and ROUGE.

All scores are reported on a 0-100 scale. Multi-reference handling follows
the native convention of each metric: BLEU clips each hypothesis n-gram at
the maximum count seen in any single reference, chrF scores each segment
against its best reference, and ROUGE takes the maximum F1 over references.
"""

import math
from dataclasses import dataclass, field

from . import kernels
from .textproc import tokenize_chars, tokenize_subwords, tokens_of

SMOOTHING_METHODS = ("none", "exp")
REF_LENGTH_MODES = ("closest", "shortest")


@dataclass(frozen=True)
class BleuConfig:
    """BLEU scoring knobs.

    `smoothing="exp"` is the doubling scheme: a running factor s starts at 1
    and, for each order with a zero match count, doubles before that order's
    precision is replaced by 1 / (s * total). `effective_ref_length` picks
    the brevity-penalty reference length per segment: "closest" minimizes the
    absolute length difference (ties toward the shorter reference),
    "shortest" always takes the minimum.
    """

    max_order: int = 4
    smoothing: str = "exp"
    effective_ref_length: str = "closest"

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if self.smoothing not in SMOOTHING_METHODS:
            raise ValueError(f"unknown smoothing {self.smoothing!r}")
        if self.effective_ref_length not in REF_LENGTH_MODES:
            raise ValueError(
                f"unknown effective_ref_length {self.effective_ref_length!r}"
            )


@dataclass(frozen=True)
class MetricScore:
    """A scalar metric value in [0, 100] plus per-order diagnostics."""

    value: float
    per_order: tuple[float, ...] | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"metric value must be finite, got {self.value}")
        if self.value < -1e-9 or self.value > 100.0 + 1e-9:
            raise ValueError(f"metric value out of [0, 100]: {self.value}")
        object.__setattr__(self, "value", min(max(self.value, 0.0), 100.0))
        if self.per_order is not None:
            for p in self.per_order:
                if p < -1e-12 or p > 1.0 + 1e-12:
                    raise ValueError(f"per-order entry out of [0, 1]: {p}")


@dataclass
class CorpusStats:
    """Additive sufficient statistics for corpus-level BLEU.

    Segment stats combine by summation, so corpus aggregation is an
    associative, commutative reduction.
    """

    matched: list[int]
    totals: list[int]
    hyp_len: int = 0
    ref_len: int = 0

    def __post_init__(self):
        if len(self.matched) != len(self.totals):
            raise ValueError("matched and totals must have the same length")
        for m, t in zip(self.matched, self.totals):
            if m < 0 or t < 0 or m > t:
                raise ValueError(f"invalid counts: matched={m}, total={t}")

    @classmethod
    def zero(cls, max_order: int) -> "CorpusStats":
        return cls(matched=[0] * max_order, totals=[0] * max_order)

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            matched=[a + b for a, b in zip(self.matched, other.matched)],
            totals=[a + b for a, b in zip(self.totals, other.totals)],
            hyp_len=self.hyp_len + other.hyp_len,
            ref_len=self.ref_len + other.ref_len,
        )


def corpus_stats_for_segment(hyp, refs, cfg: BleuConfig | None = None) -> CorpusStats:
    """Clipped-match statistics of one segment, ready for corpus summation."""
    cfg = cfg or BleuConfig()
    if not refs:
        raise ValueError("at least one reference is required")
    matched, totals, hyp_len, closest, shortest = kernels.bleu_segment_stats(
        tokens_of(hyp), [tokens_of(r) for r in refs], cfg.max_order
    )
    ref_len = closest if cfg.effective_ref_length == "closest" else shortest
    return CorpusStats(matched=matched, totals=totals, hyp_len=hyp_len, ref_len=ref_len)


def _bleu_from_stats(stats: CorpusStats, cfg: BleuConfig) -> MetricScore:
    hyp_len, ref_len = stats.hyp_len, stats.ref_len
    if hyp_len >= ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_len / hyp_len) if hyp_len > 0 else 0.0
    detail = {
        "bp": bp,
        "hyp_len": float(hyp_len),
        "ref_len": float(ref_len),
        "ratio": hyp_len / ref_len if ref_len > 0 else 0.0,
    }

    precisions = [0.0] * cfg.max_order
    if any(t == 0 for t in stats.totals):
        # An order with no hypothesis n-grams leaves BLEU undefined; score 0.
        for i, (m, t) in enumerate(zip(stats.matched, stats.totals)):
            if t > 0:
                precisions[i] = m / t
        return MetricScore(0.0, tuple(precisions), detail)

    smooth = 1.0
    for i, (m, t) in enumerate(zip(stats.matched, stats.totals)):
        if m > 0:
            precisions[i] = m / t
        elif cfg.smoothing == "exp":
            smooth *= 2.0
            precisions[i] = 1.0 / (smooth * t)
    if any(p == 0.0 for p in precisions):
        return MetricScore(0.0, tuple(precisions), detail)

    log_mean = math.fsum(math.log(p) for p in precisions) / cfg.max_order
    return MetricScore(bp * math.exp(log_mean) * 100.0, tuple(precisions), detail)


def bleu_sentence(hyp, refs, cfg: BleuConfig | None = None) -> MetricScore:
    """BLEU of one hypothesis against one or more references."""
    cfg = cfg or BleuConfig()
    return _bleu_from_stats(corpus_stats_for_segment(hyp, refs, cfg), cfg)


def bleu_corpus(pairs, cfg: BleuConfig | None = None) -> MetricScore:
    """Micro-averaged corpus BLEU over (hypothesis, references) pairs."""
    cfg = cfg or BleuConfig()
    if not pairs:
        raise ValueError("at least one (hypothesis, references) pair is required")
    stats = CorpusStats.zero(cfg.max_order)
    for hyp, refs in pairs:
        stats = stats + corpus_stats_for_segment(hyp, refs, cfg)
    return _bleu_from_stats(stats, cfg)


def spbleu_corpus(
    pairs,
    vocab=None,
    cfg: BleuConfig | None = None,
    pretokenized: bool = False,
    lowercase: bool = False,
) -> MetricScore:
    """Corpus BLEU over subword tokens.

    `pairs` holds raw text: (hyp_text, [ref_text, ...]) per segment. With
    `pretokenized=True` the texts are taken as already-segmented pieces
    joined by spaces and the vocabulary is not consulted.
    """
    if not pretokenized and vocab is None:
        raise ValueError("a subword vocabulary is required unless pretokenized=True")

    def pieces(text: str) -> list[str]:
        if pretokenized:
            return text.split()
        return list(tokenize_subwords(text, vocab, lowercase=lowercase).tokens)

    token_pairs = [(pieces(hyp), [pieces(r) for r in refs]) for hyp, refs in pairs]
    return bleu_corpus(token_pairs, cfg)


def _chrf_fscore(match, hyp_total, ref_total, beta: float):
    """chrF from accumulated per-order counts.

    Orders where both sides have no n-grams are skipped; an order where only
    one side is empty (or nothing matches) contributes F=0. Returns the score
    in [0, 1] and the per-order F vector (skipped orders reported as 0).
    """
    beta2 = beta * beta
    per_order = []
    used = []
    for m, ht, rt in zip(match, hyp_total, ref_total):
        if ht == 0 and rt == 0:
            per_order.append(0.0)
            continue
        precision = m / ht if ht > 0 else 0.0
        recall = m / rt if rt > 0 else 0.0
        denom = beta2 * precision + recall
        fscore = (1.0 + beta2) * precision * recall / denom if denom > 0 else 0.0
        per_order.append(fscore)
        used.append(fscore)
    if not used:
        return 0.0, tuple(per_order), 0
    return math.fsum(used) / len(used), tuple(per_order), len(used)


def _chrf_best_ref_stats(hyp_text: str, ref_texts, n_max: int, beta: float, lowercase: bool):
    hyp = "".join(tokenize_chars(hyp_text, lowercase=lowercase).tokens)
    best = None
    best_score = -1.0
    for ref_text in ref_texts:
        ref = "".join(tokenize_chars(ref_text, lowercase=lowercase).tokens)
        stats = kernels.chrf_segment_stats(hyp, ref, n_max)
        score, _, _ = _chrf_fscore(*stats, beta)
        if score > best_score:
            best_score = score
            best = stats
    return best


def chrf_sentence(
    hyp_text: str, ref_texts, n_max: int = 6, beta: float = 2.0, lowercase: bool = False
) -> MetricScore:
    """Character n-gram F-score of one segment against its best reference."""
    if not ref_texts:
        raise ValueError("at least one reference is required")
    stats = _chrf_best_ref_stats(hyp_text, ref_texts, n_max, beta, lowercase)
    score, per_order, used = _chrf_fscore(*stats, beta)
    return MetricScore(score * 100.0, per_order, {"orders_used": float(used)})


def chrf_corpus(
    pairs, n_max: int = 6, beta: float = 2.0, lowercase: bool = False
) -> MetricScore:
    """Corpus chrF. Each segment contributes the counts of its best reference."""
    if not pairs:
        raise ValueError("at least one (hypothesis, references) pair is required")
    match = [0] * n_max
    hyp_total = [0] * n_max
    ref_total = [0] * n_max
    for hyp_text, ref_texts in pairs:
        if not ref_texts:
            raise ValueError("every segment needs at least one reference")
        m, ht, rt = _chrf_best_ref_stats(hyp_text, ref_texts, n_max, beta, lowercase)
        for i in range(n_max):
            match[i] += m[i]
            hyp_total[i] += ht[i]
            ref_total[i] += rt[i]
    score, per_order, used = _chrf_fscore(match, hyp_total, ref_total, beta)
    return MetricScore(score * 100.0, per_order, {"orders_used": float(used)})


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def rouge_n(hyp, refs, n: int) -> MetricScore:
    """ROUGE-N: max clipped-overlap F1 over the reference set."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    if not refs:
        raise ValueError("at least one reference is required")
    hyp_tokens = tokens_of(hyp)
    best_f = 0.0
    best_pr = (0.0, 0.0)
    for ref in refs:
        overlap, hyp_tot, ref_tot = kernels.rouge_overlap(hyp_tokens, tokens_of(ref), n)
        precision = overlap / hyp_tot if hyp_tot > 0 else 0.0
        recall = overlap / ref_tot if ref_tot > 0 else 0.0
        fscore = _f1(precision, recall)
        if fscore > best_f:
            best_f = fscore
            best_pr = (precision, recall)
    return MetricScore(
        best_f * 100.0, None, {"precision": best_pr[0], "recall": best_pr[1]}
    )


def rouge_l(hyp, refs) -> MetricScore:
    """ROUGE-L: max LCS-based F1 over the reference set."""
    if not refs:
        raise ValueError("at least one reference is required")
    hyp_tokens = tokens_of(hyp)
    best_f = 0.0
    best_pr = (0.0, 0.0)
    for ref in refs:
        ref_tokens = tokens_of(ref)
        lcs = kernels.lcs_length(hyp_tokens, ref_tokens)
        precision = lcs / len(hyp_tokens) if hyp_tokens else 0.0
        recall = lcs / len(ref_tokens) if ref_tokens else 0.0
        fscore = _f1(precision, recall)
        if fscore > best_f:
            best_f = fscore
            best_pr = (precision, recall)
    return MetricScore(
        best_f * 100.0, None, {"precision": best_pr[0], "recall": best_pr[1]}
    )
