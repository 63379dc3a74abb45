"""Diversity statistics and diversity-aware selection of reference candidates.

A candidate's diversity score is its BLEU against all sibling candidates
taken jointly as a multi-reference set; low scores mean high diversity.
Selection keeps candidates scoring strictly below a threshold, computed in a
single pass over the full input set.
"""

from dataclasses import dataclass

from .metrics import BleuConfig, bleu_sentence
from .textproc import TokenSequence, tokenize_words, tokens_of

PROVENANCES = frozenset({"llm", "gold", "external"})

#: Default selection threshold.
DEFAULT_SELF_BLEU_THRESHOLD = 35.0


@dataclass(frozen=True)
class CandidateSet:
    """Ordered reference candidates for one segment."""

    segment_id: str
    candidates: tuple[str, ...]
    provenance: str = "llm"

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("candidate set must not be empty")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class DiversityReport:
    """Lexical-diversity summary of a candidate or output corpus."""

    distinct_n: float
    n: int
    unique_tokens: int
    self_bleu: tuple[float, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.distinct_n <= 1.0:
            raise ValueError(f"distinct_n out of [0, 1]: {self.distinct_n}")


def self_bleu(candidates, cfg: BleuConfig | None = None) -> list[float]:
    """Score each candidate against all others jointly as its reference set."""
    if len(candidates) < 2:
        raise ValueError("self-BLEU needs at least two candidates")
    token_lists = [tokens_of(c) for c in candidates]
    scores = []
    for i, hyp in enumerate(token_lists):
        others = token_lists[:i] + token_lists[i + 1 :]
        scores.append(bleu_sentence(hyp, others, cfg).value)
    return scores


def selection_survivors(
    scores: list[float], threshold: float = DEFAULT_SELF_BLEU_THRESHOLD
) -> list[int]:
    """Indices scoring strictly below the threshold; argmin fallback if none do."""
    kept = [i for i, s in enumerate(scores) if s < threshold]
    if not kept:
        kept = [min(range(len(scores)), key=lambda i: (scores[i], i))]
    return kept


def select_diverse(
    cset: CandidateSet,
    threshold: float = DEFAULT_SELF_BLEU_THRESHOLD,
    cfg: BleuConfig | None = None,
    lowercase: bool = False,
) -> CandidateSet:
    """Keep candidates whose diversity score beats the threshold.

    Scores are computed once on the full input set (no recomputation after
    removals). If everything is filtered out, the single lowest-scoring
    candidate is retained (earliest index on ties). A single-candidate set is
    returned unchanged.
    """
    if len(cset.candidates) == 1:
        return cset
    tokenized = [tokenize_words(c, lowercase=lowercase) for c in cset.candidates]
    scores = self_bleu(tokenized, cfg)
    kept = selection_survivors(scores, threshold)
    return CandidateSet(
        segment_id=cset.segment_id,
        candidates=tuple(cset.candidates[i] for i in kept),
        provenance=cset.provenance,
    )


def distinct_n(corpus, n: int = 6) -> float:
    """Distinct n-grams divided by total n-gram occurrences across the corpus."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    seen = set()
    total = 0
    for seq in corpus:
        tokens = tuple(tokens_of(seq))
        for i in range(len(tokens) - n + 1):
            seen.add(tokens[i : i + n])
            total += 1
    return len(seen) / total if total else 0.0


def unique_tokens(corpus) -> int:
    """Size of the token vocabulary of the corpus."""
    vocab = set()
    for seq in corpus:
        vocab.update(tokens_of(seq))
    return len(vocab)


def diversity_report(
    corpus: list[TokenSequence], n: int = 6, self_bleu_scores=()
) -> DiversityReport:
    """Bundle DistinctN and unique-token counts for one corpus."""
    return DiversityReport(
        distinct_n=distinct_n(corpus, n),
        n=n,
        unique_tokens=unique_tokens(corpus),
        self_bleu=tuple(self_bleu_scores),
    )
