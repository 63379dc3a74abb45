"""Deterministic tokenization and n-gram extraction shared by all metrics.

Three granularities are supported: whitespace/punctuation word tokens,
whitespace-stripped character tokens, and greedy longest-match subword pieces
against a user-supplied vocabulary. All tokenizers are pure functions; the
same input always produces the same output.
"""

import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import kernels
from .errors import CorpusFormatError

WORD = "word"
CHAR = "char"
SUBWORD = "subword"
GRANULARITIES = frozenset({WORD, CHAR, SUBWORD})

#: SentencePiece-style word-boundary marker prefixed to every word.
WORD_MARKER = "▁"

#: Default unknown piece when a vocabulary file declares none.
DEFAULT_UNK_PIECE = "<unk>"


@dataclass(frozen=True)
class TokenSequence:
    """An immutable tokenized text at one granularity."""

    tokens: tuple[str, ...]
    granularity: str

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"unknown granularity {self.granularity!r}")
        if any(tok == "" for tok in self.tokens):
            raise ValueError("token sequences must not contain empty strings")
        if self.granularity == CHAR and any(tok.isspace() for tok in self.tokens):
            raise ValueError("char sequences must not contain whitespace tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, idx):
        return self.tokens[idx]


@dataclass(frozen=True)
class NgramCounts:
    """Multiset of n-grams (token tuples) of a single order."""

    order: int
    counts: Counter

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class SubwordVocab:
    """Subword inventory used for greedy longest-match segmentation."""

    entries: frozenset[str]
    unk_piece: str = DEFAULT_UNK_PIECE

    def __post_init__(self):
        if not self.entries:
            raise ValueError("subword vocabulary must not be empty")
        if "" in self.entries:
            raise ValueError("subword vocabulary must not contain the empty string")
        object.__setattr__(self, "_max_len", max(len(e) for e in self.entries))

    @property
    def max_piece_len(self) -> int:
        return self._max_len


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize_words(text: str, lowercase: bool = False) -> TokenSequence:
    """Split text into word tokens, mteval-13a style.

    NFC-normalizes, optionally lowercases, splits on whitespace, then peels
    leading and trailing punctuation off each chunk as standalone tokens.
    Interior punctuation (don't, e-mail, 3.5) is left in place.
    """
    text = unicodedata.normalize("NFC", text)
    if lowercase:
        text = text.lower()
    tokens: list[str] = []
    for chunk in text.split():
        start = 0
        end = len(chunk)
        leading: list[str] = []
        trailing: list[str] = []
        while start < end and _is_punct(chunk[start]):
            leading.append(chunk[start])
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            trailing.append(chunk[end - 1])
            end -= 1
        tokens.extend(leading)
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(trailing))
    return TokenSequence(tuple(tokens), WORD)


def tokenize_chars(text: str, lowercase: bool = False) -> TokenSequence:
    """Strip all whitespace and emit one token per Unicode scalar value."""
    text = unicodedata.normalize("NFC", text)
    if lowercase:
        text = text.lower()
    return TokenSequence(tuple(ch for ch in text if not ch.isspace()), CHAR)


def tokenize_subwords(
    text: str, vocab: SubwordVocab, lowercase: bool = False
) -> TokenSequence:
    """Greedy longest-match segmentation against a subword vocabulary.

    Each whitespace-delimited word is prefixed with the word-boundary marker
    and matched left to right, always taking the longest vocabulary entry.
    When no marked entry matches at the start of a word, the marker is dropped
    and matching restarts on the bare word; any position with no match at all
    emits the vocabulary's unk piece and advances one character.
    """
    text = unicodedata.normalize("NFC", text)
    if lowercase:
        text = text.lower()
    pieces: list[str] = []
    max_len = vocab.max_piece_len
    entries = vocab.entries
    for word in text.split():
        stream = WORD_MARKER + word
        pos = 0
        if _longest_match(stream, 0, entries, max_len) is None:
            stream = word  # no marked match: drop the boundary marker
        while pos < len(stream):
            match = _longest_match(stream, pos, entries, max_len)
            if match is None:
                pieces.append(vocab.unk_piece)
                pos += 1
            else:
                pieces.append(match)
                pos += len(match)
    return TokenSequence(tuple(pieces), SUBWORD)


def _longest_match(stream: str, pos: int, entries: frozenset[str], max_len: int):
    limit = min(max_len, len(stream) - pos)
    for length in range(limit, 0, -1):
        candidate = stream[pos : pos + length]
        if candidate in entries:
            return candidate
    return None


def extract_ngrams(seq, n: int) -> NgramCounts:
    """Sliding-window n-gram counts; empty when the sequence is shorter than n."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    return NgramCounts(order=n, counts=kernels.ngram_counts(tokens_of(seq), n))


def tokens_of(seq) -> list[str]:
    """Accept a TokenSequence or any iterable of token strings."""
    if isinstance(seq, TokenSequence):
        return list(seq.tokens)
    return list(seq)


def load_subword_vocab(path: str | Path) -> SubwordVocab:
    """Load a vocabulary file: one piece per line, optional `#unk=<piece>` header."""
    path = Path(path)
    unk_piece = DEFAULT_UNK_PIECE
    entries: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if lineno == 1 and line.startswith("#unk="):
                unk_piece = line[len("#unk=") :]
                if not unk_piece:
                    raise CorpusFormatError("empty unk piece in header", str(path), lineno)
                continue
            if not line:
                continue
            entries.add(line)
    if not entries:
        raise CorpusFormatError("vocabulary file contains no pieces", str(path))
    return SubwordVocab(entries=frozenset(entries), unk_piece=unk_piece)
