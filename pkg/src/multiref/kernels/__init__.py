"""Counting kernels with a compiled fast path and a pure-Python fallback.

The compiled backend (`multiref.kernels._speedups`, built from Cython) is
selected at import time when present; otherwise the pure-Python twin is used.
Set MULTIREF_NO_EXTENSION=1 to force the fallback. Callers should access the
kernel functions as module attributes (``kernels.lcs_length(...)``) so that
`use_backend` swaps take effect; swapping is intended for startup, tests, and
benchmarks, not for concurrent use mid-run.
"""

import os

from . import _pure

_BACKENDS = {"pure": _pure}

if not os.environ.get("MULTIREF_NO_EXTENSION"):
    try:
        from . import _speedups

        _BACKENDS["c"] = _speedups
    except ImportError:
        pass

_active = None

ngram_counts = None
bleu_segment_stats = None
rouge_overlap = None
chrf_segment_stats = None
lcs_length = None


def available_backends() -> list[str]:
    """Backends usable in this installation ('pure' always, 'c' when built)."""
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active


def use_backend(name: str) -> str:
    """Bind the named backend's kernel functions at module level."""
    global _active, ngram_counts, bleu_segment_stats, rouge_overlap
    global chrf_segment_stats, lcs_length
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}, have {available_backends()}")
    ngram_counts = mod.ngram_counts
    bleu_segment_stats = mod.bleu_segment_stats
    rouge_overlap = mod.rouge_overlap
    chrf_segment_stats = mod.chrf_segment_stats
    lcs_length = mod.lcs_length
    _active = name
    return name


use_backend("c" if "c" in _BACKENDS else "pure")
