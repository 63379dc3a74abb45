# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the pure-Python counting kernels in _pure.py.

Same contracts, same results; only the inner loops differ. Token strings are
mapped to small integer ids per call so n-gram keys hash as int tuples, and
the LCS table runs over C arrays.
"""

from collections import Counter

from libc.stdlib cimport free, malloc


def ngram_counts(tokens, n):
    """Sliding-window n-gram counts as a Counter keyed by token tuples."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    cdef tuple toks = tuple(tokens)
    cdef Py_ssize_t i, windows = len(toks) - n + 1
    counts = Counter()
    for i in range(windows):
        counts[toks[i:i + n]] += 1
    return counts


cdef list _ids(object tokens, dict vocab):
    cdef list out = []
    for tok in tokens:
        val = vocab.get(tok)
        if val is None:
            val = len(vocab)
            vocab[tok] = val
        out.append(val)
    return out


cdef dict _id_gram_counts(list ids, Py_ssize_t n, dict keep_only):
    """Counts of n-gram windows over ids; restricted to keep_only keys if given."""
    cdef dict counts = {}
    cdef Py_ssize_t i, windows = len(ids) - n + 1
    cdef tuple key
    for i in range(windows):
        key = tuple(ids[i:i + n])
        if keep_only is not None and key not in keep_only:
            continue
        counts[key] = counts.get(key, 0) + 1
    return counts


def bleu_segment_stats(hyp, refs, max_order):
    """See _pure.bleu_segment_stats."""
    cdef dict vocab = {}
    cdef list hyp_ids = _ids(hyp, vocab)
    cdef Py_ssize_t hyp_len = len(hyp_ids)
    cdef list refs_ids = []
    cdef Py_ssize_t rl, diff
    cdef Py_ssize_t best_diff = -1, best_len = -1, shortest = -1
    for ref in refs:
        ref_ids = _ids(ref, vocab)
        refs_ids.append(ref_ids)
        rl = len(<list>ref_ids)
        diff = hyp_len - rl if hyp_len >= rl else rl - hyp_len
        if best_diff < 0 or diff < best_diff or (diff == best_diff and rl < best_len):
            best_diff = diff
            best_len = rl
        if shortest < 0 or rl < shortest:
            shortest = rl
    if best_len < 0:
        raise ValueError("refs must be non-empty")

    matched = []
    totals = []
    cdef Py_ssize_t n, total, m, cnt, cap
    cdef dict hyp_counts, clip, ref_counts
    for n in range(1, max_order + 1):
        total = hyp_len - n + 1
        if total < 0:
            total = 0
        totals.append(total)
        if total == 0:
            matched.append(0)
            continue
        hyp_counts = _id_gram_counts(hyp_ids, n, None)
        clip = {}
        for ref_ids in refs_ids:
            ref_counts = _id_gram_counts(<list>ref_ids, n, hyp_counts)
            for key, value in ref_counts.items():
                if value > clip.get(key, 0):
                    clip[key] = value
        m = 0
        for key, value in hyp_counts.items():
            cnt = value
            cap = clip.get(key, 0)
            m += cnt if cnt < cap else cap
        matched.append(m)
    return matched, totals, hyp_len, best_len, shortest


def rouge_overlap(hyp, ref, n):
    """See _pure.rouge_overlap."""
    cdef dict vocab = {}
    cdef list hyp_ids = _ids(hyp, vocab)
    cdef list ref_ids = _ids(ref, vocab)
    cdef Py_ssize_t hyp_total = len(hyp_ids) - n + 1
    cdef Py_ssize_t ref_total = len(ref_ids) - n + 1
    if hyp_total < 0:
        hyp_total = 0
    if ref_total < 0:
        ref_total = 0
    if hyp_total == 0 or ref_total == 0:
        return 0, hyp_total, ref_total
    cdef dict hyp_counts = _id_gram_counts(hyp_ids, n, None)
    cdef dict ref_counts = _id_gram_counts(ref_ids, n, hyp_counts)
    cdef Py_ssize_t overlap = 0, cnt, cap
    for key, value in hyp_counts.items():
        cnt = value
        cap = ref_counts.get(key, 0)
        overlap += cnt if cnt < cap else cap
    return overlap, hyp_total, ref_total


def chrf_segment_stats(hyp, ref, n_max):
    """See _pure.chrf_segment_stats."""
    cdef str h = hyp
    cdef str r = ref
    match = []
    hyp_total = []
    ref_total = []
    cdef Py_ssize_t n, i, ht, rt, m, cnt, cap
    cdef dict hyp_counts, ref_counts
    cdef str key
    for n in range(1, n_max + 1):
        ht = len(h) - n + 1
        rt = len(r) - n + 1
        if ht < 0:
            ht = 0
        if rt < 0:
            rt = 0
        hyp_total.append(ht)
        ref_total.append(rt)
        if ht == 0 or rt == 0:
            match.append(0)
            continue
        hyp_counts = {}
        for i in range(ht):
            key = h[i:i + n]
            hyp_counts[key] = hyp_counts.get(key, 0) + 1
        ref_counts = {}
        for i in range(rt):
            key = r[i:i + n]
            if key in hyp_counts:
                ref_counts[key] = ref_counts.get(key, 0) + 1
        m = 0
        for gram, value in hyp_counts.items():
            cnt = value
            cap = ref_counts.get(gram, 0)
            m += cnt if cnt < cap else cap
        match.append(m)
    return match, hyp_total, ref_total


def lcs_length(a, b):
    """See _pure.lcs_length."""
    cdef dict vocab = {}
    cdef list a_list = _ids(a, vocab)
    cdef list b_list = _ids(b, vocab)
    cdef Py_ssize_t la = len(a_list), lb = len(b_list)
    if la == 0 or lb == 0:
        return 0
    cdef long *a_ids = <long *> malloc(la * sizeof(long))
    cdef long *b_ids = <long *> malloc(lb * sizeof(long))
    cdef long *prev = <long *> malloc((lb + 1) * sizeof(long))
    cdef long *cur = <long *> malloc((lb + 1) * sizeof(long))
    cdef long *swap
    cdef Py_ssize_t i, j
    cdef long result
    if a_ids == NULL or b_ids == NULL or prev == NULL or cur == NULL:
        free(a_ids)
        free(b_ids)
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for i in range(la):
            a_ids[i] = a_list[i]
        for j in range(lb):
            b_ids[j] = b_list[j]
        for j in range(lb + 1):
            prev[j] = 0
        for i in range(la):
            cur[0] = 0
            for j in range(1, lb + 1):
                if a_ids[i] == b_ids[j - 1]:
                    cur[j] = prev[j - 1] + 1
                elif cur[j - 1] >= prev[j]:
                    cur[j] = cur[j - 1]
                else:
                    cur[j] = prev[j]
            swap = prev
            prev = cur
            cur = swap
        result = prev[lb]
        return result
    finally:
        free(a_ids)
        free(b_ids)
        free(prev)
        free(cur)
