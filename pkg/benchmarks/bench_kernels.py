#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times corpus-level BLEU, chrF, ROUGE-L, and per-segment diversity scoring on
a synthetic corpus under each available backend and prints the speedups.

Usage: python benchmarks/bench_kernels.py [--segments N] [--refs R]
"""

import argparse
import random
import time

from multiref import kernels
from multiref.diversity import self_bleu
from multiref.metrics import bleu_corpus, chrf_corpus, rouge_l

WORDS = [f"w{i}" for i in range(2000)]


def make_corpus(n_segments: int, n_refs: int, seed: int = 13):
    rng = random.Random(seed)
    pairs = []
    for _ in range(n_segments):
        base = [rng.choice(WORDS) for _ in range(rng.randint(15, 25))]
        hyp = [w if rng.random() > 0.3 else rng.choice(WORDS) for w in base]
        refs = [
            [w if rng.random() > 0.2 else rng.choice(WORDS) for w in base]
            for _ in range(n_refs)
        ]
        pairs.append((hyp, refs))
    return pairs


def run_suite(pairs):
    text_pairs = [(" ".join(hyp), [" ".join(r) for r in refs]) for hyp, refs in pairs]
    timings: dict[str, float] = {}

    start = time.perf_counter()
    bleu = bleu_corpus(pairs)
    timings["bleu_corpus"] = time.perf_counter() - start

    start = time.perf_counter()
    chrf = chrf_corpus(text_pairs)
    timings["chrf_corpus"] = time.perf_counter() - start

    start = time.perf_counter()
    for hyp, refs in pairs:
        rouge_l(hyp, refs)
    timings["rouge_l"] = time.perf_counter() - start

    start = time.perf_counter()
    for _hyp, refs in pairs[: max(1, len(pairs) // 10)]:
        self_bleu(refs)
    timings["self_bleu"] = time.perf_counter() - start

    return timings, (bleu.value, chrf.value)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--segments", type=int, default=500)
    parser.add_argument("--refs", type=int, default=10)
    args = parser.parse_args()

    pairs = make_corpus(args.segments, args.refs)
    results = {}
    checks = {}
    for backend in kernels.available_backends():
        kernels.use_backend(backend)
        results[backend], checks[backend] = run_suite(pairs)
        print(f"[{backend}] " + "  ".join(f"{k}={v:.3f}s" for k, v in results[backend].items()))

    if len(checks) > 1:
        values = list(checks.values())
        assert all(v == values[0] for v in values), "backends disagree on scores"
        print("score agreement across backends: OK")
    if "c" in results and "pure" in results:
        print("\nspeedup (pure / c):")
        for key in results["c"]:
            print(f"  {key:<12} {results['pure'][key] / results['c'][key]:.2f}x")


if __name__ == "__main__":
    main()
