"""Subcommand interface orchestrating the evaluation pipeline end to end.

Stages communicate only through files (JSONL formats documented in
corpus_io), so each can be rerun independently: generate once, rescore and
re-evaluate as often as needed.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import corpus_io, diversity, metaeval, refgen
from .combine import (
    CombinePolicy,
    MatrixRow,
    ScoreMatrix,
    combine_matrix,
    load_score_matrices,
    system_score,
    write_score_matrix,
)
from .errors import MultirefError
from .metrics import (
    BleuConfig,
    bleu_corpus,
    bleu_sentence,
    chrf_corpus,
    chrf_sentence,
    rouge_l,
    rouge_n,
)
from .textproc import load_subword_vocab, tokenize_subwords, tokenize_words

METRIC_CHOICES = ("bleu", "spbleu", "chrf", "rouge1", "rouge2", "rougeL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiref",
        description="Multi-reference evaluation pipeline for NLG systems.",
    )
    parser.add_argument("--config", help="JSON file with default values for flags")
    parser.add_argument("--jobs", type=int, default=1, help="worker count cap")
    parser.add_argument(
        "--lowercase", action="store_true", help="lowercase text before tokenization"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate reference candidates via an LLM endpoint")
    p.add_argument("--segments", required=True, help="segments.jsonl")
    p.add_argument("--out", required=True, help="refs.jsonl to write/append")
    p.add_argument("--task", choices=("translation", "summarization"), default="translation")
    p.add_argument("--template", choices=("english", "chinese", "custom"), default="english")
    p.add_argument("--template-file", help="JSON template (required for --template custom)")
    p.add_argument("--model", default="gpt-3.5-turbo")
    p.add_argument("--endpoint", default="https://api.openai.com/v1/chat/completions")
    p.add_argument("--n-references", type=int, help="candidates per segment (40 translation, 10 summarization)")
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--timeout", type=float, default=120.0)
    p.add_argument(
        "--ground-truth",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="include the gold reference in the prompt (default: yes when every segment has one)",
    )
    p.add_argument("--mock", action="store_true", help="use the built-in offline mock endpoint")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("select", help="filter candidates by diversity")
    p.add_argument("--refs", required=True, help="refs.jsonl to filter")
    p.add_argument("--out", required=True, help="filtered refs.jsonl")
    p.add_argument("--threshold", type=float, default=diversity.DEFAULT_SELF_BLEU_THRESHOLD)
    p.add_argument("--report", help="write the per-segment diversity-score report JSON here")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("score", help="score system outputs with n-gram metrics")
    p.add_argument("--segments", required=True)
    p.add_argument("--outputs", required=True)
    p.add_argument("--generated-refs", help="refs.jsonl from generate/select")
    p.add_argument(
        "--refs",
        choices=("gold", "generated", "both"),
        default=None,
        help="reference set (default: generated when --generated-refs is given, else gold)",
    )
    p.add_argument("--max-refs", type=int, help="cap on generated references per segment")
    p.add_argument("--sweep-refs", help="A..B: emit one score series per generated-reference count")
    p.add_argument("--metrics", default="bleu", help=f"comma list of {','.join(METRIC_CHOICES)}")
    p.add_argument("--vocab", help="subword vocabulary file (required for spbleu)")
    p.add_argument("--pretokenized", action="store_true", help="treat text as subword pieces joined by spaces")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--smoothing", choices=("none", "exp"), default="exp")
    p.add_argument("--ref-length", choices=("closest", "shortest"), default="closest")
    p.add_argument("--chrf-order", type=int, default=6)
    p.add_argument("--chrf-beta", type=float, default=2.0)
    p.add_argument("--per-reference", action="store_true",
                   help="matrix cells hold single-reference scores instead of one joint multi-reference column")
    p.add_argument("--out", help="matrix.jsonl to write")
    p.add_argument("--summary", help="per-system summary JSON to write")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("combine", help="combine per-reference score matrices")
    p.add_argument("--matrix", required=True, help="matrix.jsonl")
    p.add_argument("--policy", choices=("max", "mean", "top_k_mean"), default="max")
    p.add_argument("--k", type=int, help="k for top_k_mean")
    p.add_argument("--out", help="combined per-segment scores JSONL")
    p.add_argument("--summary", help="per-system summary JSON")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("metaeval", help="correlate metric scores with human judgments")
    p.add_argument("--matrix", required=True, help="matrix.jsonl of metric scores")
    p.add_argument("--human", required=True, help="human.jsonl")
    p.add_argument("--policy", choices=("max", "mean", "top_k_mean"), default="max")
    p.add_argument("--k", type=int)
    p.add_argument("--name", help="language pair / task label for the report")
    p.add_argument("--out", help="report JSON")
    p.set_defaults(func=cmd_metaeval)

    p = sub.add_parser("diversity", help="per-system lexical diversity table")
    p.add_argument("--outputs", required=True)
    p.add_argument("--segments", help="validate output segment ids against this file")
    p.add_argument("--n", type=int, default=6, help="n-gram order for the distinct-n ratio")
    p.add_argument("--out", help="report JSON")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("leakage-report", help="score-gap shift from single- to multi-reference scoring")
    p.add_argument("--single", required=True, help="summary JSON scored with the single gold reference")
    p.add_argument("--multi", required=True, help="summary JSON scored with multiple references")
    p.add_argument("--metric", help="metric to compare (required when summaries hold several)")
    p.add_argument("--pair", action="append", required=True, metavar="A,B",
                   help="system pair to compare; repeatable")
    p.add_argument("--out", help="report JSON")
    p.set_defaults(func=cmd_leakage_report)

    return parser


def _subparser_for(parser: argparse.ArgumentParser, command: str):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices.get(command)
    return None


def _apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Fill flags the user left at their default from the --config JSON."""
    if not args.config:
        return
    with open(args.config, encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise ValueError("--config must hold a JSON object")
    sub = _subparser_for(parser, args.command)
    sub_dests = {action.dest for action in sub._actions} if sub is not None else set()
    for key, value in config.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest == "func":
            continue
        owner = sub if dest in sub_dests else parser
        if getattr(args, dest) == owner.get_default(dest):
            setattr(args, dest, value)


def _format_table(headers, rows) -> str:
    rows = [[str(c) for c in row] for row in rows]
    widths = [
        max(len(header), *(len(row[i]) for row in rows)) if rows else len(header)
        for i, header in enumerate(headers)
    ]
    def fmt(row):
        return "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


# ---------------------------------------------------------------- generate


def _resolve_template(args) -> refgen.PromptTemplate:
    if args.template == "custom":
        if not args.template_file:
            raise ValueError("--template custom requires --template-file")
        with open(args.template_file, encoding="utf-8") as handle:
            spec = json.load(handle)
        return refgen.PromptTemplate(
            rules=spec["rules"],
            task_description=spec["task_description"],
            include_ground_truth=bool(spec.get("include_ground_truth", True)),
            language="custom",
        )
    try:
        return refgen.BUILTIN_TEMPLATES[(args.task, args.template)]
    except KeyError:
        raise ValueError(f"no built-in {args.template} template for task {args.task!r}")


def cmd_generate(args) -> int:
    segments = corpus_io.load_segments(args.segments)
    template = _resolve_template(args)

    include_gt = args.ground_truth
    if include_gt is None:
        include_gt = all(segment.gold_refs for segment in segments)
    if include_gt != template.include_ground_truth:
        template = refgen.PromptTemplate(
            rules=template.rules,
            task_description=template.task_description,
            include_ground_truth=include_gt,
            language=template.language,
        )

    n_references = args.n_references
    if n_references is None:
        n_references = refgen.DEFAULT_N_REFERENCES[args.task]
    cfg = refgen.GenerationConfig(
        model_name=args.model,
        n_references=n_references,
        endpoint_url=args.endpoint,
        max_retries=args.max_retries,
        timeout=args.timeout,
        concurrency=args.jobs,
    )
    transport = refgen.MockTransport() if args.mock else refgen.HttpChatTransport()

    done = refgen.completed_segment_ids(args.out)
    items = [
        (s.id, s.source, s.gold_refs[0] if s.gold_refs else None) for s in segments
    ]
    records = refgen.generate_references(
        items, template, cfg, transport, out_path=args.out, skip_ids=done
    )
    failed = [r.segment_id for r in records if not r.succeeded]
    print(
        f"generate: {len(records) - len(failed)} segments done, "
        f"{len(done)} skipped (already complete), {len(failed)} failed"
    )
    if failed:
        print(f"generate: failed segments: {', '.join(failed[:10])}", file=sys.stderr)
    return 0


# ------------------------------------------------------------------ select


def cmd_select(args) -> int:
    records = refgen.load_generation_records(args.refs)
    report: dict[str, dict] = {}
    kept_total = 0
    candidate_total = 0
    rows = []
    with open(args.out, "w", encoding="utf-8") as handle:
        for record in records:
            if not record.succeeded:
                handle.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
                continue
            candidates = list(record.candidates)
            if len(candidates) == 1:
                scores: list[float] = []
                kept = [0]
            else:
                tokenized = [tokenize_words(c, lowercase=args.lowercase) for c in candidates]
                scores = diversity.self_bleu(tokenized)
                kept = diversity.selection_survivors(scores, args.threshold)
            survivors = [candidates[i] for i in kept]
            filtered = refgen.GenerationRecord(
                segment_id=record.segment_id,
                prompt_used=record.prompt_used,
                raw_response=record.raw_response,
                candidates=tuple(survivors),
                attempt_count=record.attempt_count,
                timestamp=record.timestamp,
            )
            handle.write(json.dumps(filtered.to_json(), ensure_ascii=False) + "\n")
            report[record.segment_id] = {"self_bleu": scores, "kept_indices": kept}
            kept_total += len(kept)
            candidate_total += len(candidates)
            rows.append(
                [
                    record.segment_id,
                    len(candidates),
                    len(kept),
                    f"{min(scores):.2f}" if scores else "-",
                    f"{max(scores):.2f}" if scores else "-",
                ]
            )
    shown = rows[:40]
    print(_format_table(["segment", "in", "kept", "min self-bleu", "max self-bleu"], shown))
    if len(rows) > len(shown):
        print(f"... {len(rows) - len(shown)} more segments (full report via --report)")
    print(f"select: kept {kept_total}/{candidate_total} candidates (threshold {args.threshold})")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(report, handle, ensure_ascii=False, indent=2)
    return 0


# ------------------------------------------------------------------- score


class _Scorer:
    """Per-metric segment and corpus scoring over raw hypothesis/reference text."""

    def __init__(self, args):
        self.cfg = BleuConfig(
            max_order=args.max_order,
            smoothing=args.smoothing,
            effective_ref_length=args.ref_length,
        )
        self.chrf_order = args.chrf_order
        self.chrf_beta = args.chrf_beta
        self.lowercase = args.lowercase
        self.pretokenized = args.pretokenized
        self.vocab = load_subword_vocab(args.vocab) if args.vocab else None

    def _words(self, text: str) -> list[str]:
        return list(tokenize_words(text, lowercase=self.lowercase).tokens)

    def _pieces(self, text: str) -> list[str]:
        if self.pretokenized:
            return text.split()
        return list(tokenize_subwords(text, self.vocab, lowercase=self.lowercase).tokens)

    def segment(self, metric: str, hyp: str, refs: list[str]) -> float:
        if metric == "bleu":
            return bleu_sentence(self._words(hyp), [self._words(r) for r in refs], self.cfg).value
        if metric == "spbleu":
            return bleu_sentence(self._pieces(hyp), [self._pieces(r) for r in refs], self.cfg).value
        if metric == "chrf":
            return chrf_sentence(hyp, refs, self.chrf_order, self.chrf_beta, self.lowercase).value
        if metric == "rouge1":
            return rouge_n(self._words(hyp), [self._words(r) for r in refs], 1).value
        if metric == "rouge2":
            return rouge_n(self._words(hyp), [self._words(r) for r in refs], 2).value
        if metric == "rougeL":
            return rouge_l(self._words(hyp), [self._words(r) for r in refs]).value
        raise ValueError(f"unknown metric {metric!r}")

    def corpus(self, metric: str, pairs: list[tuple[str, list[str]]]) -> float:
        if metric == "bleu":
            token_pairs = [
                (self._words(h), [self._words(r) for r in refs]) for h, refs in pairs
            ]
            return bleu_corpus(token_pairs, self.cfg).value
        if metric == "spbleu":
            token_pairs = [
                (self._pieces(h), [self._pieces(r) for r in refs]) for h, refs in pairs
            ]
            return bleu_corpus(token_pairs, self.cfg).value
        if metric == "chrf":
            return chrf_corpus(pairs, self.chrf_order, self.chrf_beta, self.lowercase).value
        # ROUGE has no closed corpus form; report the mean segment score.
        values = [self.segment(metric, h, refs) for h, refs in pairs]
        return sum(values) / len(values)


def _parse_sweep(spec: str) -> tuple[int, int]:
    try:
        low, high = spec.split("..", 1)
        low, high = int(low), int(high)
    except ValueError:
        raise ValueError(f"--sweep-refs expects A..B, got {spec!r}")
    if low < 1 or high < low:
        raise ValueError(f"invalid sweep range {spec!r}")
    return low, high


def _ref_ids(segment: corpus_io.Segment, mode: str, max_generated) -> list[tuple[str, str]]:
    generated = list(segment.generated_refs)
    if max_generated is not None:
        generated = generated[:max_generated]
    ids = []
    if mode in ("gold", "both"):
        ids.extend((f"gold:{i}", text) for i, text in enumerate(segment.gold_refs))
    if mode in ("generated", "both"):
        ids.extend((f"gen:{i}", text) for i, text in enumerate(generated))
    return ids


def cmd_score(args) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for metric in metrics:
        if metric not in METRIC_CHOICES:
            raise ValueError(f"unknown metric {metric!r}; choose from {', '.join(METRIC_CHOICES)}")
    if "spbleu" in metrics and not args.vocab and not args.pretokenized:
        raise ValueError("spbleu requires --vocab unless --pretokenized is set")

    corpus = corpus_io.load_corpus(args.segments, args.outputs)
    if args.generated_refs:
        records = refgen.load_generation_records(args.generated_refs)
        corpus = corpus_io.merge_references(corpus, records, use_gold=True)
    mode = args.refs or ("generated" if args.generated_refs else "gold")
    if mode in ("generated", "both") and not args.generated_refs:
        raise ValueError(f"--refs {mode} requires --generated-refs")

    scorer = _Scorer(args)
    segments_by_id = {segment.id: segment for segment in corpus.segments}

    def pairs_for(system: str, max_generated) -> list[tuple[str, str, list[str]]]:
        triples = []
        for segment_id, hyp in sorted(corpus.systems[system].items()):
            segment = segments_by_id[segment_id]
            refs = segment.scoring_refs(mode, max_generated)
            if not refs:
                raise ValueError(
                    f"segment {segment_id!r} has no references under --refs {mode}"
                )
            triples.append((segment_id, hyp, refs))
        return triples

    if not corpus.systems:
        raise ValueError("no system outputs to score")

    if args.sweep_refs:
        if mode == "gold":
            raise ValueError("--sweep-refs varies generated references; use --refs generated or both")
        if args.max_refs is not None:
            raise ValueError("--sweep-refs and --max-refs are mutually exclusive")
        if args.per_reference or args.out:
            raise ValueError("--sweep-refs emits a score series; --per-reference/--out do not apply")
        low, high = _parse_sweep(args.sweep_refs)
        series = []
        for k in range(low, high + 1):
            for system in sorted(corpus.systems):
                triples = pairs_for(system, k)
                for metric in metrics:
                    value = scorer.corpus(metric, [(h, refs) for _sid, h, refs in triples])
                    series.append(
                        {"metric": metric, "system": system, "refs": k, "score": value}
                    )
        print(_format_table(
            ["metric", "system", "refs", "score"],
            [[r["metric"], r["system"], r["refs"], f"{r['score']:.2f}"] for r in series],
        ))
        if args.summary:
            with open(args.summary, "w", encoding="utf-8") as handle:
                json.dump({"sweep": series}, handle, ensure_ascii=False, indent=2)
        return 0

    summary: dict[str, dict[str, float]] = {}
    matrices: list[ScoreMatrix] = []
    for metric in metrics:
        rows: list[MatrixRow] = []
        per_system: dict[str, float] = {}
        for system in sorted(corpus.systems):
            triples = pairs_for(system, args.max_refs)

            def row_for(triple) -> MatrixRow:
                segment_id, hyp, refs = triple
                if args.per_reference:
                    segment = segments_by_id[segment_id]
                    cells = {
                        ref_id: scorer.segment(metric, hyp, [text])
                        for ref_id, text in _ref_ids(segment, mode, args.max_refs)
                    }
                else:
                    cells = {"all": scorer.segment(metric, hyp, refs)}
                return MatrixRow(system=system, segment=segment_id, scores=cells)

            if args.jobs > 1:
                with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                    rows.extend(pool.map(row_for, triples))
            else:
                rows.extend(row_for(t) for t in triples)
            per_system[system] = scorer.corpus(
                metric, [(h, refs) for _sid, h, refs in triples]
            )
        matrices.append(ScoreMatrix(metric_name=metric, rows=rows))
        summary[metric] = per_system

    table = [
        [metric, system, f"{score:.2f}"]
        for metric, per_system in summary.items()
        for system, score in sorted(per_system.items())
    ]
    print(_format_table(["metric", "system", "score"], table))

    if args.out:
        for i, matrix in enumerate(matrices):
            write_score_matrix(args.out, matrix, append=i > 0)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as handle:
            json.dump(
                {"metrics": summary, "refs_mode": mode, "max_refs": args.max_refs},
                handle,
                ensure_ascii=False,
                indent=2,
            )
    return 0


# ----------------------------------------------------------------- combine


def _policy_from(args) -> CombinePolicy:
    if args.policy == "top_k_mean":
        if args.k is None:
            raise ValueError("--policy top_k_mean requires --k")
        return CombinePolicy("top_k_mean", args.k)
    if args.k is not None:
        raise ValueError("--k is only valid with --policy top_k_mean")
    return CombinePolicy(args.policy)


def cmd_combine(args) -> int:
    policy = _policy_from(args)
    matrices = load_score_matrices(args.matrix)
    if not matrices:
        raise ValueError(f"no rows found in {args.matrix}")
    summary: dict[str, dict[str, float]] = {}
    out_handle = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        for metric, matrix in sorted(matrices.items()):
            combined = combine_matrix(matrix, policy)
            per_system_segments: dict[str, dict[str, float]] = {}
            for (system, segment), score in combined.items():
                per_system_segments.setdefault(system, {})[segment] = score
                if out_handle is not None:
                    out_handle.write(
                        json.dumps(
                            {"system": system, "segment": segment, "score": score, "metric": metric},
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
            summary[metric] = {
                system: system_score(scores)
                for system, scores in per_system_segments.items()
            }
    finally:
        if out_handle is not None:
            out_handle.close()
    table = [
        [metric, system, f"{score:.2f}"]
        for metric, per_system in summary.items()
        for system, score in sorted(per_system.items())
    ]
    print(_format_table(["metric", "system", "score"], table))
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as handle:
            json.dump({"metrics": summary, "policy": args.policy, "k": args.k}, handle, indent=2)
    return 0


# ---------------------------------------------------------------- metaeval


def _report_to_json(report: metaeval.MetaEvalReport) -> dict:
    return {
        "metric": report.metric,
        "name": report.name,
        "pairwise_accuracy": report.pairwise_accuracy,
        "n_pairs_used": report.n_pairs_used,
        "pearson": report.pearson,
        "kendall": report.kendall,
        "spearman": report.spearman,
        "n_systems": report.n_systems,
        "n_segments": report.n_segments,
    }


def cmd_metaeval(args) -> int:
    policy = _policy_from(args)
    matrices = load_score_matrices(args.matrix)
    if not matrices:
        raise ValueError(f"no rows found in {args.matrix}")
    judgments = metaeval.load_human_judgments(args.human)
    reports = []
    for metric, matrix in sorted(matrices.items()):
        combined = combine_matrix(matrix, policy)
        reports.append(
            metaeval.meta_evaluate(combined, judgments, metric_name=metric, name=args.name)
        )
    rows = []
    for report in reports:
        rows.append(
            [
                report.metric,
                report.name or "-",
                f"{report.pairwise_accuracy:.3f}",
                str(report.n_pairs_used),
                f"{report.pearson:.3f}",
                f"{report.kendall:.3f}" if report.kendall is not None else "-",
                ";".join(f"{d}={v:.3f}" for d, v in (report.spearman or {}).items()) or "-",
            ]
        )
    print(
        _format_table(
            ["metric", "name", "accuracy", "pairs", "pearson", "kendall", "spearman"], rows
        )
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump([_report_to_json(r) for r in reports], handle, indent=2)
    return 0


# --------------------------------------------------------------- diversity


def cmd_diversity(args) -> int:
    known = None
    if args.segments:
        known = {s.id for s in corpus_io.load_segments(args.segments)}
    systems = corpus_io.load_outputs(args.outputs, known)
    if not systems:
        raise ValueError(f"no system outputs found in {args.outputs}")
    rows = []
    report = {}
    for system in sorted(systems):
        tokenized = [
            tokenize_words(text, lowercase=args.lowercase)
            for _segment, text in sorted(systems[system].items())
        ]
        summary = diversity.diversity_report(tokenized, n=args.n)
        report[system] = {
            "distinct_n": summary.distinct_n,
            "n": summary.n,
            "unique_tokens": summary.unique_tokens,
        }
        rows.append([system, f"{summary.distinct_n:.4f}", str(summary.unique_tokens)])
    print(_format_table(["system", f"distinct-{args.n}", "unique tokens"], rows))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2)
    return 0


# ---------------------------------------------------------- leakage-report


def _load_system_scores(path: str, metric: str | None) -> tuple[str, dict[str, float]]:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if isinstance(data, dict) and "metrics" in data:
        metrics = data["metrics"]
        if metric is None:
            if len(metrics) != 1:
                raise ValueError(
                    f"{path} holds {sorted(metrics)}; pick one with --metric"
                )
            metric = next(iter(metrics))
        if metric not in metrics:
            raise ValueError(f"metric {metric!r} not present in {path}")
        return metric, {str(k): float(v) for k, v in metrics[metric].items()}
    if isinstance(data, dict):
        return metric or "score", {str(k): float(v) for k, v in data.items()}
    raise ValueError(f"{path} is not a summary JSON")


def cmd_leakage_report(args) -> int:
    metric, single = _load_system_scores(args.single, args.metric)
    _, multi = _load_system_scores(args.multi, args.metric or metric)
    rows = []
    out = []
    for pair in args.pair:
        try:
            a, b = (part.strip() for part in pair.split(",", 1))
        except ValueError:
            raise ValueError(f"--pair expects A,B, got {pair!r}")
        report = metaeval.leakage_gap(single, multi, a, b)
        rows.append(
            [
                f"{a} vs {b}",
                f"{report.delta_single:+.2f}",
                f"{report.delta_multi:+.2f}",
                f"{report.shrinkage:+.2f}",
                f"{report.ratio:.3f}" if report.ratio is not None else "-",
            ]
        )
        out.append(
            {
                "metric": metric,
                "system_a": a,
                "system_b": b,
                "delta_single": report.delta_single,
                "delta_multi": report.delta_multi,
                "shrinkage": report.shrinkage,
                "ratio": report.ratio,
            }
        )
    print(
        _format_table(
            ["pair", "delta single-ref", "delta multi-ref", "shrinkage", "ratio"], rows
        )
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(out, handle, indent=2)
    return 0


# -------------------------------------------------------------------- main


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(parser, args)
        return args.func(args)
    except (MultirefError, ValueError, OSError) as exc:
        print(f"multiref: error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
