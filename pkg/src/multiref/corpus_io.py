"""Ingestion and persistence of test sets, system outputs, and reference sets.

All interchange formats are JSONL, one UTF-8 record per line:

- segments.jsonl: ``{"id", "source", "gold_refs": [..]}``
- outputs.jsonl:  ``{"system", "segment", "hypothesis"}``
- refs.jsonl:     generation records (see refgen)
- human.jsonl:    human judgments (see metaeval)
- matrix.jsonl:   score matrices (see combine)

Loaded corpora are fully cross-validated (every hypothesis keyed to a known
segment) and treated as immutable afterwards.
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import CorpusFormatError


@dataclass(frozen=True)
class Segment:
    """One source item with its gold and generated references."""

    id: str
    source: str
    gold_refs: tuple[str, ...] = ()
    generated_refs: tuple[str, ...] = ()

    def scoring_refs(self, mode: str = "both", max_generated: int | None = None):
        """Reference texts used for scoring: 'gold', 'generated', or 'both'.

        `max_generated` caps the generated list (generation order) for
        reference-count sweeps; gold references are never capped.
        """
        if mode not in ("gold", "generated", "both"):
            raise ValueError(f"unknown reference mode {mode!r}")
        generated = list(self.generated_refs)
        if max_generated is not None:
            generated = generated[:max_generated]
        if mode == "gold":
            return list(self.gold_refs)
        if mode == "generated":
            return generated
        return list(self.gold_refs) + generated


@dataclass
class EvalCorpus:
    """Segments plus per-system hypotheses for one language pair or task."""

    name: str
    segments: list[Segment] = field(default_factory=list)
    systems: dict[str, dict[str, str]] = field(default_factory=dict)

    def segment_ids(self) -> list[str]:
        return [segment.id for segment in self.segments]

    def segment(self, segment_id: str) -> Segment:
        for segment in self.segments:
            if segment.id == segment_id:
                return segment
        raise KeyError(segment_id)


def _iter_jsonl(path: Path):
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON: {exc}", str(path), lineno)


def load_segments(path: str | Path) -> list[Segment]:
    path = Path(path)
    segments: list[Segment] = []
    seen: set[str] = set()
    for lineno, record in _iter_jsonl(path):
        try:
            segment = Segment(
                id=str(record["id"]),
                source=str(record["source"]),
                gold_refs=tuple(str(r) for r in record.get("gold_refs", [])),
            )
        except (KeyError, TypeError) as exc:
            raise CorpusFormatError(f"invalid segment: {exc}", str(path), lineno)
        if segment.id in seen:
            raise CorpusFormatError(f"duplicate segment id {segment.id!r}", str(path), lineno)
        seen.add(segment.id)
        segments.append(segment)
    if not segments:
        raise CorpusFormatError("no segments found", str(path))
    return segments


def load_outputs(
    path: str | Path, known_ids: set[str] | None = None
) -> dict[str, dict[str, str]]:
    """Load outputs.jsonl; segment ids are validated when known_ids is given."""
    path = Path(path)
    systems: dict[str, dict[str, str]] = {}
    for lineno, record in _iter_jsonl(path):
        try:
            system = str(record["system"])
            segment = str(record["segment"])
            hypothesis = str(record["hypothesis"])
        except (KeyError, TypeError) as exc:
            raise CorpusFormatError(f"invalid output record: {exc}", str(path), lineno)
        if known_ids is not None and segment not in known_ids:
            raise CorpusFormatError(
                f"hypothesis references unknown segment {segment!r}", str(path), lineno
            )
        per_system = systems.setdefault(system, {})
        if segment in per_system:
            raise CorpusFormatError(
                f"duplicate hypothesis for ({system!r}, {segment!r})", str(path), lineno
            )
        per_system[segment] = hypothesis
    return systems


def load_corpus(
    segments_path: str | Path,
    outputs_path: str | Path | None = None,
    name: str = "corpus",
) -> EvalCorpus:
    """Load and cross-validate a corpus from its JSONL files."""
    segments = load_segments(segments_path)
    systems = {}
    if outputs_path is not None:
        systems = load_outputs(outputs_path, {s.id for s in segments})
    return EvalCorpus(name=name, segments=segments, systems=systems)


def save_segments(path: str | Path, segments) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for segment in segments:
            record = {
                "id": segment.id,
                "source": segment.source,
                "gold_refs": list(segment.gold_refs),
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def save_outputs(path: str | Path, systems: dict[str, dict[str, str]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for system in sorted(systems):
            for segment in sorted(systems[system]):
                record = {
                    "system": system,
                    "segment": segment,
                    "hypothesis": systems[system][segment],
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def merge_references(corpus: EvalCorpus, records, use_gold: bool) -> EvalCorpus:
    """Attach generated candidates to segments and fix the scoring reference set.

    Successful records populate generated_refs; gold references are kept for
    scoring only when use_gold is true. Records for unknown segment ids are
    an error; segments without a record keep an empty generated list.
    """
    known = set(corpus.segment_ids())
    by_segment: dict[str, tuple[str, ...]] = {}
    for record in records:
        if record.segment_id not in known:
            raise ValueError(f"record references unknown segment {record.segment_id!r}")
        if record.succeeded:
            by_segment[record.segment_id] = tuple(record.candidates)
    merged = [
        replace(
            segment,
            generated_refs=by_segment.get(segment.id, ()),
            gold_refs=segment.gold_refs if use_gold else (),
        )
        for segment in corpus.segments
    ]
    return EvalCorpus(name=corpus.name, segments=merged, systems=dict(corpus.systems))


def segments_from_tsv(
    source_path: str | Path, reference_paths=()
) -> list[Segment]:
    """Thin converter for ``id<TAB>text`` files into Segment records.

    The source file defines the segment ids; each reference file contributes
    one gold reference per id it covers.
    """

    def read_tsv(path: Path) -> dict[str, str]:
        rows: dict[str, str] = {}
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                if "\t" not in line:
                    raise CorpusFormatError("expected id<TAB>text", str(path), lineno)
                key, text = line.split("\t", 1)
                if key in rows:
                    raise CorpusFormatError(f"duplicate id {key!r}", str(path), lineno)
                rows[key] = text
        return rows

    sources = read_tsv(Path(source_path))
    references = [read_tsv(Path(p)) for p in reference_paths]
    segments = []
    for key, text in sources.items():
        gold = tuple(ref[key] for ref in references if key in ref)
        segments.append(Segment(id=key, source=text, gold_refs=gold))
    return segments
