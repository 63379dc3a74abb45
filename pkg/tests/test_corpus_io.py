import pytest

from multiref.corpus_io import (
    EvalCorpus,
    Segment,
    load_corpus,
    load_outputs,
    load_segments,
    merge_references,
    save_outputs,
    save_segments,
    segments_from_tsv,
)
from multiref.errors import CorpusFormatError
from multiref.refgen import GenerationRecord


def record(segment_id, candidates, error=None):
    return GenerationRecord(
        segment_id=segment_id,
        prompt_used="p",
        raw_response="r",
        candidates=tuple(candidates),
        attempt_count=1,
        timestamp="2024-01-01T00:00:00+00:00",
        error=error,
    )


class TestLoadCorpus:
    def test_minimal_fixture(self, tmp_path, jsonl_writer):
        seg_path = tmp_path / "segments.jsonl"
        out_path = tmp_path / "outputs.jsonl"
        jsonl_writer(
            seg_path,
            [
                {"id": "s1", "source": "src1", "gold_refs": ["g1"]},
                {"id": "s2", "source": "src2", "gold_refs": []},
            ],
        )
        jsonl_writer(
            out_path,
            [
                {"system": "sysA", "segment": "s1", "hypothesis": "h1"},
                {"system": "sysA", "segment": "s2", "hypothesis": "h2"},
            ],
        )
        corpus = load_corpus(seg_path, out_path, name="test")
        assert len(corpus.segments) == 2
        assert corpus.systems["sysA"]["s2"] == "h2"

    def test_unknown_segment_reports_line(self, tmp_path, jsonl_writer):
        seg_path = tmp_path / "segments.jsonl"
        out_path = tmp_path / "outputs.jsonl"
        jsonl_writer(seg_path, [{"id": "s1", "source": "x"}])
        jsonl_writer(
            out_path,
            [
                {"system": "a", "segment": "s1", "hypothesis": "h"},
                {"system": "a", "segment": "mystery", "hypothesis": "h"},
            ],
        )
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(seg_path, out_path)
        assert err.value.line == 2
        assert "mystery" in str(err.value)

    def test_duplicate_segment_id_rejected(self, tmp_path, jsonl_writer):
        path = tmp_path / "segments.jsonl"
        jsonl_writer(path, [{"id": "s1", "source": "a"}, {"id": "s1", "source": "b"}])
        with pytest.raises(CorpusFormatError) as err:
            load_segments(path)
        assert err.value.line == 2

    def test_duplicate_hypothesis_rejected(self, tmp_path, jsonl_writer):
        path = tmp_path / "outputs.jsonl"
        jsonl_writer(
            path,
            [
                {"system": "a", "segment": "s1", "hypothesis": "x"},
                {"system": "a", "segment": "s1", "hypothesis": "y"},
            ],
        )
        with pytest.raises(CorpusFormatError):
            load_outputs(path, {"s1"})

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "segments.jsonl"
        path.write_text('{"id": "s1", "source": "a"}\n{broken\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_segments(path)
        assert err.value.line == 2

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "segments.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(CorpusFormatError):
            load_segments(path)

    def test_roundtrip(self, tmp_path):
        segments = [
            Segment(id="s1", source="src 猫", gold_refs=("g1", "g2")),
            Segment(id="s2", source="src2"),
        ]
        systems = {"sysA": {"s1": "h1", "s2": "h2"}, "sysB": {"s1": "h3"}}
        seg_path = tmp_path / "segments.jsonl"
        out_path = tmp_path / "outputs.jsonl"
        save_segments(seg_path, segments)
        save_outputs(out_path, systems)
        corpus = load_corpus(seg_path, out_path)
        assert corpus.segments == segments
        assert corpus.systems == systems


class TestMergeReferences:
    def corpus(self):
        return EvalCorpus(
            name="t",
            segments=[
                Segment(id="s1", source="x", gold_refs=("gold1",)),
                Segment(id="s2", source="y", gold_refs=("gold2",)),
            ],
        )

    def test_generated_only(self):
        merged = merge_references(
            self.corpus(), [record("s1", ["c1", "c2"])], use_gold=False
        )
        seg = merged.segment("s1")
        assert seg.generated_refs == ("c1", "c2")
        assert seg.scoring_refs("both") == ["c1", "c2"]

    def test_gold_included_when_requested(self):
        merged = merge_references(
            self.corpus(), [record("s1", ["c1"])], use_gold=True
        )
        assert merged.segment("s1").scoring_refs("both") == ["gold1", "c1"]

    def test_failed_records_contribute_nothing(self):
        merged = merge_references(
            self.corpus(), [record("s1", [], error="bad")], use_gold=False
        )
        assert merged.segment("s1").scoring_refs("both") == []

    def test_unknown_segment_rejected(self):
        with pytest.raises(ValueError):
            merge_references(self.corpus(), [record("sX", ["c"])], use_gold=True)

    def test_original_untouched(self):
        corpus = self.corpus()
        merge_references(corpus, [record("s1", ["c"])], use_gold=False)
        assert corpus.segment("s1").gold_refs == ("gold1",)
        assert corpus.segment("s1").generated_refs == ()


class TestScoringRefs:
    segment = Segment(
        id="s", source="x", gold_refs=("g1",), generated_refs=("c1", "c2", "c3")
    )

    def test_modes(self):
        assert self.segment.scoring_refs("gold") == ["g1"]
        assert self.segment.scoring_refs("generated") == ["c1", "c2", "c3"]
        assert self.segment.scoring_refs("both") == ["g1", "c1", "c2", "c3"]

    def test_max_generated_caps_only_generated(self):
        assert self.segment.scoring_refs("both", max_generated=2) == ["g1", "c1", "c2"]
        assert self.segment.scoring_refs("generated", max_generated=0) == []

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            self.segment.scoring_refs("everything")


class TestTsvImport:
    def test_source_and_two_reference_files(self, tmp_path):
        src = tmp_path / "src.tsv"
        ref_a = tmp_path / "ref_a.tsv"
        ref_b = tmp_path / "ref_b.tsv"
        src.write_text("s1\thello\ns2\tworld\n", encoding="utf-8")
        ref_a.write_text("s1\tbonjour\ns2\tmonde\n", encoding="utf-8")
        ref_b.write_text("s1\tsalut\n", encoding="utf-8")
        segments = segments_from_tsv(src, [ref_a, ref_b])
        assert segments[0].gold_refs == ("bonjour", "salut")
        assert segments[1].gold_refs == ("monde",)

    def test_missing_tab_reports_line(self, tmp_path):
        src = tmp_path / "src.tsv"
        src.write_text("s1\thello\nbroken line\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            segments_from_tsv(src)
        assert err.value.line == 2
