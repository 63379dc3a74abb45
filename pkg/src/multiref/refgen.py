"""Reference-candidate generation through an OpenAI-compatible chat endpoint.

A prompt is a deterministic concatenation of a rules block, a task
description parameterized by the number of requested candidates, the source
text, and an optional labeled ground-truth block. All candidates for a
segment are requested in a single completion (asking for many at once
measurably improves their quality), parsed from a numbered list, and
persisted append-only so interrupted runs resume where they stopped.
"""

import json
import os
import threading
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import CorpusFormatError, MalformedResponseError, TransportError

LANGUAGES = ("english", "chinese", "custom")

#: Environment variables consulted for the API key, in order.
API_KEY_ENV_VARS = ("MULTIREF_API_KEY", "OPENAI_API_KEY")

N_PLACEHOLDER = "{n}"
SOURCE_PLACEHOLDER = "{source}"
GROUND_TRUTH_LABEL = "Ground Truth:"


@dataclass(frozen=True)
class PromptTemplate:
    """Rules + parameterized task description, optionally with a gold block."""

    rules: str
    task_description: str
    include_ground_truth: bool = True
    language: str = "english"

    def __post_init__(self):
        if self.language not in LANGUAGES:
            raise ValueError(f"unknown template language {self.language!r}")
        for placeholder in (N_PLACEHOLDER, SOURCE_PLACEHOLDER):
            if self.task_description.count(placeholder) != 1:
                raise ValueError(
                    f"task_description must contain exactly one {placeholder!r}"
                )


ENGLISH_TRANSLATION = PromptTemplate(
    rules=(
        "You are a professional translator fluent in the source and target "
        "languages. Produce accurate, natural translations that differ from "
        "each other in wording. Output a numbered list, one translation per "
        "line, with no commentary."
    ),
    task_description=(
        "Please provide {n} high-quality, diverse translations of the "
        "following source text:\n{source}"
    ),
    language="english",
)

ENGLISH_SUMMARIZATION = PromptTemplate(
    rules=(
        "You are a professional editor. Write faithful, fluent summaries that "
        "differ from each other in wording. Output a numbered list, one "
        "summary per line, with no commentary."
    ),
    task_description=(
        "Please provide {n} high-quality, diverse summaries of the following "
        "text:\n{source}"
    ),
    language="english",
)

CHINESE_TRANSLATION = PromptTemplate(
    rules=(
        "你是一位精通源语言和目标语言的专业翻译。请给出准确、自然且措辞各不相同"
        "的译文。按编号列表输出，每行一条，不要附加任何说明。"
    ),
    task_description="请为下面的原文提供{n}条高质量且多样化的译文：\n{source}",
    language="chinese",
)

BUILTIN_TEMPLATES = {
    ("translation", "english"): ENGLISH_TRANSLATION,
    ("translation", "chinese"): CHINESE_TRANSLATION,
    ("summarization", "english"): ENGLISH_SUMMARIZATION,
}

#: Candidates requested per segment, per task.
DEFAULT_N_REFERENCES = {"translation": 40, "summarization": 10}


@dataclass(frozen=True)
class GenerationConfig:
    model_name: str = "gpt-3.5-turbo"
    n_references: int = 40
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    max_retries: int = 3
    timeout: float = 120.0
    concurrency: int = 1

    def __post_init__(self):
        if self.n_references < 1:
            raise ValueError("n_references must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")


@dataclass(frozen=True)
class GenerationRecord:
    """Audit record of one segment's generation attempt(s)."""

    segment_id: str
    prompt_used: str
    raw_response: str
    candidates: tuple[str, ...]
    attempt_count: int
    timestamp: str
    error: str | None = None

    @property
    def succeeded(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "prompt_used": self.prompt_used,
            "raw_response": self.raw_response,
            "candidates": list(self.candidates),
            "attempt_count": self.attempt_count,
            "timestamp": self.timestamp,
            "error": self.error,
        }

    @classmethod
    def from_json(cls, record: dict) -> "GenerationRecord":
        return cls(
            segment_id=str(record["segment_id"]),
            prompt_used=str(record.get("prompt_used", "")),
            raw_response=str(record.get("raw_response", "")),
            candidates=tuple(str(c) for c in record.get("candidates", [])),
            attempt_count=int(record.get("attempt_count", 1)),
            timestamp=str(record.get("timestamp", "")),
            error=record.get("error"),
        )


def build_prompt(
    template: PromptTemplate, source: str, ground_truth: str | None, n: int
) -> str:
    """Deterministically assemble the full prompt string."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if template.include_ground_truth and ground_truth is None:
        raise ValueError("template expects a ground truth but none was given")
    if not template.include_ground_truth and ground_truth is not None:
        raise ValueError("template does not take a ground truth")
    task = template.task_description.replace(N_PLACEHOLDER, str(n)).replace(
        SOURCE_PLACEHOLDER, source
    )
    parts = [template.rules, task]
    if template.include_ground_truth:
        parts.append(f"{GROUND_TRUTH_LABEL}\n{ground_truth}")
    return "\n\n".join(parts)


def parse_candidates(raw: str, expected_n: int) -> list[str]:
    """Extract exactly expected_n candidates from a model response.

    Primary format is a numbered list ("1. ..." or "1) ..."); lines that do
    not start a new item continue the previous one. When no numbering is
    found at all, each non-empty line counts as one candidate. Any other
    shape raises MalformedResponseError.
    """
    if not raw.strip():
        raise MalformedResponseError("empty response")
    items: list[str] = []
    numbered = False
    for line in raw.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        head, sep, rest = _split_numbering(stripped)
        if sep:
            numbered = True
            items.append(rest.strip())
        elif numbered and items:
            items[-1] = f"{items[-1]} {stripped}".strip()
        else:
            items.append(stripped)
    items = [item for item in items if item]
    if len(items) != expected_n:
        raise MalformedResponseError(
            f"expected {expected_n} candidates, parsed {len(items)}"
        )
    return items


def _split_numbering(line: str):
    i = 0
    while i < len(line) and line[i].isdigit():
        i += 1
    if 0 < i and i < len(line) and line[i] in ".)":
        return line[:i], line[i], line[i + 1 :]
    return line, "", ""


class MockTransport:
    """Deterministic in-process stand-in for a chat endpoint.

    Responds with a numbered list of simple source permutations; a sequence
    of canned responses (or exceptions) can be scripted for tests.
    """

    def __init__(self, scripted=None):
        self.scripted = list(scripted) if scripted is not None else None
        self.calls: list[str] = []

    def complete(self, prompt: str, cfg: GenerationConfig) -> str:
        self.calls.append(prompt)
        if self.scripted is not None:
            if not self.scripted:
                raise TransportError("mock transport script exhausted")
            item = self.scripted.pop(0)
            if isinstance(item, Exception):
                raise item
            return item
        return self._synthesize(prompt, cfg.n_references)

    @staticmethod
    def _synthesize(prompt: str, n: int) -> str:
        source = prompt.splitlines()[-1] if prompt else ""
        words = source.split() or ["output"]
        lines = []
        for i in range(n):
            rotated = words[i % len(words) :] + words[: i % len(words)]
            lines.append(f"{i + 1}. {' '.join(rotated)} (v{i + 1})")
        return "\n".join(lines)


class HttpChatTransport:
    """Minimal OpenAI-compatible chat completions client (stdlib only).

    Rate-limit (429) and transient server errors are retried with exponential
    backoff; authentication and client errors abort immediately.
    """

    TRANSIENT_STATUS = {429, 500, 502, 503, 504}
    MAX_TRANSIENT_RETRIES = 5

    def __init__(self, api_key: str | None = None):
        self.api_key = api_key if api_key is not None else resolve_api_key()
        if not self.api_key:
            raise TransportError(
                "no API key: set MULTIREF_API_KEY (or OPENAI_API_KEY)"
            )

    def complete(self, prompt: str, cfg: GenerationConfig) -> str:
        body = json.dumps(
            {
                "model": cfg.model_name,
                "messages": [{"role": "user", "content": prompt}],
            }
        ).encode("utf-8")
        delay = 1.0
        for attempt in range(self.MAX_TRANSIENT_RETRIES + 1):
            request = urllib.request.Request(
                cfg.endpoint_url,
                data=body,
                headers={
                    "Content-Type": "application/json",
                    "Authorization": f"Bearer {self.api_key}",
                },
                method="POST",
            )
            try:
                with urllib.request.urlopen(request, timeout=cfg.timeout) as response:
                    payload = json.loads(response.read().decode("utf-8"))
                return payload["choices"][0]["message"]["content"]
            except urllib.error.HTTPError as exc:
                if exc.code in self.TRANSIENT_STATUS and attempt < self.MAX_TRANSIENT_RETRIES:
                    retry_after = exc.headers.get("Retry-After")
                    wait = float(retry_after) if retry_after else delay
                    time.sleep(wait)
                    delay *= 2.0
                    continue
                raise TransportError(f"endpoint returned HTTP {exc.code}: {exc.reason}")
            except urllib.error.URLError as exc:
                raise TransportError(f"cannot reach endpoint: {exc.reason}")
            except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
                raise TransportError(f"unexpected response payload: {exc}")
        raise TransportError("retry budget exhausted")


def resolve_api_key() -> str | None:
    for var in API_KEY_ENV_VARS:
        value = os.environ.get(var)
        if value:
            return value
    return None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def generate_for_segment(
    segment_id: str,
    source: str,
    gold: str | None,
    template: PromptTemplate,
    cfg: GenerationConfig,
    transport,
) -> GenerationRecord:
    """One segment: a single call for all candidates, retried on parse failure."""
    ground_truth = gold if template.include_ground_truth else None
    prompt = build_prompt(template, source, ground_truth, cfg.n_references)
    raw = ""
    error = None
    attempts = 0
    for attempts in range(1, cfg.max_retries + 2):
        raw = transport.complete(prompt, cfg)
        try:
            candidates = parse_candidates(raw, cfg.n_references)
            return GenerationRecord(
                segment_id=segment_id,
                prompt_used=prompt,
                raw_response=raw,
                candidates=tuple(candidates),
                attempt_count=attempts,
                timestamp=_now(),
            )
        except MalformedResponseError as exc:
            error = str(exc)
    return GenerationRecord(
        segment_id=segment_id,
        prompt_used=prompt,
        raw_response=raw,
        candidates=(),
        attempt_count=attempts,
        timestamp=_now(),
        error=error,
    )


def generate_references(
    segments,
    template: PromptTemplate,
    cfg: GenerationConfig,
    transport,
    out_path: str | Path | None = None,
    skip_ids=(),
) -> list[GenerationRecord]:
    """Generate candidates for every segment not in skip_ids.

    `segments` yields (segment_id, source, gold_or_None). Records are
    appended to out_path (one JSON object per line, flushed per record) so a
    kill mid-run loses at most the in-flight segments; rerunning with the
    completed ids in skip_ids is idempotent. Transport failures abort the
    run; parse failures only mark their own segment as failed.
    """
    todo = [item for item in segments if item[0] not in set(skip_ids)]
    if template.include_ground_truth:
        missing = [sid for sid, _src, gold in todo if gold is None]
        if missing:
            raise ValueError(
                f"template expects ground truth but segments lack gold refs: {missing[:5]}"
            )
    records: list[GenerationRecord] = []
    lock = threading.Lock()
    handle = None
    if out_path is not None:
        repair_truncated_tail(out_path)
        handle = open(out_path, "a", encoding="utf-8")

    def persist(record: GenerationRecord):
        with lock:
            records.append(record)
            if handle is not None:
                handle.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
                handle.flush()

    try:
        if cfg.concurrency == 1:
            for segment_id, source, gold in todo:
                persist(
                    generate_for_segment(segment_id, source, gold, template, cfg, transport)
                )
        else:
            with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
                futures = [
                    pool.submit(
                        generate_for_segment, sid, src, gold, template, cfg, transport
                    )
                    for sid, src, gold in todo
                ]
                for future in futures:
                    persist(future.result())
    finally:
        if handle is not None:
            handle.close()
    return records


def repair_truncated_tail(path: str | Path) -> bool:
    """Drop a partial trailing line left behind by a crash mid-append.

    Returns True when the file was trimmed. Only the final line is ever
    touched; corruption anywhere else still surfaces as a load error.
    """
    path = Path(path)
    if not path.exists():
        return False
    data = path.read_bytes()
    if not data or data.endswith(b"\n"):
        return False
    cut = data.rfind(b"\n") + 1
    with open(path, "r+b") as handle:
        handle.truncate(cut)
    return True


def load_generation_records(path: str | Path) -> list[GenerationRecord]:
    """Read a refs.jsonl file of GenerationRecord objects."""
    path = Path(path)
    records = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                records.append(GenerationRecord.from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"invalid generation record: {exc}", str(path), lineno)
    return records


def completed_segment_ids(path: str | Path) -> set[str]:
    """Segment ids with a successful record already present in the output file.

    A partial trailing line (crash artifact) is trimmed first, so resuming an
    interrupted run never trips over its own last write.
    """
    path = Path(path)
    if not path.exists():
        return set()
    repair_truncated_tail(path)
    return {r.segment_id for r in load_generation_records(path) if r.succeeded}
