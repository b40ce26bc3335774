"""Corpus and hypothesis ingestion, validation, and serialization.

File formats
------------
Corpus JSONL (canonical): one object per line, UTF-8, fields `id` (string),
`source` (string), `references` (non-empty array of strings). Unknown fields
are ignored.

Corpus TSV (convenience): `id<TAB>source<TAB>ref1[<TAB>ref2...]`, no header,
no escaping; tabs are forbidden inside sentences.

Hypotheses: plain text with one sentence per line, aligned positionally with
the corpus, or JSONL with fields `id` and `hypothesis`.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from cgecscore.errors import DataError

log = logging.getLogger(__name__)

CORPUS_FORMATS = ("jsonl", "tsv")
HYPOTHESIS_FORMATS = ("lines", "jsonl")

# validate_corpus flags anything longer than this as suspicious
LONG_SENTENCE_CHARS = 500


@dataclass(frozen=True)
class EvaluationInstance:
    """One source sentence with its gold reference corrections."""

    id: str
    source: str
    references: tuple[str, ...]

    def __post_init__(self):
        if not self.references:
            raise ValueError(f"instance {self.id!r} has no references")


@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of evaluation instances."""

    instances: tuple[EvaluationInstance, ...]

    def __post_init__(self):
        seen = set()
        for inst in self.instances:
            if inst.id in seen:
                raise ValueError(f"duplicate instance id {inst.id!r}")
            seen.add(inst.id)

    @property
    def size(self) -> int:
        return len(self.instances)

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    @cached_property
    def by_id(self) -> Mapping[str, EvaluationInstance]:
        return {inst.id: inst for inst in self.instances}


@dataclass(frozen=True)
class HypothesisSet:
    """One system's corrected output, keyed by instance id."""

    system_name: str
    entries: Mapping[str, str]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str
    instance_id: str | None = None

    def __str__(self) -> str:
        where = f" [instance {self.instance_id}]" if self.instance_id else ""
        return f"{self.severity}: {self.message}{where}"


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8: {exc}") from exc


def _dedup_references(refs: Sequence[str], origin: str, lineno: int, rid: str) -> tuple[str, ...]:
    deduped = tuple(dict.fromkeys(refs))
    if len(deduped) < len(refs):
        log.warning(
            "%s:%d: instance %r: dropped %d duplicate reference(s)",
            origin, lineno, rid, len(refs) - len(deduped),
        )
    return deduped


def _parse_corpus_jsonl(lines: Iterable[str], origin: str) -> list[EvaluationInstance]:
    instances = []
    first_line = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{origin}:{lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(record, dict):
            raise DataError(f"{origin}:{lineno}: expected a JSON object")
        for field in ("id", "source", "references"):
            if field not in record:
                raise DataError(f"{origin}:{lineno}: missing field {field!r}")
        rid, source, refs = record["id"], record["source"], record["references"]
        if not isinstance(rid, str) or not rid:
            raise DataError(f"{origin}:{lineno}: field 'id' must be a non-empty string")
        if not isinstance(source, str):
            raise DataError(f"{origin}:{lineno}: field 'source' must be a string")
        if not isinstance(refs, list) or not refs:
            raise DataError(
                f"{origin}:{lineno}: field 'references' must be a non-empty array"
            )
        if not all(isinstance(r, str) for r in refs):
            raise DataError(f"{origin}:{lineno}: references must all be strings")
        if rid in first_line:
            raise DataError(
                f"{origin}:{lineno}: duplicate id {rid!r} "
                f"(first seen on line {first_line[rid]})"
            )
        first_line[rid] = lineno
        instances.append(
            EvaluationInstance(rid, source, _dedup_references(refs, origin, lineno, rid))
        )
    return instances


def _parse_corpus_tsv(lines: Iterable[str], origin: str) -> list[EvaluationInstance]:
    instances = []
    first_line = {}
    for lineno, raw in enumerate(lines, 1):
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) < 3:
            raise DataError(
                f"{origin}:{lineno}: expected id<TAB>source<TAB>ref..., "
                f"got {len(fields)} field(s)"
            )
        rid, source, refs = fields[0], fields[1], fields[2:]
        if not rid:
            raise DataError(f"{origin}:{lineno}: empty id")
        if rid in first_line:
            raise DataError(
                f"{origin}:{lineno}: duplicate id {rid!r} "
                f"(first seen on line {first_line[rid]})"
            )
        first_line[rid] = lineno
        instances.append(
            EvaluationInstance(rid, source, _dedup_references(refs, origin, lineno, rid))
        )
    return instances


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Load a multi-reference corpus; ordering follows the file."""
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    lines = _read_text(path).splitlines()
    origin = str(path)
    if format == "jsonl":
        instances = _parse_corpus_jsonl(lines, origin)
    else:
        instances = _parse_corpus_tsv(lines, origin)
    if not instances:
        raise DataError(f"{origin}: corpus contains no instances")
    return Corpus(tuple(instances))


def dump_corpus(corpus: Corpus, format: str = "jsonl") -> str:
    """Serialize a corpus back to its interchange form (round-trip stable)."""
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    out = []
    if format == "jsonl":
        for inst in corpus.instances:
            out.append(
                json.dumps(
                    {"id": inst.id, "source": inst.source, "references": list(inst.references)},
                    ensure_ascii=False,
                )
            )
    else:
        for inst in corpus.instances:
            fields = [inst.id, inst.source, *inst.references]
            for f in fields:
                if "\t" in f or "\n" in f:
                    raise ValueError(
                        f"instance {inst.id!r} contains a tab or newline; "
                        "use the jsonl format"
                    )
            out.append("\t".join(fields))
    return "\n".join(out) + "\n"


def load_hypotheses(
    path: str | Path,
    corpus: Corpus,
    format: str = "lines",
    system_name: str | None = None,
) -> HypothesisSet:
    """Load one system's output and check it covers the corpus exactly."""
    if format not in HYPOTHESIS_FORMATS:
        raise ValueError(
            f"unknown hypothesis format {format!r}; expected one of {HYPOTHESIS_FORMATS}"
        )
    name = system_name if system_name is not None else Path(path).stem
    origin = str(path)
    text = _read_text(path)

    if format == "lines":
        lines = text.splitlines()
        if len(lines) != corpus.size:
            raise DataError(
                f"{origin}: expected {corpus.size} hypotheses, found {len(lines)}"
            )
        entries = {inst.id: line for inst, line in zip(corpus.instances, lines)}
        return HypothesisSet(name, entries)

    entries = {}
    first_line = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{origin}:{lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(record, dict):
            raise DataError(f"{origin}:{lineno}: expected a JSON object")
        for field in ("id", "hypothesis"):
            if field not in record:
                raise DataError(f"{origin}:{lineno}: missing field {field!r}")
        rid, hyp = record["id"], record["hypothesis"]
        if not isinstance(rid, str) or not isinstance(hyp, str):
            raise DataError(f"{origin}:{lineno}: 'id' and 'hypothesis' must be strings")
        if rid in first_line:
            raise DataError(
                f"{origin}:{lineno}: duplicate id {rid!r} "
                f"(first seen on line {first_line[rid]})"
            )
        if rid not in corpus.by_id:
            raise DataError(f"{origin}:{lineno}: unknown instance id {rid!r}")
        first_line[rid] = lineno
        entries[rid] = hyp
    missing = [inst.id for inst in corpus.instances if inst.id not in entries]
    if missing:
        shown = ", ".join(repr(m) for m in missing[:10])
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise DataError(f"{origin}: missing hypotheses for instance id(s) {shown}{more}")
    return HypothesisSet(name, entries)


def validate_corpus(corpus: Corpus) -> list[Diagnostic]:
    """Non-mutating sanity checks; returns diagnostics, never raises.

    A reference equal to its source is legal (some sentences need no
    correction) and only warned about, so no-change gold stays visible.
    """
    diags = []
    for inst in corpus.instances:
        if inst.source.strip() == "":
            diags.append(Diagnostic("error", "empty source sentence", inst.id))
        for ref in inst.references:
            if ref.strip() == "":
                diags.append(Diagnostic("warning", "empty reference sentence", inst.id))
            elif ref == inst.source:
                diags.append(Diagnostic("warning", "reference equals source", inst.id))
        longest = max(len(inst.source), max(len(r) for r in inst.references))
        if longest > LONG_SENTENCE_CHARS:
            diags.append(
                Diagnostic(
                    "warning",
                    f"sentence length {longest} exceeds {LONG_SENTENCE_CHARS} characters",
                    inst.id,
                )
            )
    return diags
