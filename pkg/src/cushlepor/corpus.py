"""Evaluation corpus: ingestion, validation, serialization.

The canonical row has fields seg_id, system_id, hypothesis, reference, an
optional source, and any number of numeric gold columns (human or
model-derived per-segment scores). TSV files carry these as header columns,
JSONL as flat keys; a column_map renames foreign layouts onto the canonical
fields at ingestion.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import IngestError
from .tokenizer import tokenize

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("seg_id", "system_id", "hypothesis", "reference")
OPTIONAL_FIELDS = ("source",)

FORMATS = ("tsv", "jsonl")


@dataclass(frozen=True)
class SegmentRecord:
    seg_id: str
    system_id: str
    hypothesis: str
    reference: str
    source: str | None = None
    gold: Mapping[str, float] = field(default_factory=dict)

    def key(self) -> tuple[str, str]:
        return (self.seg_id, self.system_id)


class Corpus:
    """An immutable, validated sequence of segment records."""

    def __init__(self, segments: Iterable[SegmentRecord]):
        self.segments: tuple[SegmentRecord, ...] = tuple(segments)
        seen: set[tuple[str, str]] = set()
        for seg in self.segments:
            if seg.key() in seen:
                raise IngestError(f"duplicate (seg_id, system_id): {seg.key()}")
            seen.add(seg.key())

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return [_record_tuple(s) for s in self.segments] == \
               [_record_tuple(s) for s in other.segments]

    @property
    def system_ids(self) -> list[str]:
        out: list[str] = []
        for seg in self.segments:
            if seg.system_id not in out:
                out.append(seg.system_id)
        return out

    @property
    def gold_columns(self) -> list[str]:
        cols: list[str] = []
        for seg in self.segments:
            for name in seg.gold:
                if name not in cols:
                    cols.append(name)
        return sorted(cols)

    def fingerprint(self) -> str:
        """sha256 over the canonical serialization, stable across sessions."""
        h = hashlib.sha256()
        for seg in self.segments:
            h.update(json.dumps(_record_tuple(seg), ensure_ascii=False).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


def _record_tuple(seg: SegmentRecord):
    return [seg.seg_id, seg.system_id, seg.source, seg.hypothesis, seg.reference,
            sorted(seg.gold.items())]


def _apply_column_map(column_map: Mapping[str, str] | None) -> dict[str, str]:
    mapping = {f: f for f in REQUIRED_FIELDS + OPTIONAL_FIELDS}
    if column_map:
        unknown = set(column_map) - set(mapping)
        if unknown:
            raise IngestError(f"column_map maps unknown fields: {sorted(unknown)}")
        mapping.update(column_map)
    return mapping


def _rows_from_tsv(path: Path) -> tuple[list[str], Iterable[tuple[int, dict[str, str]]]]:
    with path.open(encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise IngestError(f"{path}: empty file, expected a header row")
    header = lines[0].split("\t")

    def rows():
        for lineno, line in enumerate(lines[1:], start=2):
            values = line.split("\t")
            if len(values) != len(header):
                raise IngestError(
                    f"{path}: line {lineno}: expected {len(header)} columns, got {len(values)}"
                )
            yield lineno, dict(zip(header, values))

    return header, rows()


def _rows_from_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}: line {lineno}: invalid JSON ({exc})") from exc
            if not isinstance(record, dict):
                raise IngestError(f"{path}: line {lineno}: expected a JSON object")
            yield lineno, record


def ingest(path: str | Path, format: str = "tsv",
           column_map: Mapping[str, str] | None = None,
           strict: bool = True) -> Corpus:
    """Read and validate a corpus file.

    Under strict mode any invalid row aborts ingestion with an IngestError
    listing every offending line; otherwise invalid rows are skipped (or,
    for a non-numeric gold cell only, kept with that gold value absent) and
    each problem is logged.
    """
    path = Path(path)
    if format not in FORMATS:
        raise IngestError(f"unknown corpus format {format!r}, expected one of {FORMATS}")
    if not path.exists():
        raise IngestError(f"corpus file not found: {path}")

    mapping = _apply_column_map(column_map)

    if format == "tsv":
        header, rows = _rows_from_tsv(path)
        missing = [mapping[f] for f in REQUIRED_FIELDS if mapping[f] not in header]
        if missing:
            raise IngestError(f"{path}: missing required columns: {', '.join(missing)}")
    else:
        rows = _rows_from_jsonl(path)

    reserved = {mapping[f] for f in REQUIRED_FIELDS + OPTIONAL_FIELDS}
    problems: list[str] = []
    segments: list[SegmentRecord] = []
    seen: set[tuple[str, str]] = set()

    for lineno, raw in rows:
        row_problems: list[str] = []
        fields: dict[str, str] = {}
        for canonical in REQUIRED_FIELDS:
            value = raw.get(mapping[canonical])
            if value is None:
                row_problems.append(f"line {lineno}: missing field {mapping[canonical]!r}")
            else:
                fields[canonical] = str(value)
        if not row_problems:
            if not tokenize(fields["hypothesis"]):
                row_problems.append(f"line {lineno}: empty hypothesis")
            if not tokenize(fields["reference"]):
                row_problems.append(f"line {lineno}: empty reference")
            key = (fields["seg_id"], fields["system_id"])
            if key in seen:
                row_problems.append(f"line {lineno}: duplicate (seg_id, system_id) {key}")

        source_raw = raw.get(mapping["source"])
        source = str(source_raw) if source_raw not in (None, "") else None

        gold: dict[str, float] = {}
        for name, value in raw.items():
            if name in reserved or value in (None, ""):
                continue
            try:
                gold[name] = float(value)
            except (TypeError, ValueError):
                message = f"line {lineno}: non-numeric gold value {value!r} in column {name!r}"
                if strict:
                    row_problems.append(message)
                else:
                    logger.warning("%s: %s; gold value dropped", path, message)

        if row_problems:
            problems.extend(row_problems)
            if not strict:
                for message in row_problems:
                    logger.warning("%s: %s; row skipped", path, message)
            continue

        seen.add((fields["seg_id"], fields["system_id"]))
        segments.append(SegmentRecord(
            seg_id=fields["seg_id"],
            system_id=fields["system_id"],
            hypothesis=fields["hypothesis"],
            reference=fields["reference"],
            source=source,
            gold=gold,
        ))

    if strict and problems:
        shown = "\n  ".join(problems[:20])
        more = f"\n  ... and {len(problems) - 20} more" if len(problems) > 20 else ""
        raise IngestError(f"{path}: {len(problems)} invalid row(s):\n  {shown}{more}",
                          problems=problems)
    return Corpus(segments)


def write_corpus(corpus: Corpus, path: str | Path, format: str = "tsv") -> None:
    """Serialize a corpus so that ingest() round-trips it exactly."""
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}, expected one of {FORMATS}")
    gold_columns = corpus.gold_columns
    has_source = any(seg.source is not None for seg in corpus)

    if format == "tsv":
        header = list(REQUIRED_FIELDS) + (["source"] if has_source else []) + gold_columns
        lines = ["\t".join(header)]
        for seg in corpus:
            row = [seg.seg_id, seg.system_id, seg.hypothesis, seg.reference]
            if has_source:
                row.append(seg.source or "")
            for col in gold_columns:
                row.append(repr(seg.gold[col]) if col in seg.gold else "")
            lines.append("\t".join(row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        with path.open("w", encoding="utf-8") as fh:
            for seg in corpus:
                record: dict[str, object] = {
                    "seg_id": seg.seg_id,
                    "system_id": seg.system_id,
                    "hypothesis": seg.hypothesis,
                    "reference": seg.reference,
                }
                if seg.source is not None:
                    record["source"] = seg.source
                record.update(seg.gold)
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def split_corpus(corpus: Corpus, holdout_fraction: float = 0.2) -> tuple[Corpus, Corpus]:
    """Deterministic train/held-out split keyed on a hash of seg_id.

    All systems' rows for one seg_id land on the same side.
    """
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError(f"holdout_fraction must be in (0, 1), got {holdout_fraction}")
    threshold = int(round((1.0 - holdout_fraction) * 100))
    train: list[SegmentRecord] = []
    heldout: list[SegmentRecord] = []
    for seg in corpus:
        digest = hashlib.sha256(seg.seg_id.encode("utf-8")).hexdigest()
        (train if int(digest[:8], 16) % 100 < threshold else heldout).append(seg)
    return Corpus(train), Corpus(heldout)
