"""Reading, deduplicating and sampling JSONL document streams."""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .normalizer import DEFAULT_OPTIONS, EMPTY_VOCABULARY, NormalizationOptions, Vocabulary, normalize

log = logging.getLogger(__name__)

SOURCES = ("twitter", "blog", "forum")
GOLD_LABELS = ("positive", "negative", "neutral")
GENDERS = ("male", "female", "unknown")


class RecordError(ValueError):
    """A malformed input line."""

    def __init__(self, message: str, line_no: int | None = None) -> None:
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}" if line_no is not None else message)


class InsufficientClassError(ValueError):
    pass


@dataclass(frozen=True)
class AuthorMeta:
    """Author fields as they appear in the input file."""

    user_id: str | None = None
    gender: str | None = None
    country: str | None = None
    city: str | None = None
    marital_status: str | None = None
    description: str | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    text: str
    source: str = "twitter"
    created_at: datetime | None = None
    lang_hint: str | None = None
    author: AuthorMeta | None = None
    retweet_flag: bool | None = None
    line_no: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"id": self.id, "text": self.text, "source": self.source}
        if self.created_at is not None:
            out["created_at"] = self.created_at.isoformat().replace("+00:00", "Z")
        if self.lang_hint is not None:
            out["lang"] = self.lang_hint
        if self.retweet_flag is not None:
            out["retweet"] = self.retweet_flag
        if self.author is not None:
            out["author"] = self.author.to_dict()
        return out


@dataclass(frozen=True)
class AnnotatedRecord:
    record: DocumentRecord
    gold_label: str

    def to_dict(self) -> dict:
        return {**self.record.to_dict(), "gold": self.gold_label}


def _parse_timestamp(value: str) -> datetime:
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    return datetime.fromisoformat(value)


def _opt_str(obj: dict, key: str, line_no: int | None) -> str | None:
    value = obj.get(key)
    if value is not None and not isinstance(value, str):
        raise RecordError(f"field {key!r} must be a string", line_no)
    return value


def record_from_dict(obj: object, line_no: int | None = None) -> DocumentRecord:
    if not isinstance(obj, dict):
        raise RecordError("record is not a JSON object", line_no)
    for key in ("id", "text", "source"):
        if key not in obj:
            raise RecordError(f"missing required field {key!r}", line_no)
    doc_id, text, source = obj["id"], obj["text"], obj["source"]
    if not isinstance(doc_id, str) or not doc_id:
        raise RecordError("id must be a non-empty string", line_no)
    if not isinstance(text, str) or not text.strip():
        raise RecordError("text must be a non-empty string", line_no)
    if source not in SOURCES:
        raise RecordError(f"unknown source {source!r}", line_no)

    created = None
    if obj.get("created_at") is not None:
        try:
            created = _parse_timestamp(str(obj["created_at"]))
        except ValueError:
            raise RecordError(f"bad created_at {obj['created_at']!r}", line_no) from None
    retweet = obj.get("retweet")
    if retweet is not None and not isinstance(retweet, bool):
        raise RecordError("retweet must be a boolean", line_no)

    author = None
    raw_author = obj.get("author")
    if raw_author is not None:
        if not isinstance(raw_author, dict):
            raise RecordError("author must be an object", line_no)
        gender = _opt_str(raw_author, "gender", line_no)
        if gender is not None and gender not in GENDERS:
            raise RecordError(f"unknown gender {gender!r}", line_no)
        author = AuthorMeta(
            user_id=_opt_str(raw_author, "user_id", line_no),
            gender=gender,
            country=_opt_str(raw_author, "country", line_no),
            city=_opt_str(raw_author, "city", line_no),
            marital_status=_opt_str(raw_author, "marital_status", line_no),
            description=_opt_str(raw_author, "description", line_no),
        )
    return DocumentRecord(
        id=doc_id,
        text=text,
        source=source,
        created_at=created,
        lang_hint=_opt_str(obj, "lang", line_no),
        author=author,
        retweet_flag=retweet,
        line_no=line_no,
    )


def parse_line(line: str, line_no: int | None = None) -> DocumentRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON: {exc.msg}", line_no) from None
    return record_from_dict(obj, line_no)


def _log_error(err: RecordError) -> None:
    log.warning("skipping %s", err)


def read_records(
    path: str | Path,
    strict: bool = False,
    on_error: Callable[[RecordError], None] = _log_error,
) -> Iterator[DocumentRecord]:
    """Yield records in file order.

    Bad lines are reported through ``on_error`` and skipped, unless
    ``strict`` is set, in which case the first one raises.
    """
    with open(path, encoding="utf-8") as fh:
        yield from iter_records(fh, strict=strict, on_error=on_error)


def iter_records(
    lines: Iterable[str],
    strict: bool = False,
    on_error: Callable[[RecordError], None] = _log_error,
) -> Iterator[DocumentRecord]:
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            yield parse_line(line, line_no)
        except RecordError as err:
            if strict:
                raise
            on_error(err)


def read_annotated(path: str | Path, strict: bool = False,
                   on_error: Callable[[RecordError], None] = _log_error) -> list[AnnotatedRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                err = RecordError(f"malformed JSON: {exc.msg}", line_no)
                if strict:
                    raise err from None
                on_error(err)
                continue
            try:
                record = record_from_dict(obj, line_no)
                gold = obj.get("gold")
                if gold not in GOLD_LABELS:
                    raise RecordError(f"gold must be one of {GOLD_LABELS}, got {gold!r}", line_no)
            except RecordError as err:
                if strict:
                    raise
                on_error(err)
                continue
            out.append(AnnotatedRecord(record, gold))
    return out


def fingerprint(normalized_text: str) -> int:
    """64-bit BLAKE2b hash of already-normalized text."""
    return int.from_bytes(hashlib.blake2b(normalized_text.encode("utf-8"), digest_size=8).digest(), "big")


def is_retweet(record: DocumentRecord) -> bool:
    if record.retweet_flag:
        return True
    return record.text.lstrip()[:4].lower() == "rt @"


def dedup(
    records: Iterable[DocumentRecord],
    vocab: Vocabulary = EMPTY_VOCABULARY,
    opts: NormalizationOptions = DEFAULT_OPTIONS,
) -> Iterator[DocumentRecord]:
    """Drop retweets and every repeat of an already-seen normalized text."""
    seen: set[int] = set()
    for rec in records:
        if is_retweet(rec):
            continue
        fp = fingerprint(normalize(rec.text, vocab, opts))
        if fp in seen:
            continue
        seen.add(fp)
        yield rec


def balanced_split(
    annotated: Sequence[AnnotatedRecord], n_per_class: int, seed: int
) -> tuple[list[AnnotatedRecord], list[AnnotatedRecord]]:
    """Draw ``n_per_class`` records per gold label; return ``(test, dev)``.

    Sampling uses ``random.Random(seed)`` (Mersenne Twister MT19937) and
    ``Random.sample`` over each class's indices in input order, classes
    visited in the fixed order positive, negative, neutral. Both splits
    keep input order.
    """
    by_class: dict[str, list[int]] = {label: [] for label in GOLD_LABELS}
    for i, rec in enumerate(annotated):
        by_class[rec.gold_label].append(i)
    for label in GOLD_LABELS:
        if len(by_class[label]) < n_per_class:
            raise InsufficientClassError(f"{label}: {len(by_class[label])} < {n_per_class}")
    rng = random.Random(seed)
    chosen: set[int] = set()
    for label in GOLD_LABELS:
        chosen.update(rng.sample(by_class[label], n_per_class))
    test = [rec for i, rec in enumerate(annotated) if i in chosen]
    dev = [rec for i, rec in enumerate(annotated) if i not in chosen]
    return test, dev


def sample_balanced(annotated: Sequence[AnnotatedRecord], n_per_class: int, seed: int) -> list[AnnotatedRecord]:
    return balanced_split(annotated, n_per_class, seed)[0]


def write_jsonl(items: Iterable[dict], path: str | Path | None = None, fh=None) -> int:
    count = 0
    own = fh is None
    if own:
        fh = open(path, "w", encoding="utf-8")
    try:
        for item in items:
            fh.write(json.dumps(item, ensure_ascii=False) + "\n")
            count += 1
    finally:
        if own:
            fh.close()
    return count
