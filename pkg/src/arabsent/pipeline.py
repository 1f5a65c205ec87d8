"""Parallel, order-preserving batch classification.

The reader slices the input into numbered chunks, a pool of worker
processes classifies them, and a single writer emits results strictly in
input order. At most ``2 * workers`` chunks are in flight, so memory does
not grow with corpus size. Deduplication runs in the writer on
fingerprints computed by the workers, which keeps first-occurrence
semantics identical to a sequential pass.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import __version__
from .classifier import classify_prepared
from .config import RunConfig, load_config, load_resources
from .corpus import RecordError, fingerprint, is_retweet, parse_line
from .normalizer import normalize
from .translit import transliterate_text

log = logging.getLogger(__name__)

CHUNK_SIZE = 1000
WORKERS_ENV = "ARABSENT_WORKERS"

_state: dict = {}


class StrictModeError(RuntimeError):
    pass


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class StageCounts:
    input: int = 0
    skipped: int = 0
    retweets: int = 0
    duplicates: int = 0
    after_dedup: int = 0
    relevant: int = 0
    positive: int = 0
    negative: int = 0
    neutral: int = 0


@dataclass
class RunManifest:
    tool: str
    version: str
    config_path: str
    config_sha256: str
    inputs: list[dict]
    workers: int
    duration_s: float
    throughput_docs_per_s: float
    counts: StageCounts
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _init_worker(cfg: RunConfig) -> None:
    _state["cfg"] = cfg
    _state["resources"] = load_resources(cfg)


def _process_chunk(chunk: list[tuple[int, str]]) -> list[tuple]:
    """Classify one chunk. Returns per-line tuples for the writer:

    ``("error", line_no, message)``, ``("retweet",)`` or
    ``("ok", fingerprint, relevant, label, json_line)``.
    """
    cfg: RunConfig = _state["cfg"]
    res = _state["resources"]
    out = []
    for line_no, line in chunk:
        try:
            rec = parse_line(line, line_no)
        except RecordError as err:
            out.append(("error", line_no, str(err)))
            continue
        if is_retweet(rec):
            out.append(("retweet",))
            continue
        try:
            norm = normalize(rec.text, res.vocab, res.norm_opts)
            text = norm
            if res.phrase_table is not None:
                text = transliterate_text(norm, res.phrase_table, res.exclusions, res.decoder)
            result = classify_prepared(rec.id, text, res, cfg.pipeline)
            line_out = json.dumps(result.to_dict(), ensure_ascii=False)
        except Exception as err:  # keep one bad record from sinking the run
            out.append(("error", line_no, f"line {line_no}: {type(err).__name__}: {err}"))
            continue
        out.append(("ok", fingerprint(norm), result.relevant, result.label, line_out))
    return out


def _chunks(lines: Iterable[str], size: int) -> Iterator[list[tuple[int, str]]]:
    chunk: list[tuple[int, str]] = []
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        chunk.append((line_no, line))
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def ordered_map(
    fn: Callable,
    items: Iterable,
    workers: int,
    initializer: Callable | None = None,
    initargs: tuple = (),
    max_inflight: int | None = None,
) -> Iterator:
    """``map(fn, items)`` over a process pool, yielding results in input order."""
    if workers <= 1:
        if initializer is not None:
            initializer(*initargs)
        for item in items:
            yield fn(item)
        return
    max_inflight = max_inflight or 2 * workers
    with ProcessPoolExecutor(workers, initializer=initializer, initargs=initargs) as pool:
        pending: deque = deque()
        for item in items:
            pending.append(pool.submit(fn, item))
            if len(pending) >= max_inflight:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


def run_pipeline(
    config: RunConfig | str | Path,
    input_path: str | Path,
    output_path: str | Path,
    workers: int = 1,
    strict: bool = False,
    manifest_path: str | Path | None = None,
    chunk_size: int = CHUNK_SIZE,
) -> RunManifest:
    """Classify every record of ``input_path`` into ``output_path`` (JSONL).

    Resources are loaded up front, so a broken lexicon or table aborts
    before any output is written. The manifest goes next to the output
    unless ``manifest_path`` says otherwise.
    """
    cfg = config if isinstance(config, RunConfig) else load_config(config)
    load_resources(cfg)  # fail fast in the parent
    started = time.perf_counter()
    counts = StageCounts()
    errors: list[str] = []
    seen: set[int] = set()

    with open(input_path, encoding="utf-8") as src, open(output_path, "w", encoding="utf-8") as dst:
        batches = ordered_map(_process_chunk, _chunks(src, chunk_size), workers, _init_worker, (cfg,))
        for batch in batches:
            buf = []
            for item in batch:
                counts.input += 1
                kind = item[0]
                if kind == "error":
                    if strict:
                        raise StrictModeError(item[2])
                    counts.skipped += 1
                    if len(errors) < 100:
                        errors.append(item[2])
                    continue
                if kind == "retweet":
                    counts.retweets += 1
                    continue
                _, fp, relevant, label, line = item
                if cfg.dedup:
                    if fp in seen:
                        counts.duplicates += 1
                        continue
                    seen.add(fp)
                counts.after_dedup += 1
                if relevant:
                    counts.relevant += 1
                    setattr(counts, label, getattr(counts, label) + 1)
                buf.append(line)
            if buf:
                dst.write("\n".join(buf) + "\n")

    duration = time.perf_counter() - started
    manifest = RunManifest(
        tool="arabsent",
        version=__version__,
        config_path=cfg.path,
        config_sha256=cfg.sha256,
        inputs=[{"path": str(input_path), "sha256": file_sha256(input_path)}],
        workers=workers,
        duration_s=round(duration, 3),
        throughput_docs_per_s=round(counts.input / duration, 1) if duration > 0 else 0.0,
        counts=counts,
        errors=errors,
    )
    mpath = Path(manifest_path) if manifest_path else Path(str(output_path) + ".manifest.json")
    mpath.write_text(json.dumps(manifest.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    log.info("classified %d records in %.1fs (%d workers)", counts.input, duration, workers)
    return manifest
