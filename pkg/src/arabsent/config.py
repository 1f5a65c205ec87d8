"""Use-case configuration files and resource loading.

A config is a JSON object::

    {
      "use_case": "egyptian_teleco",
      "dialects": ["msa", "egyptian"],
      "domains": ["general", "teleco"],
      "lexicons": ["bundled:sample_lexicon.tsv", "extra.tsv"],
      "keywords": ["..."],               # or "keywords_path": "kw.txt"
      "linkage_window": 5,
      "negation_window": 2,
      "question_scope": "sentence",
      "contrast_policy": "after_wins",
      "phrase_table": "bundled:arabizi_table.tsv",   # null disables arabizi
      "exclusions": "bundled:arabizi_exclusions.txt",
      "wordlist": null,
      "dedup": true
    }

Relative paths resolve against the config file's directory; ``bundled:``
paths point into the package's data directory.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import lexicon as lx
from .classifier import PipelineConfig, Resources, build_resources
from .normalizer import load_wordlist
from .translit import PhraseTableError, load_exclusions, load_phrase_table

BUNDLED = "bundled:"


class ConfigError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    path: str
    sha256: str
    use_case: str
    pipeline: PipelineConfig
    lexicons: tuple[str, ...]
    phrase_table: str | None = None
    exclusions: str | None = None
    wordlist: str | None = None
    dedup: bool = True
    raw: dict = field(default_factory=dict, compare=False)


def resolve(ref: str, base: Path) -> str:
    if ref.startswith(BUNDLED):
        return str(lx.bundled_path(ref[len(BUNDLED):]))
    p = Path(ref)
    return str(p if p.is_absolute() else base / p)


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def config_from_dict(raw: dict, base: Path, path: str = "<dict>", sha256: str = "") -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    try:
        keywords = list(raw.get("keywords", []))
        if raw.get("keywords_path"):
            keywords += _read_lines(resolve(raw["keywords_path"], base))
        pipeline = PipelineConfig(
            linkage_window=int(raw.get("linkage_window", 5)),
            negation_window=int(raw.get("negation_window", 2)),
            question_scope=raw.get("question_scope", "sentence"),
            contrast_policy=raw.get("contrast_policy", "after_wins"),
            dialects=frozenset(raw.get("dialects", lx.DIALECTS)),
            domains=frozenset(raw.get("domains", ["general"])),
            keywords=tuple(keywords),
        )
    except (TypeError, ValueError, OSError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    lexicons = raw.get("lexicons") or [BUNDLED + "sample_lexicon.tsv"]

    def opt(key: str, default: str | None = None) -> str | None:
        value = raw.get(key, default)
        return resolve(value, base) if value else None

    return RunConfig(
        path=path,
        sha256=sha256,
        use_case=str(raw.get("use_case", "default")),
        pipeline=pipeline,
        lexicons=tuple(resolve(p, base) for p in lexicons),
        phrase_table=opt("phrase_table", BUNDLED + "arabizi_table.tsv"),
        exclusions=opt("exclusions", BUNDLED + "arabizi_exclusions.txt"),
        wordlist=opt("wordlist"),
        dedup=bool(raw.get("dedup", True)),
        raw=raw,
    )


def load_config(path: str | Path) -> RunConfig:
    if str(path).startswith(BUNDLED):
        path = lx.bundled_path(str(path)[len(BUNDLED):])
    path = Path(path)
    try:
        data = path.read_bytes()
        raw = json.loads(data.decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(raw, path.parent, str(path), hashlib.sha256(data).hexdigest())


def load_resources(cfg: RunConfig) -> Resources:
    """Load lexicons, phrase table and word lists; any failure raises ResourceError."""
    try:
        lexicon = lx.load_lexicon(cfg.lexicons)
        table = load_phrase_table(cfg.phrase_table) if cfg.phrase_table else None
        exclusions = load_exclusions(cfg.exclusions) if cfg.exclusions else frozenset()
        vocab = load_wordlist(cfg.wordlist) if cfg.wordlist else None
        return build_resources(lexicon, cfg.pipeline, table, exclusions, vocab)
    except (OSError, lx.LexiconError, PhraseTableError, ValueError) as exc:
        raise ResourceError(str(exc)) from exc
