"""Sentiment lexicons and a token-level multi-pattern matcher.

Lexicon files are TSV: ``surface<TAB>category<TAB>dialect<TAB>domain``.
Surfaces are normalized on load so authors can write them in any
orthography. Matching is whole-token: an entry fires only when its token
sequence equals a contiguous run of text tokens.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .normalizer import normalize
from .tokens import Token, token_texts

log = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"
BLOCKER = "blocker"
STRONG_POSITIVE = "strong_positive"
STRONG_NEGATIVE = "strong_negative"
CHANGE_CONTEXT = "change_context"
NEGATION = "negation"
PREFERENCE_POSITIVE = "preference_positive"
PREFERENCE_NEGATIVE = "preference_negative"
QUESTION_WORD = "question_word"
# not loadable from lexicon files; used for object-of-interest keywords
KEYWORD = "keyword"

CATEGORIES = (
    POSITIVE,
    NEGATIVE,
    BLOCKER,
    STRONG_POSITIVE,
    STRONG_NEGATIVE,
    CHANGE_CONTEXT,
    NEGATION,
    PREFERENCE_POSITIVE,
    PREFERENCE_NEGATIVE,
    QUESTION_WORD,
)
POLARITY_CATEGORIES = frozenset({POSITIVE, NEGATIVE, STRONG_POSITIVE, STRONG_NEGATIVE})
STRONG_CATEGORIES = frozenset({STRONG_POSITIVE, STRONG_NEGATIVE})
DIALECTS = ("msa", "egyptian", "saudi")
MAX_SURFACE_TOKENS = 6


class LexiconError(ValueError):
    pass


def base_polarity(category: str) -> str:
    if category in (POSITIVE, STRONG_POSITIVE, PREFERENCE_POSITIVE):
        return POSITIVE
    if category in (NEGATIVE, STRONG_NEGATIVE, PREFERENCE_NEGATIVE):
        return NEGATIVE
    raise ValueError(f"category {category!r} carries no polarity")


@dataclass(frozen=True, slots=True)
class LexiconEntry:
    surface: str
    category: str
    dialect: str = "msa"
    domain: str = "general"

    @property
    def tokens(self) -> tuple[str, ...]:
        return token_texts(self.surface)


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open character interval on normalized text.

    ``tok_start``/``tok_end`` are the half-open token-index range covered.
    """

    start: int
    end: int
    category: str
    entry: LexiconEntry
    tok_start: int
    tok_end: int


@dataclass
class Lexicon:
    entries: list[LexiconEntry] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)

    def counts(self) -> Counter:
        return Counter(e.category for e in self.entries)

    def surfaces(self) -> list[str]:
        return [e.surface for e in self.entries]


def parse_entry(line: str, where: str = "<string>") -> LexiconEntry:
    parts = line.split("\t")
    if len(parts) != 4:
        raise LexiconError(f"{where}: expected 4 tab-separated fields, got {len(parts)}")
    surface, category, dialect, domain = (p.strip() for p in parts)
    if category not in CATEGORIES:
        raise LexiconError(f"{where}: unknown category {category!r}")
    if dialect not in DIALECTS:
        raise LexiconError(f"{where}: unknown dialect {dialect!r}")
    surface = " ".join(normalize(surface).split())
    if not surface:
        raise LexiconError(f"{where}: empty surface")
    if len(surface.split()) > MAX_SURFACE_TOKENS:
        raise LexiconError(f"{where}: surface longer than {MAX_SURFACE_TOKENS} tokens")
    return LexiconEntry(surface, category, dialect, domain or "general")


def load_lexicon(paths: Iterable[str | Path]) -> Lexicon:
    """Load and merge lexicon files, collapsing duplicate entries with a warning."""
    lex = Lexicon()
    seen: set[tuple[str, str, str]] = set()
    for path in paths:
        path = str(path)
        lex.provenance.append(path)
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.rstrip("\r\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                entry = parse_entry(line, f"{path}:{lineno}")
                key = (entry.surface, entry.category, entry.dialect)
                if key in seen:
                    log.warning("%s:%d: duplicate entry %r (%s, %s) ignored",
                                path, lineno, entry.surface, entry.category, entry.dialect)
                    continue
                seen.add(key)
                lex.entries.append(entry)
    log.info("loaded %d lexicon entries: %s", len(lex.entries), dict(sorted(lex.counts().items())))
    return lex


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("arabsent.data") / name))


def sample_lexicon() -> Lexicon:
    return load_lexicon([bundled_path("sample_lexicon.tsv")])


class _Node:
    __slots__ = ("children", "fail", "out")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.fail: _Node | None = None
        # (pattern length in tokens, entry index), own and inherited via fail links
        self.out: list[tuple[int, int]] = []


class Matcher:
    """Aho-Corasick automaton whose alphabet is whole tokens.

    Patterns sharing a token sequence and category are merged, keeping the
    first entry in compile order.
    """

    def __init__(self, entries: Sequence[LexiconEntry]) -> None:
        self.entries: tuple[LexiconEntry, ...] = tuple(entries)
        self._patterns: list[tuple[str, ...]] = [e.tokens for e in self.entries]
        self._root = _Node()
        seen: set[tuple[tuple[str, ...], str]] = set()
        for idx, (pattern, entry) in enumerate(zip(self._patterns, self.entries)):
            if not pattern or (pattern, entry.category) in seen:
                continue
            seen.add((pattern, entry.category))
            node = self._root
            for tok in pattern:
                node = node.children.setdefault(tok, _Node())
            node.out.append((len(pattern), idx))
        self._build_links()

    def _build_links(self) -> None:
        root = self._root
        root.fail = root
        queue: deque[_Node] = deque()
        for child in root.children.values():
            child.fail = root
            queue.append(child)
        while queue:
            node = queue.popleft()
            for tok, child in node.children.items():
                fb = node.fail
                while fb is not root and tok not in fb.children:
                    fb = fb.fail
                target = fb.children.get(tok, root)
                child.fail = target if target is not child else root
                child.out = child.out + child.fail.out
                queue.append(child)

    def __len__(self) -> int:
        return len(self.entries)

    def raw_matches(self, words: Sequence[str]) -> list[tuple[int, int, int]]:
        """Every (token start, token end, entry index) occurrence, unresolved."""
        root = self._root
        node = root
        found = []
        for i, tok in enumerate(words):
            while node is not root and tok not in node.children:
                node = node.fail
            node = node.children.get(tok, root)
            for length, idx in node.out:
                found.append((i + 1 - length, i + 1, idx))
        return found

    def to_bytes(self) -> bytes:
        """Deterministic serialization of the automaton (for reproducibility checks)."""
        order: dict[int, int] = {}
        nodes: list[_Node] = []
        queue = deque([self._root])
        while queue:
            node = queue.popleft()
            order[id(node)] = len(nodes)
            nodes.append(node)
            for tok in sorted(node.children):
                queue.append(node.children[tok])
        dump = {
            "entries": [[e.surface, e.category, e.dialect, e.domain] for e in self.entries],
            "nodes": [
                {
                    "children": {t: order[id(c)] for t, c in sorted(n.children.items())},
                    "fail": order[id(n.fail)],
                    "out": n.out,
                }
                for n in nodes
            ],
        }
        return json.dumps(dump, ensure_ascii=False, sort_keys=True).encode("utf-8")


def compile_matcher(
    lexicon: Lexicon | Sequence[LexiconEntry],
    dialect_filter: Iterable[str] | None = None,
    domain_filter: Iterable[str] | None = None,
) -> Matcher:
    """Compile the entries passing both filters. ``None`` means no filtering."""
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else list(lexicon)
    dialects = None if dialect_filter is None else set(dialect_filter)
    domains = None if domain_filter is None else set(domain_filter)
    if dialects is not None and not dialects:
        raise LexiconError("dialect filter is empty")
    if domains is not None and not domains:
        raise LexiconError("domain filter is empty")
    kept = [
        e for e in entries
        if (dialects is None or e.dialect in dialects)
        and (domains is None or e.domain in domains)
    ]
    if not kept:
        raise LexiconError("no lexicon entries pass the dialect/domain filters")
    return Matcher(kept)


def keyword_matcher(keywords: Iterable[str]) -> Matcher | None:
    entries = []
    for kw in keywords:
        surface = " ".join(normalize(kw).split())
        if surface:
            entries.append(LexiconEntry(surface, KEYWORD, "msa", "keyword"))
    return Matcher(entries) if entries else None


def resolve_leftmost_longest(
    matches: Iterable[tuple[int, int, int]], matcher: Matcher
) -> list[tuple[int, int, int]]:
    """Per category, keep non-overlapping matches preferring earliest start, then longest."""
    by_cat: dict[str, list[tuple[int, int, int]]] = {}
    for m in matches:
        by_cat.setdefault(matcher.entries[m[2]].category, []).append(m)
    kept = []
    for cat_matches in by_cat.values():
        cat_matches.sort(key=lambda m: (m[0], -(m[1] - m[0]), m[2]))
        last_end = -1
        for m in cat_matches:
            if m[0] >= last_end:
                kept.append(m)
                last_end = m[1]
    kept.sort(key=lambda m: (m[0], m[1], m[2]))
    return kept


def find_matches(tokens: Sequence[Token], matcher: Matcher) -> list[Span]:
    words = [t.text for t in tokens]
    spans = []
    for ts, te, idx in resolve_leftmost_longest(matcher.raw_matches(words), matcher):
        entry = matcher.entries[idx]
        spans.append(Span(tokens[ts].start, tokens[te - 1].end, entry.category, entry, ts, te))
    return spans
