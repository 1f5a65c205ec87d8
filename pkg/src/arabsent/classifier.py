"""Three-phase rule engine: extraction, exclusion, linkage.

The document-level pipeline is::

    normalize -> transliterate -> tokenize -> relevance gate
      -> extract -> exclude -> apply_negation -> link -> aggregate_label

Everything here is a pure function of (text, resources, config), so
documents can be classified in any order and on any number of workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import lexicon as lx
from .lexicon import LexiconEntry, Matcher, Span, find_matches
from .normalizer import (
    DEFAULT_OPTIONS,
    EMPTY_VOCABULARY,
    NormalizationOptions,
    Vocabulary,
    normalize,
)
from .tokens import PUNCT, QUESTION_MARKS, Token, sentence_bounds, tokenize
from .translit import DecoderParams, PhraseTable, transliterate_text

NEUTRAL = "neutral"
LABELS = (lx.POSITIVE, lx.NEGATIVE, NEUTRAL)

PROXIMITY = "proximity"
PREFERENCE = "preference"
CONJUNCTION = "conjunction"

CONJUNCTIONS = frozenset({"و", "and", "&", "وكمان", "وايضا"})

QUESTION_SCOPES = ("sentence", "document")
CONTRAST_POLICIES = ("after_wins", "majority")

_QUESTION_MARK_ENTRY = LexiconEntry("؟", lx.QUESTION_WORD, "msa", "general")


def _opposite(polarity: str) -> str:
    return lx.NEGATIVE if polarity == lx.POSITIVE else lx.POSITIVE


@dataclass(frozen=True)
class PipelineConfig:
    linkage_window: int = 5
    negation_window: int = 2
    question_scope: str = "sentence"
    contrast_policy: str = "after_wins"
    dialects: frozenset[str] = frozenset(lx.DIALECTS)
    domains: frozenset[str] = frozenset({"general"})
    keywords: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.linkage_window < 1 or self.negation_window < 1:
            raise ValueError("linkage_window and negation_window must be >= 1")
        if self.question_scope not in QUESTION_SCOPES:
            raise ValueError(f"question_scope must be one of {QUESTION_SCOPES}")
        if self.contrast_policy not in CONTRAST_POLICIES:
            raise ValueError(f"contrast_policy must be one of {CONTRAST_POLICIES}")
        object.__setattr__(self, "dialects", frozenset(self.dialects))
        object.__setattr__(self, "domains", frozenset(self.domains))
        object.__setattr__(self, "keywords", tuple(" ".join(normalize(k).split()) for k in self.keywords))


@dataclass(frozen=True)
class Resources:
    """Everything loaded once and shared read-only by all workers."""

    matcher: Matcher
    keywords: Matcher | None = None
    vocab: Vocabulary = EMPTY_VOCABULARY
    phrase_table: PhraseTable | None = None
    exclusions: frozenset[str] = frozenset()
    decoder: DecoderParams = DecoderParams()
    norm_opts: NormalizationOptions = DEFAULT_OPTIONS


def build_resources(
    lexicon: lx.Lexicon,
    config: PipelineConfig,
    phrase_table: PhraseTable | None = None,
    exclusions: Iterable[str] = (),
    extra_vocab: Vocabulary | None = None,
    decoder: DecoderParams = DecoderParams(),
) -> Resources:
    matcher = lx.compile_matcher(lexicon, config.dialects, config.domains)
    vocab = Vocabulary.from_words(lexicon.surfaces() + list(config.keywords))
    if extra_vocab is not None:
        vocab = vocab.union(extra_vocab)
    return Resources(
        matcher=matcher,
        keywords=lx.keyword_matcher(config.keywords),
        vocab=vocab,
        phrase_table=phrase_table,
        exclusions=frozenset(w.lower() for w in exclusions),
        decoder=decoder,
    )


@dataclass(frozen=True, slots=True)
class EffectiveSpan:
    span: Span
    polarity: str

    @property
    def strong(self) -> bool:
        return self.span.category in lx.STRONG_CATEGORIES


@dataclass(frozen=True)
class TargetLink:
    keyword_span: Span
    polarity_span: Span | None
    polarity: str
    rule: str


@dataclass
class ExtractionResult:
    text: str
    tokens: list[Token]
    sentence_bounds: list[tuple[int, int]]
    polarity_spans: list[Span] = field(default_factory=list)
    blocker_spans: list[Span] = field(default_factory=list)
    question_spans: list[Span] = field(default_factory=list)
    change_context_spans: list[Span] = field(default_factory=list)
    negation_spans: list[Span] = field(default_factory=list)
    preference_spans: list[Span] = field(default_factory=list)
    keyword_spans: list[Span] = field(default_factory=list)

    def sentence_of(self) -> list[int]:
        """Sentence number for each token index."""
        index = [0] * len(self.tokens)
        for sid, (lo, hi) in enumerate(self.sentence_bounds):
            for i in range(lo, hi):
                index[i] = sid
        return index


@dataclass(frozen=True)
class SentimentResult:
    doc_id: str
    relevant: bool
    label: str
    evidence: tuple[EffectiveSpan, ...] = ()
    links: tuple[TargetLink, ...] = ()
    text: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.doc_id,
            "relevant": self.relevant,
            "label": self.label,
            "evidence": [
                {
                    "start": e.span.start,
                    "end": e.span.end,
                    "surface": self.text[e.span.start:e.span.end],
                    "category": e.span.category,
                    "effective": e.polarity,
                }
                for e in self.evidence
            ],
            "links": [
                {
                    "keyword": self.text[ln.keyword_span.start:ln.keyword_span.end],
                    "polarity": ln.polarity,
                    "rule": ln.rule,
                }
                for ln in self.links
            ],
        }


def is_relevant(tokens: Sequence[Token], keywords: Matcher | None) -> bool:
    """Keyword gate. With no keywords configured every document is relevant."""
    if keywords is None:
        return True
    return bool(keywords.raw_matches([t.text for t in tokens]))


def extract(
    text: str,
    tokens: list[Token],
    resources: Resources,
    config: PipelineConfig | None = None,
    bounds: list[tuple[int, int]] | None = None,
) -> ExtractionResult:
    if bounds is None:
        bounds = sentence_bounds(text, tokens)
    result = ExtractionResult(text, tokens, bounds)
    buckets = {
        lx.BLOCKER: result.blocker_spans,
        lx.CHANGE_CONTEXT: result.change_context_spans,
        lx.NEGATION: result.negation_spans,
        lx.PREFERENCE_POSITIVE: result.preference_spans,
        lx.PREFERENCE_NEGATIVE: result.preference_spans,
        lx.QUESTION_WORD: result.question_spans,
    }
    for span in find_matches(tokens, resources.matcher):
        if span.category in lx.POLARITY_CATEGORIES:
            result.polarity_spans.append(span)
        else:
            buckets[span.category].append(span)
    for i, tok in enumerate(tokens):
        if tok.kind == PUNCT and tok.text in QUESTION_MARKS:
            result.question_spans.append(
                Span(tok.start, tok.end, lx.QUESTION_WORD, _QUESTION_MARK_ENTRY, i, i + 1)
            )
    result.question_spans.sort(key=lambda s: (s.tok_start, s.tok_end))
    if resources.keywords is not None:
        result.keyword_spans = find_matches(tokens, resources.keywords)
    return result


def _overlaps(a: Span, b: Span) -> bool:
    return a.start < b.end and b.start < a.end


def exclude(extraction: ExtractionResult, config: PipelineConfig) -> list[Span]:
    """Drop blocker-overlapping spans, then non-strong spans in question context."""
    survivors = [
        s for s in extraction.polarity_spans
        if not any(_overlaps(s, b) for b in extraction.blocker_spans)
    ]
    if not extraction.question_spans:
        return survivors
    if config.question_scope == "document":
        return [s for s in survivors if s.category in lx.STRONG_CATEGORIES]
    sent = extraction.sentence_of()
    questioned = {sent[q.tok_start] for q in extraction.question_spans}
    return [
        s for s in survivors
        if s.category in lx.STRONG_CATEGORIES or sent[s.tok_start] not in questioned
    ]


def _as_effective(span: Span | EffectiveSpan) -> EffectiveSpan:
    if isinstance(span, EffectiveSpan):
        return span
    return EffectiveSpan(span, lx.base_polarity(span.category))


def apply_negation(
    survivors: Sequence[Span | EffectiveSpan],
    negation_spans: Sequence[Span],
    bounds: Sequence[tuple[int, int]],
    config: PipelineConfig,
) -> list[EffectiveSpan]:
    """Flip the polarity of spans preceded by negation terms.

    A negation counts when it ends at most ``negation_window`` tokens before
    the span's first token, inside the same sentence. An even number of
    such negations cancels out.
    """
    out = []
    window = config.negation_window
    for item in survivors:
        eff = _as_effective(item)
        first = eff.span.tok_start
        lo = next((b[0] for b in bounds if b[0] <= first < b[1]), 0)
        hits = sum(
            1 for n in negation_spans
            if n.tok_end <= first and n.tok_start >= lo and first - (n.tok_end - 1) <= window
        )
        if hits % 2:
            eff = EffectiveSpan(eff.span, _opposite(eff.polarity))
        out.append(eff)
    return out


def _gap(a: Span, b: Span) -> tuple[int, int, int]:
    """Token distance between two spans plus the half-open gap between them."""
    if b.tok_start >= a.tok_end:
        return b.tok_start - a.tok_end + 1, a.tok_end, b.tok_start
    if a.tok_start >= b.tok_end:
        return a.tok_start - b.tok_end + 1, b.tok_end, a.tok_start
    return 0, 0, 0


def link(
    extraction: ExtractionResult,
    survivors: Sequence[EffectiveSpan],
    config: PipelineConfig,
) -> list[TargetLink]:
    keywords = extraction.keyword_spans
    if not keywords:
        return []
    sent = extraction.sentence_of()
    links: list[TargetLink] = []
    seen: set[tuple] = set()

    def add(kw: Span, pol: Span, polarity: str, rule: str) -> bool:
        key = (kw.tok_start, kw.tok_end, pol.tok_start, pol.tok_end, polarity)
        if key in seen:
            return False
        seen.add(key)
        links.append(TargetLink(kw, pol, polarity, rule))
        return True

    # proximity
    for kw in keywords:
        for eff in survivors:
            span = eff.span
            if sent[kw.tok_start] != sent[span.tok_start]:
                continue
            dist, lo, hi = _gap(kw, span)
            if dist > config.linkage_window:
                continue
            conflict = any(
                o.polarity != eff.polarity and o.span.tok_start >= lo and o.span.tok_end <= hi
                for o in survivors
            )
            if not conflict:
                add(kw, span, eff.polarity, PROXIMITY)

    # preference: keyword before gets the entry's direction, keyword after the opposite
    for pref in extraction.preference_spans:
        sid = sent[pref.tok_start]
        before = [k for k in keywords if k.tok_end <= pref.tok_start and sent[k.tok_start] == sid]
        after = [k for k in keywords if k.tok_start >= pref.tok_end and sent[k.tok_start] == sid]
        if before and after:
            direction = lx.base_polarity(pref.category)
            add(max(before, key=lambda k: k.tok_end), pref, direction, PREFERENCE)
            add(min(after, key=lambda k: k.tok_start), pref, _opposite(direction), PREFERENCE)

    # conjunction: "A و B" share whatever polarity either one is linked to
    toks = extraction.tokens
    pairs = [
        (a, b) for a in keywords for b in keywords
        if b.tok_start == a.tok_end + 1 and toks[a.tok_end].text in CONJUNCTIONS
    ]
    changed = bool(pairs)
    while changed:
        changed = False
        for a, b in pairs:
            for ln in list(links):
                if ln.keyword_span == a:
                    changed |= add(b, ln.polarity_span, ln.polarity, CONJUNCTION)
                elif ln.keyword_span == b:
                    changed |= add(a, ln.polarity_span, ln.polarity, CONJUNCTION)

    links.sort(key=lambda ln: (ln.keyword_span.tok_start, ln.polarity_span.tok_start, ln.polarity))
    return links


def aggregate_label(
    effective: Sequence[EffectiveSpan],
    change_context_spans: Sequence[Span],
    config: PipelineConfig,
) -> str:
    """Tweet-level label by weighted majority; strong terms count twice.

    Under ``after_wins`` only spans after the last contrast marker count.
    """
    considered = effective
    if config.contrast_policy == "after_wins" and change_context_spans:
        cut = max(c.tok_end for c in change_context_spans)
        considered = [e for e in effective if e.span.tok_start >= cut]
    pos = neg = 0
    for e in considered:
        weight = 2 if e.strong else 1
        if e.polarity == lx.POSITIVE:
            pos += weight
        else:
            neg += weight
    if pos > neg:
        return lx.POSITIVE
    if neg > pos:
        return lx.NEGATIVE
    return NEUTRAL


def prepare_text(text: str, resources: Resources) -> str:
    """Normalize, then transliterate arabizi when a phrase table is loaded."""
    norm = normalize(text, resources.vocab, resources.norm_opts)
    if resources.phrase_table is not None:
        norm = transliterate_text(norm, resources.phrase_table, resources.exclusions, resources.decoder)
    return norm


def classify_prepared(doc_id: str, text: str, resources: Resources, config: PipelineConfig) -> SentimentResult:
    """Classify text that has already been through :func:`prepare_text`."""
    tokens = tokenize(text)
    if not is_relevant(tokens, resources.keywords):
        return SentimentResult(doc_id, False, NEUTRAL, text=text)
    extraction = extract(text, tokens, resources, config)
    survivors = exclude(extraction, config)
    effective = apply_negation(survivors, extraction.negation_spans, extraction.sentence_bounds, config)
    links = link(extraction, effective, config)
    label = aggregate_label(effective, extraction.change_context_spans, config)
    return SentimentResult(doc_id, True, label, tuple(effective), tuple(links), text)


def classify(doc, resources: Resources, config: PipelineConfig) -> SentimentResult:
    """Classify a :class:`~arabsent.corpus.DocumentRecord` (or anything with ``id`` and ``text``)."""
    return classify_prepared(doc.id, prepare_text(doc.text, resources), resources, config)


def classify_text(text: str, resources: Resources, config: PipelineConfig, doc_id: str = "") -> SentimentResult:
    return classify_prepared(doc_id, prepare_text(text, resources), resources, config)
