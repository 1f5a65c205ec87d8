import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arabsent import lexicon as lx
from arabsent.classifier import (
    CONJUNCTION,
    NEUTRAL,
    PREFERENCE,
    PROXIMITY,
    EffectiveSpan,
    PipelineConfig,
    aggregate_label,
    apply_negation,
    classify,
    classify_text,
    exclude,
    extract,
    is_relevant,
    link,
    prepare_text,
)
from arabsent.corpus import DocumentRecord
from arabsent.normalizer import normalize
from arabsent.tokens import sentence_bounds, tokenize

from conftest import ETISALAT, FODAFONE, SERVICE

CHANGE_CONTEXT_TWEET = (
    "عملكم رائع جدا وبرنامج متكامل ومفيد، لكن ينقصه شي وهو عدم توفير "
    "خيار بتغير الخط الي خط جهاز الجوال نفسه"
)


def _extract(text, resources, config):
    norm = prepare_text(text, resources)
    return extract(norm, tokenize(norm), resources, config)


def _texts(spans, text):
    return [text[s.start:s.end] for s in spans]


# tokenizer

def test_tokenize_whitespace():
    toks = tokenize("صباح الخير")
    assert [t.text for t in toks] == ["صباح", "الخير"]
    assert sentence_bounds("صباح الخير", toks) == [(0, 2)]


def test_tokenize_question_mark():
    text = normalize("إيه القرف ده؟")
    toks = tokenize(text)
    assert [t.text for t in toks] == ["ايه", "القرف", "ده", "؟"]
    assert toks[-1].kind == "punct"


def test_tokenize_arabic_comma():
    assert [t.text for t in tokenize("رائع، لكن سيء")] == ["رائع", "،", "لكن", "سيء"]


def test_tokenize_kinds_and_offsets():
    text = "جميل 2015 😍!"
    toks = tokenize(text)
    assert [(t.text, t.kind) for t in toks] == [("جميل", "word"), ("2015", "number"), ("😍", "emoji"), ("!", "punct")]
    for t in toks:
        assert text[t.start:t.end] == t.text


def test_sentence_bounds_on_enders_and_newlines():
    text = "جميل. سيء\nرائع؟ ok"
    toks = tokenize(text)
    assert sentence_bounds(text, toks) == [(0, 2), (2, 3), (3, 5), (5, 6)]


# extraction

def test_extract_blocker_and_polarity(generic):
    res, cfg = generic
    ex = _extract("صباح الخير", res, cfg)
    assert _texts(ex.polarity_spans, ex.text) == ["الخير"]
    assert _texts(ex.blocker_spans, ex.text) == ["صباح الخير"]


def test_extract_change_context(generic):
    res, cfg = generic
    ex = _extract(CHANGE_CONTEXT_TWEET, res, cfg)
    assert _texts(ex.change_context_spans, ex.text) == ["لكن"]


def test_extract_nothing(generic):
    res, cfg = generic
    ex = _extract("ذهبت الى السوق", res, cfg)
    assert not any([ex.polarity_spans, ex.blocker_spans, ex.question_spans, ex.change_context_spans,
                    ex.negation_spans, ex.preference_spans, ex.keyword_spans])


def test_extract_question_mark_and_word(generic):
    res, cfg = generic
    ex = _extract("هل الخدمة جيدة؟", res, cfg)
    assert _texts(ex.question_spans, ex.text) == ["هل", "؟"]


# exclusion

def test_exclude_blocker_overlap(generic):
    res, cfg = generic
    assert exclude(_extract("صباح الخير", res, cfg), cfg) == []


def test_strong_term_survives_question(generic):
    res, cfg = generic
    ex = _extract("إيه القرف ده؟", res, cfg)
    survivors = exclude(ex, cfg)
    assert [s.category for s in survivors] == [lx.STRONG_NEGATIVE]


def test_question_drops_ordinary_term(generic):
    res, cfg = generic
    assert exclude(_extract("هل الخدمة جيدة؟", res, cfg), cfg) == []


def test_question_scope_sentence_vs_document(generic):
    res, cfg = generic
    text = "الخدمة ممتازة. هل عندكم باقة؟"
    assert len(exclude(_extract(text, res, cfg), cfg)) == 1
    doc_cfg = PipelineConfig(question_scope="document", domains=cfg.domains, keywords=cfg.keywords)
    assert exclude(_extract(text, res, doc_cfg), doc_cfg) == []


# negation

def _negated(text, res, cfg):
    ex = _extract(text, res, cfg)
    return apply_negation(exclude(ex, cfg), ex.negation_spans, ex.sentence_bounds, cfg)


def test_negation_flips(generic):
    res, cfg = generic
    assert [e.polarity for e in _negated("مش جميل", res, cfg)] == [lx.NEGATIVE]


def test_no_negation_unchanged(generic):
    res, cfg = generic
    assert [e.polarity for e in _negated("جميل", res, cfg)] == [lx.POSITIVE]


def test_negation_outside_window(generic):
    res, cfg = generic
    # مش .. 3 tokens before جميل
    assert [e.polarity for e in _negated("مش الشاي ده جميل", res, cfg)] == [lx.POSITIVE]
    assert [e.polarity for e in _negated("مش ده جميل", res, cfg)] == [lx.NEGATIVE]


def test_negation_stops_at_sentence_boundary(generic):
    res, cfg = generic
    assert [e.polarity for e in _negated("مش . جميل", res, cfg)] == [lx.POSITIVE]


def test_double_negation_and_involution(generic):
    res, cfg = generic
    ex = _extract("مش مش جميل", res, cfg)
    once = apply_negation(exclude(ex, cfg), ex.negation_spans, ex.sentence_bounds, cfg)
    assert [e.polarity for e in once] == [lx.POSITIVE]
    ex = _extract("مش جميل", res, cfg)
    once = apply_negation(exclude(ex, cfg), ex.negation_spans, ex.sentence_bounds, cfg)
    twice = apply_negation(once, ex.negation_spans, ex.sentence_bounds, cfg)
    assert [e.polarity for e in once] == [lx.NEGATIVE]
    assert [e.polarity for e in twice] == [lx.POSITIVE]


def test_strength_preserved_under_negation(generic):
    res, cfg = generic
    (eff,) = _negated("مش انت ملاك", res, cfg)
    assert eff.polarity == lx.NEGATIVE and eff.strong


# linkage

def _links(text, res, cfg):
    ex = _extract(text, res, cfg)
    eff = apply_negation(exclude(ex, cfg), ex.negation_spans, ex.sentence_bounds, cfg)
    return [(ex.text[ln.keyword_span.start:ln.keyword_span.end], ln.polarity, ln.rule) for ln in link(ex, eff, cfg)]


def test_preference_link(generic):
    res, cfg = generic
    assert _links(f"{FODAFONE} أفضل من {ETISALAT}", res, cfg) == [
        (FODAFONE, lx.POSITIVE, PREFERENCE),
        (ETISALAT, lx.NEGATIVE, PREFERENCE),
    ]


def test_preference_negative_direction(generic):
    res, cfg = generic
    assert _links(f"{FODAFONE} أسوأ من {ETISALAT}", res, cfg) == [
        (FODAFONE, lx.NEGATIVE, PREFERENCE),
        (ETISALAT, lx.POSITIVE, PREFERENCE),
    ]


def test_conjunction_links_both(generic):
    res, cfg = generic
    links = _links(f"{FODAFONE} و {ETISALAT} صعبين", res, cfg)
    assert {(k, p) for k, p, _ in links} == {(FODAFONE, lx.NEGATIVE), (ETISALAT, lx.NEGATIVE)}


def test_conjunction_rule_reaches_beyond_window(generic):
    res, _ = generic
    cfg = PipelineConfig(linkage_window=1, domains={"general", "teleco"}, keywords=(FODAFONE, ETISALAT))
    links = _links(f"{FODAFONE} و {ETISALAT} صعبين", res, cfg)
    assert links == [(FODAFONE, lx.NEGATIVE, CONJUNCTION), (ETISALAT, lx.NEGATIVE, PROXIMITY)]


def test_proximity_window_boundary(generic):
    res, cfg = generic
    five_away = f"{SERVICE} كان في يوم من جميل"
    six_away = f"{SERVICE} كان في يوم من الايام جميل"
    assert _links(five_away, res, cfg) == [("الخدمه", lx.POSITIVE, PROXIMITY)]
    assert _links(six_away, res, cfg) == []


def test_proximity_blocked_by_conflicting_term(generic):
    res, cfg = generic
    links = _links(f"{SERVICE} سيء جميل", res, cfg)
    assert links == [("الخدمه", lx.NEGATIVE, PROXIMITY)]


# aggregation

def _eff(category, polarity, tok):
    span = lx.Span(tok, tok + 1, category, lx.LexiconEntry("x", category), tok, tok + 1)
    return EffectiveSpan(span, polarity)


def test_majority_label():
    cfg = PipelineConfig()
    spans = [_eff(lx.POSITIVE, lx.POSITIVE, 0), _eff(lx.POSITIVE, lx.POSITIVE, 1), _eff(lx.NEGATIVE, lx.NEGATIVE, 2)]
    assert aggregate_label(spans, [], cfg) == lx.POSITIVE


def test_zero_and_tie_are_neutral():
    cfg = PipelineConfig()
    assert aggregate_label([], [], cfg) == NEUTRAL
    assert aggregate_label([_eff(lx.POSITIVE, lx.POSITIVE, 0), _eff(lx.NEGATIVE, lx.NEGATIVE, 1)], [], cfg) == NEUTRAL


def test_strong_counts_double():
    cfg = PipelineConfig()
    spans = [_eff(lx.STRONG_NEGATIVE, lx.NEGATIVE, 0), _eff(lx.POSITIVE, lx.POSITIVE, 1)]
    assert aggregate_label(spans, [], cfg) == lx.NEGATIVE


def test_contrast_policies(generic):
    res, cfg = generic
    ex = _extract(CHANGE_CONTEXT_TWEET, res, cfg)
    eff = apply_negation(exclude(ex, cfg), ex.negation_spans, ex.sentence_bounds, cfg)
    assert aggregate_label(eff, ex.change_context_spans, cfg) == lx.NEGATIVE
    majority = PipelineConfig(contrast_policy="majority")
    assert aggregate_label(eff, ex.change_context_spans, majority) == lx.POSITIVE


# relevance and full classification

def test_relevance_keyword(teleco):
    res, _ = teleco
    assert is_relevant(tokenize(normalize("عندي مشكلة في اي دي اس ال")), res.keywords)
    assert not is_relevant(tokenize("ذهبت الى السوق"), res.keywords)


def test_relevance_elongated_keyword(teleco):
    res, cfg = teleco
    assert classify_text("النتتتتت بطيء", res, cfg).relevant


def test_classify_irrelevant(teleco):
    res, cfg = teleco
    r = classify(DocumentRecord("d1", "الجو جميل النهارده"), res, cfg)
    assert (r.relevant, r.label, r.links) == (False, NEUTRAL, ())


def test_classify_relevant_positive(teleco):
    res, cfg = teleco
    r = classify(DocumentRecord("d2", "الخدمة جميلة"), res, cfg)
    assert (r.relevant, r.label) == (True, lx.POSITIVE)
    assert [(ln.rule, ln.polarity) for ln in r.links] == [(PROXIMITY, lx.POSITIVE)]


def test_classify_blocker_kills_polarity(teleco):
    res, cfg = teleco
    r = classify(DocumentRecord("d3", "صباح الخير الخدمة"), res, cfg)
    assert (r.relevant, r.label) == (True, NEUTRAL)


def test_result_dict_schema(teleco):
    res, cfg = teleco
    d = classify(DocumentRecord("d4", "الخدمة مش جميلة"), res, cfg).to_dict()
    assert d["label"] == lx.NEGATIVE
    assert d["evidence"] == [{"start": 10, "end": 15, "surface": "جميله", "category": "positive",
                              "effective": "negative"}]
    assert d["links"] == [{"keyword": "الخدمه", "polarity": "negative", "rule": "proximity"}]


def test_pipeline_transliterates_after_normalizing(teleco):
    res, cfg = teleco
    assert prepare_text("e7naaaa love الخدمةةة", res) == "احنا love الخدمه"


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(linkage_window=0)
    with pytest.raises(ValueError):
        PipelineConfig(question_scope="paragraph")


WORDS = ["الخدمة", "جميل", "سيء", "صباح", "الخير", "مش", "لكن", "هل", "؟", ".", "حبيب", "انت", "ملاك",
         "إيه", "القرف", "ده", "فودافون", "و", "اتصالات", "أفضل", "من", "رائع", "جدا", "\n"]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=20))
def test_rule_invariants(generic, words):
    res, cfg = generic
    text = " ".join(words)
    norm = prepare_text(text, res)
    ex = extract(norm, tokenize(norm), res, cfg)
    survivors = exclude(ex, cfg)
    assert set(survivors) <= set(ex.polarity_spans)
    for s in survivors:
        assert not any(s.start < b.end and b.start < s.end for b in ex.blocker_spans)
    sent = ex.sentence_of()
    questioned = {sent[q.tok_start] for q in ex.question_spans}
    for s in survivors:
        if sent[s.tok_start] in questioned:
            assert s.category in lx.STRONG_CATEGORIES
    r = classify_text(text, res, cfg)
    if not r.relevant:
        assert r.label == NEUTRAL and not r.links
    if r.label != NEUTRAL:
        assert r.evidence
