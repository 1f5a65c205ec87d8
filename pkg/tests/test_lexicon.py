import logging
import random

import pytest

from arabsent import lexicon as lx
from arabsent.normalizer import normalize
from arabsent.tokens import tokenize

from oracles import naive_matches


def _lex_file(tmp_path, lines, name="lex.tsv"):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p


def _spans(text, matcher):
    return [(text[s.start:s.end], s.category, s.start, s.end) for s in lx.find_matches(tokenize(text), matcher)]


def test_load_multi_token_positive(tmp_path):
    lex = lx.load_lexicon([_lex_file(tmp_path, ["جدا جميل\tpositive\tmsa\tgeneral"])])
    (entry,) = lex.entries
    assert entry.surface == "جدا جميل"
    assert entry.category == lx.POSITIVE
    assert entry.tokens == ("جدا", "جميل")


def test_load_blocker(tmp_path):
    lex = lx.load_lexicon([_lex_file(tmp_path, ["صباح الخير\tblocker\tmsa\tgeneral"])])
    assert lex.entries[0].category == lx.BLOCKER


def test_duplicate_lines_collapse_with_warning(tmp_path, caplog):
    path = _lex_file(tmp_path, ["# header", "جميل\tpositive\tmsa\tgeneral", "جميل\tpositive\tmsa\tgeneral"])
    with caplog.at_level(logging.WARNING):
        lex = lx.load_lexicon([path])
    assert len(lex.entries) == 1
    assert "duplicate" in caplog.text


def test_surfaces_renormalized_on_load(tmp_path):
    lex = lx.load_lexicon([_lex_file(tmp_path, ["جميـــلة\tpositive\tmsa\tgeneral"])])
    assert lex.entries[0].surface == "جميله"


@pytest.mark.parametrize("line, msg", [
    ("x\tgreat\tmsa\tgeneral", "unknown category"),
    ("x\tpositive\tlevantine\tgeneral", "unknown dialect"),
    ("x\tpositive", "expected 4"),
])
def test_load_errors_have_line_numbers(tmp_path, line, msg):
    path = _lex_file(tmp_path, ["# c", line])
    with pytest.raises(lx.LexiconError, match=rf":2: {msg}"):
        lx.load_lexicon([path])


def test_sample_lexicon_is_normalization_fixed_point(sample_lexicon):
    for e in sample_lexicon.entries:
        assert e.surface == normalize(e.surface)
        assert "\t" not in e.surface


def test_compile_filters():
    entries = [lx.LexiconEntry(f"w{i}", lx.POSITIVE, d, dom)
               for i, (d, dom) in enumerate([("msa", "general"), ("saudi", "general"), ("egyptian", "teleco"),
                                             ("egyptian", "general"), ("msa", "teleco"), ("saudi", "teleco"),
                                             ("msa", "government"), ("saudi", "employment"),
                                             ("egyptian", "government"), ("msa", "employment")])]
    m = lx.compile_matcher(entries, {"egyptian", "msa"}, {"general", "teleco"})
    assert len(m) == 4
    assert all(e.dialect != "saudi" for e in m.entries)


def test_compile_errors():
    entries = [lx.LexiconEntry("w", lx.POSITIVE, "saudi", "general")]
    with pytest.raises(lx.LexiconError):
        lx.compile_matcher(entries, {"egyptian"}, {"general"})
    with pytest.raises(lx.LexiconError):
        lx.compile_matcher(entries, set(), {"general"})


def test_compile_deterministic(sample_lexicon):
    a = lx.compile_matcher(sample_lexicon, {"msa", "egyptian"}, {"general", "teleco"}).to_bytes()
    b = lx.compile_matcher(sample_lexicon, {"msa", "egyptian"}, {"general", "teleco"}).to_bytes()
    assert a == b


def test_blocker_and_polarity_both_reported():
    m = lx.Matcher([lx.LexiconEntry("صباح الخير", lx.BLOCKER), lx.LexiconEntry("الخير", lx.POSITIVE)])
    assert _spans("صباح الخير", m) == [
        ("صباح الخير", lx.BLOCKER, 0, 10),
        ("الخير", lx.POSITIVE, 5, 10),
    ]


def test_whole_token_only():
    m = lx.Matcher([lx.LexiconEntry("الخير", lx.POSITIVE)])
    assert _spans("الخيرات", m) == []


def test_longest_within_category():
    m = lx.Matcher([lx.LexiconEntry("اوي حلو", lx.POSITIVE), lx.LexiconEntry("حلو", lx.POSITIVE)])
    assert _spans("اوي حلو", m) == [("اوي حلو", lx.POSITIVE, 0, 7)]


def test_punctuation_is_its_own_token():
    m = lx.Matcher([lx.LexiconEntry(normalize("إيه القرف ده؟"), lx.STRONG_NEGATIVE)])
    assert _spans("ايه القرف ده؟", m) == [("ايه القرف ده؟", lx.STRONG_NEGATIVE, 0, 13)]


def _random_case(rng: random.Random):
    vocab = ["ا", "ب", "ت", "ث", "ج", "ح"]
    cats = [lx.POSITIVE, lx.NEGATIVE, lx.BLOCKER]
    patterns = []
    for _ in range(rng.randint(1, 50)):
        toks = tuple(rng.choice(vocab) for _ in range(rng.randint(1, 4)))
        patterns.append((toks, rng.choice(cats)))
    words = [rng.choice(vocab) for _ in range(rng.randint(0, 40))]
    return patterns, words


def test_matcher_equals_naive_scan_sample():
    rng = random.Random(11)
    for _ in range(300):
        patterns, words = _random_case(rng)
        matcher = lx.Matcher([lx.LexiconEntry(" ".join(t), c) for t, c in patterns])
        text = " ".join(words)
        got = sorted((s.tok_start, s.tok_end, s.category, s.entry.tokens)
                     for s in lx.find_matches(tokenize(text), matcher))
        assert got == naive_matches(words, patterns)


def test_span_offsets_slice_matched_tokens():
    rng = random.Random(5)
    for _ in range(100):
        patterns, words = _random_case(rng)
        matcher = lx.Matcher([lx.LexiconEntry(" ".join(t), c) for t, c in patterns])
        text = " ".join(words)
        for s in lx.find_matches(tokenize(text), matcher):
            assert text[s.start:s.end] == " ".join(words[s.tok_start:s.tok_end])
