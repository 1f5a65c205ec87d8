"""Author segments and per-segment sentiment counts."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .corpus import DocumentRecord
from .lexicon import bundled_path
from .normalizer import normalize
from .tokens import token_texts

UNKNOWN = "unknown"
GENDERS = ("male", "female", UNKNOWN)
MARITAL = ("single", "married", UNKNOWN)
PARENTAL = ("parent", "not_stated")
DIMENSIONS = ("gender", "country", "gender_x_polarity", "country_x_polarity")

_FIELDS = {
    "gender": GENDERS,
    "marital_status": MARITAL,
    "parental_status": PARENTAL,
    "country": None,
    "city": None,
}


class PatternRuleError(ValueError):
    pass


@dataclass(frozen=True)
class AuthorProfile:
    user_id: str = ""
    gender: str = UNKNOWN
    country: str = UNKNOWN
    city: str | None = None
    marital_status: str = UNKNOWN
    parental_status: str = "not_stated"


@dataclass(frozen=True)
class PatternRule:
    tokens: tuple[str, ...]
    assignments: tuple[tuple[str, str], ...]


def _pattern_tokens(text: str) -> tuple[str, ...]:
    return token_texts(normalize(text).lower())


def parse_rule(line: str, where: str = "<string>") -> PatternRule:
    parts = line.split("\t")
    if len(parts) != 2:
        raise PatternRuleError(f"{where}: expected pattern<TAB>assignments")
    pattern, assigns = parts
    tokens = _pattern_tokens(pattern)
    if not tokens:
        raise PatternRuleError(f"{where}: empty pattern")
    assignments = []
    for item in assigns.split(","):
        name, _, value = item.strip().partition("=")
        if name not in _FIELDS or not value:
            raise PatternRuleError(f"{where}: bad assignment {item!r}")
        allowed = _FIELDS[name]
        if allowed is not None and value not in allowed:
            raise PatternRuleError(f"{where}: {name} cannot be {value!r}")
        assignments.append((name, value))
    return PatternRule(tokens, tuple(assignments))


def load_pattern_rules(path: str | Path | None = None) -> list[PatternRule]:
    path = path or bundled_path("profile_patterns.tsv")
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if line.strip() and not line.startswith("#"):
                rules.append(parse_rule(line, f"{path}:{lineno}"))
    return rules


def load_country_table(path: str | Path | None = None) -> dict[str, str]:
    path = path or bundled_path("countries.tsv")
    table = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            name, code = line.split("\t")
            table[normalize(name).strip().lower()] = code.upper()
    for code in list(table.values()):
        table[code.lower()] = code
    return table


_COUNTRIES: dict[str, str] | None = None


def canonical_country(value: str | None, table: Mapping[str, str] | None = None) -> str:
    """ISO alpha-2 code when the name is recognized, otherwise the value verbatim."""
    global _COUNTRIES
    if value is None or not value.strip():
        return UNKNOWN
    if table is None:
        if _COUNTRIES is None:
            _COUNTRIES = load_country_table()
        table = _COUNTRIES
    return table.get(normalize(value).strip().lower(), value)


def _contains(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    return any(tuple(haystack[i:i + n]) == tuple(needle) for i in range(len(haystack) - n + 1))


def extract_profile(record: DocumentRecord, rules: Sequence[PatternRule] = ()) -> AuthorProfile:
    """Profile from metadata, with text patterns filling fields metadata leaves unknown.

    Patterns are tried in order over the tweet text and the profile
    description; the first rule to set a field wins.
    """
    meta = record.author
    inferred: dict[str, str] = {}
    if rules:
        texts = [record.text] + ([meta.description] if meta and meta.description else [])
        token_lists = [_pattern_tokens(t) for t in texts]
        for rule in rules:
            if any(_contains(toks, rule.tokens) for toks in token_lists):
                for name, value in rule.assignments:
                    inferred.setdefault(name, value)

    def pick(name: str, meta_value: str | None, allowed=None) -> str | None:
        if meta_value and meta_value != UNKNOWN and (allowed is None or meta_value in allowed):
            return meta_value
        return inferred.get(name)

    gender = pick("gender", meta.gender if meta else None, GENDERS)
    marital = pick("marital_status", meta.marital_status if meta else None, MARITAL)
    country = pick("country", meta.country if meta else None)
    city = pick("city", meta.city if meta else None)
    return AuthorProfile(
        user_id=(meta.user_id if meta and meta.user_id else ""),
        gender=gender or UNKNOWN,
        country=canonical_country(country),
        city=city,
        marital_status=marital or UNKNOWN,
        parental_status=inferred.get("parental_status", "not_stated"),
    )


@dataclass
class AggregateReport:
    """Per-bucket positive/negative counts.

    ``gender``/``country`` and their ``_x_polarity`` variants share the same
    rows; the plain form is meant for volume charts, the crossed form for
    side-by-side polarity charts.
    """

    dimension: str
    counts: Counter = field(default_factory=Counter)

    @property
    def rows(self) -> list[tuple[str, int, int]]:
        buckets = sorted({b for b, _ in self.counts})
        return [(b, self.counts[(b, "positive")], self.counts[(b, "negative")]) for b in buckets]

    def totals(self) -> tuple[int, int]:
        pos = sum(v for (_, pol), v in self.counts.items() if pol == "positive")
        neg = sum(v for (_, pol), v in self.counts.items() if pol == "negative")
        return pos, neg

    def merge(self, other: "AggregateReport") -> "AggregateReport":
        if other.dimension != self.dimension:
            raise ValueError("cannot merge reports over different dimensions")
        return AggregateReport(self.dimension, self.counts + other.counts)

    def write_csv(self, fh: IO[str], include_total: bool = True) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bucket", "positive", "negative"])
        for row in self.rows:
            writer.writerow(row)
        if include_total:
            writer.writerow(["total", *self.totals()])


def _bucket(profile: AuthorProfile, dimension: str) -> str:
    if dimension.startswith("gender"):
        return profile.gender
    return profile.country


def aggregate(results: Iterable, profiles: Mapping[str, AuthorProfile], dimension: str) -> AggregateReport:
    """Count relevant positive/negative results per segment; neutrals are ignored.

    ``results`` items need ``doc_id`` (or ``id``), ``relevant`` and ``label``
    attributes or keys. Results whose id has no profile land in ``unknown``.
    """
    if dimension not in DIMENSIONS:
        raise ValueError(f"dimension must be one of {DIMENSIONS}")
    report = AggregateReport(dimension)
    missing = AuthorProfile()
    for res in results:
        if isinstance(res, Mapping):
            doc_id, relevant, label = res["id"], res["relevant"], res["label"]
        else:
            doc_id, relevant, label = res.doc_id, res.relevant, res.label
        if not relevant or label not in ("positive", "negative"):
            continue
        report.counts[(_bucket(profiles.get(doc_id, missing), dimension), label)] += 1
    return report


def merge_reports(reports: Iterable[AggregateReport]) -> AggregateReport:
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    out = AggregateReport(reports[0].dimension)
    for r in reports:
        out = out.merge(r)
    return out
