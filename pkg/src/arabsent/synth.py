"""Deterministic synthetic tweet corpora for scale and property checks."""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Iterator

from . import lexicon as lx
from .config import RunConfig, load_config

_FILLER = ["انا", "النهارده", "والله", "يا", "جماعة", "في", "على", "من", "عن", "كان", "ده", "دي",
           "الناس", "كل", "يوم", "شي", "بصراحة", "اخيرا", "امبارح", "عشان"]
_ARABIZI = ["e7na", "3ayz", "7elw", "mesh", "kwayes", "ya3ni", "5alas", "m3lsh"]
_ENGLISH = ["love", "lol", "omg", "internet", "good"]
_EMOJI = ["😍", "😡", "👍", "🙏", "😂"]
_DIACRITIC = "َ"
_COUNTRIES = ["Egypt", "مصر", "Saudi Arabia", "SA", "UAE", "الكويت", "Jordan", "Narnia", None]
_GENDERS = ["male", "female", "unknown", None]
_DESCRIPTIONS = ["Got a new a lovely child", "Facing motherhood challenges with my new baby",
                 "مهندس اتصالات", "", None]


def _pick(rng: random.Random, entries: list[lx.LexiconEntry]) -> str:
    return rng.choice(entries).surface


def _decorate(rng: random.Random, word: str) -> str:
    r = rng.random()
    if r < 0.05 and len(word) > 2:
        i = rng.randrange(1, len(word) - 1)
        return word[:i] + word[i] * rng.randint(3, 6) + word[i + 1:]
    if r < 0.08:
        return word + _DIACRITIC
    if r < 0.10:
        return word[0] + "ـــ" + word[1:]
    return word


def synthetic_texts(cfg: RunConfig, seed: int = 0) -> Iterator[str]:
    rng = random.Random(seed)
    entries = lx.load_lexicon(cfg.lexicons).entries
    by_cat: dict[str, list[lx.LexiconEntry]] = {}
    for e in entries:
        by_cat.setdefault(e.category, []).append(e)
    keywords = list(cfg.pipeline.keywords) or ["الخدمه"]
    while True:
        words: list[str] = []
        for _ in range(rng.randint(4, 18)):
            r = rng.random()
            if r < 0.12:
                words.append(rng.choice(keywords))
            elif r < 0.30:
                words.append(_pick(rng, by_cat[rng.choice([lx.POSITIVE, lx.NEGATIVE])]))
            elif r < 0.33:
                words.append(_pick(rng, by_cat[rng.choice([lx.STRONG_POSITIVE, lx.STRONG_NEGATIVE])]))
            elif r < 0.37:
                words.append(_pick(rng, by_cat[lx.NEGATION]))
            elif r < 0.40:
                words.append(_pick(rng, by_cat[lx.BLOCKER]))
            elif r < 0.42:
                words.append(_pick(rng, by_cat[lx.CHANGE_CONTEXT]))
            elif r < 0.44:
                words.append(_pick(rng, by_cat[rng.choice([lx.PREFERENCE_POSITIVE, lx.PREFERENCE_NEGATIVE])]))
            elif r < 0.46:
                words.append(_pick(rng, by_cat[lx.QUESTION_WORD]))
            elif r < 0.50:
                words.append(rng.choice(["و", "،", "!", "؟", ".", "?"]))
            elif r < 0.55:
                words.append(rng.choice(_ARABIZI))
            elif r < 0.57:
                words.append(rng.choice(_ENGLISH))
            elif r < 0.60:
                words.append(rng.choice(_EMOJI))
            else:
                words.append(rng.choice(_FILLER))
        yield " ".join(_decorate(rng, w) for w in words)


def synthetic_records(cfg: RunConfig, n: int, seed: int = 0, with_noise: bool = True) -> Iterator[dict]:
    """``n`` record dicts. With ``with_noise`` a few are retweets or repeats."""
    rng = random.Random(seed + 1)
    texts = synthetic_texts(cfg, seed)
    recent: list[str] = []
    for i in range(n):
        text = next(texts)
        if with_noise:
            r = rng.random()
            if r < 0.02 and recent:
                text = rng.choice(recent)
            elif r < 0.03:
                text = "RT @user" + str(rng.randint(1, 99)) + ": " + text
        recent.append(text)
        if len(recent) > 50:
            recent.pop(0)
        author = {"user_id": f"u{rng.randint(1, n // 3 + 1)}"}
        gender = rng.choice(_GENDERS)
        if gender is not None:
            author["gender"] = gender
        country = rng.choice(_COUNTRIES)
        if country is not None:
            author["country"] = country
        desc = rng.choice(_DESCRIPTIONS)
        if desc is not None:
            author["description"] = desc
        yield {
            "id": f"syn-{seed}-{i:07d}",
            "text": text,
            "source": "twitter",
            "created_at": f"2015-01-{1 + i % 31:02d}T{i % 24:02d}:00:00Z",
            "author": author,
        }


def write_synthetic(path: str | Path, n: int, config: RunConfig | str | Path = "bundled:egyptian_teleco.json",
                    seed: int = 0, with_noise: bool = True) -> int:
    cfg = config if isinstance(config, RunConfig) else load_config(config)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in synthetic_records(cfg, n, seed, with_noise):
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return n
