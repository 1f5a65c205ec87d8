"""Per-class precision, recall and F-measure against gold labels."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from .corpus import GOLD_LABELS, read_annotated

LABELS = GOLD_LABELS


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    """3x3 counts indexed ``matrix[gold][predicted]`` in LABELS order."""

    matrix: tuple[tuple[int, int, int], ...]

    def __getitem__(self, key: tuple[str, str]) -> int:
        gold, pred = key
        return self.matrix[LABELS.index(gold)][LABELS.index(pred)]

    @property
    def total(self) -> int:
        return sum(map(sum, self.matrix))


def confusion(gold: Sequence[str], pred: Sequence[str]) -> ConfusionCounts:
    if len(gold) != len(pred):
        raise EvaluationError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted labels")
    m = [[0, 0, 0] for _ in LABELS]
    for g, p in zip(gold, pred):
        if g not in LABELS or p not in LABELS:
            raise EvaluationError(f"invalid label pair ({g!r}, {p!r})")
        m[LABELS.index(g)][LABELS.index(p)] += 1
    return ConfusionCounts(tuple(tuple(row) for row in m))


def f_measure(p: float, r: float) -> float:
    """Harmonic mean of two percentages; 0 when both are 0."""
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def precision_recall_f1(counts: ConfusionCounts, label: str) -> tuple[float, float, float]:
    """Percentages; a zero denominator yields 0."""
    k = LABELS.index(label)
    tp = counts.matrix[k][k]
    predicted = sum(row[k] for row in counts.matrix)
    actual = sum(counts.matrix[k])
    p = 100.0 * tp / predicted if predicted else 0.0
    r = 100.0 * tp / actual if actual else 0.0
    return p, r, f_measure(p, r)


@dataclass(frozen=True)
class ClassScores:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    scores: tuple[ClassScores, ...]
    counts: ConfusionCounts

    def by_label(self, label: str) -> ClassScores:
        return next(s for s in self.scores if s.label == label)

    def render(self) -> str:
        lines = [f"{'Classification':<16}{'Precision':>10}{'Recall':>10}{'F-measure':>11}"]
        for s in self.scores:
            lines.append(f"{s.label.capitalize():<16}{s.precision:>10.2f}{s.recall:>10.2f}{s.f1:>11.2f}")
        lines.append(f"({self.counts.total} documents)")
        return "\n".join(lines)

    def write_csv(self, fh: IO[str]) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["class", "precision", "recall", "f_measure", "support"])
        for s in self.scores:
            w.writerow([s.label, f"{s.precision:.2f}", f"{s.recall:.2f}", f"{s.f1:.2f}", s.support])


def report_from_labels(gold: Sequence[str], pred: Sequence[str]) -> EvalReport:
    counts = confusion(gold, pred)
    scores = []
    for label in LABELS:
        p, r, f = precision_recall_f1(counts, label)
        support = sum(counts.matrix[LABELS.index(label)])
        scores.append(ClassScores(label, round(p, 2), round(r, 2), round(f, 2), support))
    return EvalReport(tuple(scores), counts)


def _read_predictions(path: str | Path) -> dict[str, str]:
    """id -> label from a results file; gold files are accepted too."""
    preds = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                label = obj.get("label", obj.get("gold"))
                doc_id = obj["id"]
            except (json.JSONDecodeError, KeyError, AttributeError):
                raise EvaluationError(f"{path}:{line_no}: not a result record") from None
            if label not in LABELS:
                raise EvaluationError(f"{path}:{line_no}: invalid label {label!r}")
            preds[doc_id] = label
    return preds


def eval_report(gold_file: str | Path, pred_file: str | Path) -> EvalReport:
    gold = {a.record.id: a.gold_label for a in read_annotated(gold_file, strict=True)}
    pred = _read_predictions(pred_file)
    only_gold = sorted(set(gold) - set(pred))
    only_pred = sorted(set(pred) - set(gold))
    if only_gold or only_pred:
        raise EvaluationError(
            f"id sets differ: missing predictions for {only_gold[:20]}, "
            f"predictions without gold for {only_pred[:20]}"
        )
    ids = sorted(gold)
    return report_from_labels([gold[i] for i in ids], [pred[i] for i in ids])
