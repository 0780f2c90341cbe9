"""Evaluation harness over external entailment scores.

Covers multiple-choice accuracy via per-question argmax, per-category
breakdowns, gain/loss comparison of two score sets, and factual-consistency
classification (threshold tuned for balanced accuracy) and ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .base import ParamsMixin
from .errors import DataError
from .question_analysis import CategorySet
from .records import CfcsLabeledItem, CfcsPair, NliExample, ScoreRecord

_NAME_WIDTH = 18
_VALUE_WIDTH = 10
_COUNT_WIDTH = 6


@dataclass(frozen=True)
class McrcReport:
    """Argmax accuracy over questions, with per-question predictions."""

    accuracy: float
    n_questions: int
    per_question: dict

    def correct_ids(self) -> frozenset:
        return frozenset(q for q, (_, ok) in self.per_question.items() if ok)

    def to_records(self) -> list[dict]:
        rows = [{"kind": "summary", "accuracy": round(self.accuracy, 2), "n": self.n_questions}]
        for question_id in sorted(self.per_question):
            predicted, ok = self.per_question[question_id]
            rows.append(
                {"kind": "question", "id": question_id, "predicted_index": predicted, "correct": ok}
            )
        return rows


@dataclass(frozen=True)
class GainLossReport:
    """Questions model A got right and B missed (gain) and vice versa (loss)."""

    gain_ids: frozenset
    loss_ids: frozenset
    gain_category_distribution: dict
    loss_category_distribution: dict


@dataclass(frozen=True)
class CfcsReport:
    threshold: float
    balanced_accuracy: float
    ranking_accuracy: float | None = None


def _group_examples(examples: Sequence[NliExample]) -> dict[str, list[NliExample]]:
    groups: dict[str, list[NliExample]] = {}
    seen_ids: set[str] = set()
    for example in examples:
        if example.id in seen_ids:
            raise DataError(f"duplicate example id {example.id!r}")
        seen_ids.add(example.id)
        groups.setdefault(example.question_id or example.id, []).append(example)
    return groups


def score_mcrc(examples: Sequence[NliExample], scores: Sequence[ScoreRecord]) -> McrcReport:
    """Per-question argmax over entailment scores; ties pick the lowest index."""
    score_map: dict[str, float] = {}
    for record in scores:
        if record.id in score_map:
            raise DataError(f"duplicate score id {record.id!r}")
        score_map[record.id] = record.entail

    groups = _group_examples(examples)
    if not groups:
        raise DataError("no examples to score")
    missing = sorted(e.id for e in examples if e.id not in score_map)
    if missing:
        raise DataError(f"missing scores for ids: {', '.join(missing)}")

    per_question: dict = {}
    correct_count = 0
    for question_id, group in groups.items():
        group = sorted(group, key=lambda e: e.option_index)
        if len(group) < 2:
            raise DataError(f"question {question_id!r} has fewer than 2 scored options")
        if len({e.option_index for e in group}) != len(group):
            raise DataError(f"question {question_id!r} has duplicate option indices")
        best = group[0]
        best_score = score_map[best.id]
        for example in group[1:]:
            if score_map[example.id] > best_score:
                best, best_score = example, score_map[example.id]
        is_correct = best.label == "entailment"
        per_question[question_id] = (best.option_index, is_correct)
        correct_count += is_correct

    n = len(per_question)
    return McrcReport(accuracy=100.0 * correct_count / n, n_questions=n, per_question=per_question)


def _tags_of(categories) -> tuple[str, ...]:
    if isinstance(categories, CategorySet):
        return categories.tags()
    return tuple(categories)


def category_accuracy(report: McrcReport, categories: Mapping) -> dict[str, tuple[float, int]]:
    """Accuracy per category tag; non-exclusive, empty categories omitted."""
    totals: dict[str, int] = {}
    hits: dict[str, int] = {}
    for question_id, (_, is_correct) in report.per_question.items():
        if question_id not in categories:
            raise DataError(f"no categories for question {question_id!r}")
        for tag in _tags_of(categories[question_id]):
            totals[tag] = totals.get(tag, 0) + 1
            hits[tag] = hits.get(tag, 0) + is_correct
    return {
        tag: (100.0 * hits[tag] / totals[tag], totals[tag]) for tag in sorted(totals)
    }


def gain_loss(report_a: McrcReport, report_b: McrcReport, categories: Mapping) -> GainLossReport:
    """Regions where exactly one model is right, with category distributions."""
    ids_a = set(report_a.per_question)
    ids_b = set(report_b.per_question)
    if ids_a != ids_b:
        difference = sorted(ids_a.symmetric_difference(ids_b))
        raise DataError(f"reports cover different questions: {', '.join(difference)}")

    correct_a = report_a.correct_ids()
    correct_b = report_b.correct_ids()
    gain = frozenset(correct_a - correct_b)
    loss = frozenset(correct_b - correct_a)

    def distribution(region: frozenset) -> dict[str, float]:
        if not region:
            return {}
        counts: dict[str, int] = {}
        for question_id in region:
            if question_id not in categories:
                raise DataError(f"no categories for question {question_id!r}")
            for tag in _tags_of(categories[question_id]):
                counts[tag] = counts.get(tag, 0) + 1
        return {tag: 100.0 * counts[tag] / len(region) for tag in sorted(counts)}

    return GainLossReport(
        gain_ids=gain,
        loss_ids=loss,
        gain_category_distribution=distribution(gain),
        loss_category_distribution=distribution(loss),
    )


# -- CFCS metrics --


def _split_scores(items: Sequence[CfcsLabeledItem]) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray([item.score for item in items], dtype=np.float64)
    consistent = np.asarray([item.label == "consistent" for item in items], dtype=bool)
    if not consistent.any() or consistent.all():
        raise DataError("threshold tuning needs at least one item of each label")
    return scores, consistent


def tune_threshold(items: Sequence[CfcsLabeledItem]) -> tuple[float, float]:
    """Best balanced-accuracy threshold (predict consistent iff score >= t).

    Candidates are the midpoints between adjacent distinct scores plus
    sentinels below the minimum and above the maximum; ties go to the
    smallest threshold. Returns (threshold, balanced accuracy percent).
    """
    scores, consistent = _split_scores(items)
    order = np.argsort(scores, kind="stable")
    sorted_scores = scores[order]
    sorted_consistent = consistent[order]

    distinct = np.unique(sorted_scores)
    midpoints = (distinct[:-1] + distinct[1:]) / 2.0
    candidates = np.concatenate(([distinct[0] - 0.5], midpoints, [distinct[-1] + 0.5]))

    pos_prefix = np.concatenate(([0], np.cumsum(sorted_consistent)))
    neg_prefix = np.concatenate(([0], np.cumsum(~sorted_consistent)))
    pos_total = int(pos_prefix[-1])
    neg_total = int(neg_prefix[-1])

    k = np.searchsorted(sorted_scores, candidates, side="left")
    tpr = (pos_total - pos_prefix[k]) / pos_total
    tnr = neg_prefix[k] / neg_total
    balanced = (tpr + tnr) / 2.0
    best = int(np.argmax(balanced))  # first max = smallest threshold
    return float(candidates[best]), float(balanced[best] * 100.0)


def balanced_accuracy_at(items: Sequence[CfcsLabeledItem], threshold: float) -> float:
    """Balanced accuracy percent at a fixed threshold."""
    scores, consistent = _split_scores(items)
    predicted = scores >= threshold
    tpr = float((predicted & consistent).sum()) / float(consistent.sum())
    tnr = float((~predicted & ~consistent).sum()) / float((~consistent).sum())
    return (tpr + tnr) / 2.0 * 100.0


def rank_pairs(pairs: Sequence[CfcsPair]) -> float:
    """Percent of pairs ranking the consistent summary strictly higher."""
    if not pairs:
        raise DataError("rank_pairs needs at least one pair")
    won = sum(1 for p in pairs if p.consistent_score > p.inconsistent_score)
    return 100.0 * won / len(pairs)


class ThresholdClassifier(ParamsMixin):
    """Consistency classifier with the decision threshold fit on labeled scores.

    fit(X, y) takes scores in [0, 1] and labels "consistent"/"inconsistent";
    predict(X) applies score >= threshold_.
    """

    def fit(self, X: Iterable[float], y: Iterable[str]):
        items = [
            CfcsLabeledItem(id=f"i{index}", score=score, label=label)
            for index, (score, label) in enumerate(zip(X, y))
        ]
        self.threshold_, self.balanced_accuracy_ = tune_threshold(items)
        return self

    def predict(self, X: Iterable[float]) -> list[str]:
        if not hasattr(self, "threshold_"):
            raise DataError("ThresholdClassifier is not fitted")
        return ["consistent" if score >= self.threshold_ else "inconsistent" for score in X]

    def score(self, X: Iterable[float], y: Iterable[str]) -> float:
        items = [
            CfcsLabeledItem(id=f"i{index}", score=score, label=label)
            for index, (score, label) in enumerate(zip(X, y))
        ]
        return balanced_accuracy_at(items, self.threshold_)


# -- plain-text tables --


def _format_row(name: str, values: Sequence[str], count: str | None = None) -> str:
    row = f"{name:<{_NAME_WIDTH}}" + "".join(f"{v:>{_VALUE_WIDTH}}" for v in values)
    if count is not None:
        row += f"{count:>{_COUNT_WIDTH}}"
    return row


def format_category_table(per_category: Mapping[str, tuple[float, int]]) -> str:
    lines = [_format_row("Type", ["Accuracy"], "n")]
    for tag in sorted(per_category):
        accuracy, n = per_category[tag]
        lines.append(_format_row(tag, [f"{accuracy:.2f}"], str(n)))
    return "\n".join(lines)


def format_comparison_table(
    per_category_a: Mapping[str, tuple[float, int]],
    per_category_b: Mapping[str, tuple[float, int]],
) -> str:
    lines = [_format_row("Type", ["A", "B"], "n")]
    for tag in sorted(set(per_category_a) | set(per_category_b)):
        accuracy_a, n = per_category_a.get(tag, (float("nan"), 0))
        accuracy_b, n_b = per_category_b.get(tag, (float("nan"), 0))
        lines.append(_format_row(tag, [f"{accuracy_a:.2f}", f"{accuracy_b:.2f}"], str(max(n, n_b))))
    return "\n".join(lines)


def format_distribution(distribution: Mapping[str, float]) -> str:
    return "\n".join(
        _format_row(tag, [f"{distribution[tag]:.2f}"]) for tag in sorted(distribution)
    )
