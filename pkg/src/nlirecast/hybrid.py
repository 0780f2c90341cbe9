"""Hybrid hypothesis selection: neural first, rules second, concatenation last.

The cascade never fails: whatever survives the well-formedness filter wins,
and the question+answer concatenation (blank substitution for FITB questions)
backstops everything else.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass

from .base import ParamsMixin
from .errors import DataError
from .neural_adapter import NeuralConverter
from .rule_converter import ConversionOutcome, convert_rule, fill_blank, normalize_answer

_CONTENT_TOKEN = re.compile(r"[A-Za-z0-9]+")
_MIN_CONTENT_LENGTH = 3


@dataclass(frozen=True)
class HybridConfig:
    """Well-formedness filter knobs; defaults are calibration starting points."""

    min_answer_overlap: float = 0.6
    max_length_ratio: float = 2.5
    forbid_question_mark: bool = True

    def __post_init__(self):
        if not 0.0 <= self.min_answer_overlap <= 1.0:
            raise DataError(f"min_answer_overlap must lie in [0, 1], got {self.min_answer_overlap}")
        if self.max_length_ratio <= 0:
            raise DataError(f"max_length_ratio must be positive, got {self.max_length_ratio}")

    def to_dict(self) -> dict:
        return asdict(self)


def content_words(text: str) -> set[str]:
    return {
        t.casefold() for t in _CONTENT_TOKEN.findall(text) if len(t) >= _MIN_CONTENT_LENGTH
    }


def well_formed(hypothesis: str, question: str, answer: str, config: HybridConfig) -> bool:
    """Filter for generated hypotheses: non-empty, statement-shaped, on-topic,
    and not wildly longer than its sources."""
    if not hypothesis or not hypothesis.strip():
        return False
    if config.forbid_question_mark and "?" in hypothesis:
        return False
    answer_words = content_words(answer)
    if answer_words:
        overlap = len(answer_words & content_words(hypothesis)) / len(answer_words)
        if overlap < config.min_answer_overlap:
            return False
    budget = config.max_length_ratio * (len(question.split()) + len(answer.split()))
    return len(hypothesis.split()) <= budget


def qa_concat(question: str, answer: str) -> str:
    """Fallback hypothesis: blank substitution for FITB, else plain join."""
    if "_" in question:
        filled = normalize_answer(answer, question)
        if filled:
            return fill_blank(question.strip(), filled)
    return " ".join(part for part in (question.strip(), answer.strip()) if part)


def select_hypothesis(
    question: str,
    answer: str,
    neural: ConversionOutcome | None,
    rule: ConversionOutcome | None,
    config: HybridConfig | None = None,
) -> tuple[str, str]:
    """Pick the final hypothesis and its strategy tag for one pair."""
    config = config or HybridConfig()
    if neural is not None and neural.ok and well_formed(neural.hypothesis, question, answer, config):
        return neural.hypothesis, "neural"
    if rule is not None and rule.ok and well_formed(rule.hypothesis, question, answer, config):
        return rule.hypothesis, "rule"
    return qa_concat(question, answer), "qa_concat"


class HybridConverter(ParamsMixin):
    """Cascading transformer over a neural converter and the rule grammar."""

    def __init__(
        self,
        neural: NeuralConverter | None = None,
        min_answer_overlap: float = 0.6,
        max_length_ratio: float = 2.5,
        forbid_question_mark: bool = True,
    ):
        self.neural = neural
        self.min_answer_overlap = min_answer_overlap
        self.max_length_ratio = max_length_ratio
        self.forbid_question_mark = forbid_question_mark

    @property
    def config(self) -> HybridConfig:
        return HybridConfig(
            min_answer_overlap=self.min_answer_overlap,
            max_length_ratio=self.max_length_ratio,
            forbid_question_mark=self.forbid_question_mark,
        )

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> list[tuple[str, str]]:
        """(hypothesis, strategy) for each (question, answer) pair."""
        pairs = list(X)
        neural_outcomes = self.neural.transform(pairs) if self.neural is not None else [None] * len(pairs)
        config = self.config
        return [
            select_hypothesis(q, a, n, convert_rule(q, a), config)
            for (q, a), n in zip(pairs, neural_outcomes)
        ]
