"""Immutable data model for source questions, recast examples, and score files."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DataError
from .question_analysis import CategorySet
from .validation import check_choice, check_nonempty, check_unit_interval

DATASETS = ("race", "multirc", "dream", "cosmosqa", "generic")
SINGLE_CORRECT_DATASETS = frozenset({"race", "dream", "cosmosqa"})
SPLITS = ("train", "dev", "test")
LABELS = ("entailment", "not_entailment")
STRATEGIES = ("rule", "neural", "qa_concat")

MIN_OPTIONS = 2
MAX_OPTIONS = 8


@dataclass(frozen=True)
class OptionEntry:
    """One candidate answer and whether it is marked correct."""

    text: str
    is_correct: bool = False

    def __post_init__(self):
        check_nonempty(self.text, "option text")


@dataclass(frozen=True)
class McqExample:
    """One passage + question + labeled answer options from a source corpus."""

    id: str
    passage_units: tuple[str, ...]
    is_dialogue: bool
    question: str
    options: tuple[OptionEntry, ...]
    source_dataset: str
    split: str

    def __post_init__(self):
        object.__setattr__(self, "passage_units", tuple(self.passage_units))
        object.__setattr__(self, "options", tuple(self.options))
        check_nonempty(self.id, "example id")
        check_nonempty(self.question, f"question of {self.id}")
        check_choice(self.source_dataset, DATASETS, f"source_dataset of {self.id}")
        check_choice(self.split, SPLITS, f"split of {self.id}")
        if not self.passage_units:
            raise DataError(f"{self.id}: passage_units must be non-empty")
        for unit in self.passage_units:
            check_nonempty(unit, f"passage unit of {self.id}")
        n = len(self.options)
        if not MIN_OPTIONS <= n <= MAX_OPTIONS:
            raise DataError(f"{self.id}: expected {MIN_OPTIONS}..{MAX_OPTIONS} options, got {n}")
        correct = sum(1 for o in self.options if o.is_correct)
        if correct < 1:
            raise DataError(f"{self.id}: no option marked correct")
        if self.source_dataset in SINGLE_CORRECT_DATASETS and correct != 1:
            raise DataError(
                f"{self.id}: {self.source_dataset} requires exactly one correct option, got {correct}"
            )


@dataclass(frozen=True)
class NliExample:
    """One premise/hypothesis/label record of the recast corpus."""

    id: str
    premise: str
    hypothesis: str
    label: str
    strategy: str
    categories: CategorySet = field(default_factory=CategorySet)
    question_id: str = ""
    option_index: int = 0

    def __post_init__(self):
        check_nonempty(self.id, "example id")
        check_nonempty(self.premise, f"premise of {self.id}")
        check_nonempty(self.hypothesis, f"hypothesis of {self.id}")
        check_choice(self.label, LABELS, f"label of {self.id}")
        check_choice(self.strategy, STRATEGIES, f"strategy of {self.id}")
        if self.option_index < 0:
            raise DataError(f"{self.id}: option_index must be >= 0")

    def to_record(self) -> dict:
        """Wire-format dict, field order fixed for byte-stable output."""
        return {
            "id": self.id,
            "premise": self.premise,
            "hypothesis": self.hypothesis,
            "label": self.label,
            "strategy": self.strategy,
            "categories": list(self.categories.tags()),
            "question_id": self.question_id,
            "option_index": self.option_index,
        }

    @classmethod
    def from_record(cls, record: dict) -> "NliExample":
        try:
            return cls(
                id=record["id"],
                premise=record["premise"],
                hypothesis=record["hypothesis"],
                label=record["label"],
                strategy=record["strategy"],
                categories=CategorySet.from_tags(record.get("categories", ())),
                question_id=record.get("question_id", ""),
                option_index=int(record.get("option_index", 0)),
            )
        except KeyError as exc:
            raise DataError(f"NLI record missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class ScoreRecord:
    """External entailment score for one example id."""

    id: str
    entail: float

    def __post_init__(self):
        check_nonempty(self.id, "score id")
        object.__setattr__(self, "entail", check_unit_interval(self.entail, f"entail of {self.id}"))


@dataclass(frozen=True)
class CfcsLabeledItem:
    """Consistency score plus gold label for one article/sentence pair."""

    id: str
    score: float
    label: str

    def __post_init__(self):
        check_nonempty(self.id, "item id")
        object.__setattr__(self, "score", check_unit_interval(self.score, f"score of {self.id}"))
        check_choice(self.label, ("consistent", "inconsistent"), f"label of {self.id}")


@dataclass(frozen=True)
class CfcsPair:
    """Scores of a consistent and an inconsistent summary for the same article."""

    id: str
    consistent_score: float
    inconsistent_score: float

    def __post_init__(self):
        check_nonempty(self.id, "pair id")
        object.__setattr__(
            self, "consistent_score",
            check_unit_interval(self.consistent_score, f"consistent_score of {self.id}"),
        )
        object.__setattr__(
            self, "inconsistent_score",
            check_unit_interval(self.inconsistent_score, f"inconsistent_score of {self.id}"),
        )
