"""Corpus-level conversion: one NLI example per (question, option).

Premises are the full passage (dialogue turns joined with newlines, prose
units with spaces); hypotheses come from the chosen strategy; labels follow
the option's correctness flag. Hypothesis generation is label-blind so wrong
options cannot be told apart by surface form.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DataError, UsageError
from .hybrid import HybridConfig, qa_concat, select_hypothesis
from .neural_adapter import ConversionRequest, NeuralConverter
from .question_analysis import CategorySet, categorize_multirc, categorize_race
from .records import McqExample, NliExample
from .rule_converter import convert_rule
from .validation import check_unique

STRATEGY_CHOICES = ("rule", "neural", "hybrid", "qa_concat")


@dataclass
class ConversionStats:
    """Tallies for one conversion run."""

    total_questions: int = 0
    total_examples: int = 0
    per_strategy: Counter = field(default_factory=Counter)
    per_failure_reason: Counter = field(default_factory=Counter)
    entailment_count: int = 0

    def to_dict(self) -> dict:
        return {
            "total_questions": self.total_questions,
            "total_examples": self.total_examples,
            "per_strategy": dict(sorted(self.per_strategy.items())),
            "per_failure_reason": dict(sorted(self.per_failure_reason.items())),
            "entailment_count": self.entailment_count,
        }


def build_premise(example: McqExample) -> str:
    """Flatten passage units into one premise string."""
    if example.is_dialogue:
        return "\n".join(example.passage_units)
    return " ".join(example.passage_units)


def categories_for(example: McqExample, premise: str | None = None) -> CategorySet:
    """Trigger-word flags for any question, plus the MultiRC type where it applies."""
    premise = premise if premise is not None else build_premise(example)
    flags = categorize_race(example.question, premise)
    multirc_type = categorize_multirc(example.question) if example.source_dataset == "multirc" else None
    return CategorySet(flags.race_flags, multirc_type)


def _convert_one(
    example: McqExample,
    strategy: str,
    config: HybridConfig,
    neural_outcomes: Mapping[int, object] | None,
) -> tuple[list[NliExample], list[str]]:
    premise = build_premise(example)
    categories = categories_for(example, premise)
    question = example.question
    produced: list[NliExample] = []
    failures: list[str] = []

    for index, option in enumerate(example.options):
        answer = option.text
        if strategy == "rule":
            outcome = convert_rule(question, answer)
            if outcome.ok:
                hypothesis, used = outcome.hypothesis, "rule"
            else:
                failures.append(outcome.failure_reason)
                hypothesis, used = qa_concat(question, answer), "qa_concat"
        elif strategy == "neural":
            outcome = _neural_outcome(neural_outcomes, example, index)
            if outcome.ok:
                hypothesis, used = outcome.hypothesis, "neural"
            else:
                failures.append(outcome.failure_reason)
                hypothesis, used = qa_concat(question, answer), "qa_concat"
        elif strategy == "hybrid":
            neural = _neural_outcome(neural_outcomes, example, index)
            rule = convert_rule(question, answer)
            for outcome in (neural, rule):
                if not outcome.ok:
                    failures.append(outcome.failure_reason)
            hypothesis, used = select_hypothesis(question, answer, neural, rule, config)
        elif strategy == "qa_concat":
            hypothesis, used = qa_concat(question, answer), "qa_concat"
        else:
            raise UsageError(f"unknown strategy {strategy!r}; expected one of {STRATEGY_CHOICES}")

        produced.append(
            NliExample(
                id=f"{example.id}#{index}",
                premise=premise,
                hypothesis=hypothesis,
                label="entailment" if option.is_correct else "not_entailment",
                strategy=used,
                categories=categories,
                question_id=example.id,
                option_index=index,
            )
        )
    return produced, failures


def _neural_outcome(neural_outcomes, example: McqExample, index: int):
    if neural_outcomes is None or index not in neural_outcomes:
        raise DataError(f"no neural outcome for {example.id}#{index}")
    return neural_outcomes[index]


def convert_example(
    example: McqExample,
    strategy: str,
    config: HybridConfig | None = None,
    neural_outcomes: Mapping[int, object] | None = None,
    stats: ConversionStats | None = None,
) -> list[NliExample]:
    """Convert one question into exactly |options| NLI examples.

    neural_outcomes maps option index to the backend ConversionOutcome for
    this question (required for the neural and hybrid strategies).
    """
    produced, failures = _convert_one(example, strategy, config or HybridConfig(), neural_outcomes)
    if stats is not None:
        _merge_stats(stats, produced, failures)
    return produced


def _merge_stats(stats: ConversionStats, produced: Sequence[NliExample], failures: Sequence[str]):
    stats.total_questions += 1
    stats.total_examples += len(produced)
    for nli in produced:
        stats.per_strategy[nli.strategy] += 1
        if nli.label == "entailment":
            stats.entailment_count += 1
    for reason in failures:
        stats.per_failure_reason[reason] += 1


def _collect_neural_outcomes(
    examples: Sequence[McqExample], neural: NeuralConverter
) -> dict[str, dict[int, object]]:
    requests = [
        ConversionRequest(f"{example.id}#{index}", example.question, option.text)
        for example in examples
        for index, option in enumerate(example.options)
    ]
    outcomes = neural.convert_requests(requests)
    per_question: dict[str, dict[int, object]] = {example.id: {} for example in examples}
    cursor = 0
    for example in examples:
        for index in range(len(example.options)):
            per_question[example.id][index] = outcomes[cursor]
            cursor += 1
    return per_question


def convert_corpus(
    examples: Sequence[McqExample],
    strategy: str,
    config: HybridConfig | None = None,
    neural: NeuralConverter | None = None,
    jobs: int = 1,
) -> tuple[list[NliExample], ConversionStats]:
    """Convert a whole corpus, preserving input order.

    Questions are independent work units; with jobs > 1 they are converted in
    a thread pool and merged back in order.
    """
    if strategy not in STRATEGY_CHOICES:
        raise UsageError(f"unknown strategy {strategy!r}; expected one of {STRATEGY_CHOICES}")
    examples = list(examples)
    check_unique((e.id for e in examples), "question id")
    config = config or HybridConfig()

    neural_map: dict[str, dict[int, object]] = {}
    if strategy in ("neural", "hybrid"):
        if neural is None:
            raise UsageError(f"strategy {strategy!r} requires a neural backend command or cache")
        neural_map = _collect_neural_outcomes(examples, neural)

    def worker(example: McqExample):
        return _convert_one(example, strategy, config, neural_map.get(example.id))

    stats = ConversionStats()
    output: list[NliExample] = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, examples))
    else:
        results = [worker(example) for example in examples]
    for produced, failures in results:
        _merge_stats(stats, produced, failures)
        output.extend(produced)
    return output, stats
