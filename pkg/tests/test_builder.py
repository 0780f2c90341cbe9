import pytest

from nlirecast.builder import (
    ConversionStats,
    build_premise,
    categories_for,
    convert_corpus,
    convert_example,
)
from nlirecast.corpus_io import read_mcq, write_nli_jsonl
from nlirecast.errors import UsageError
from nlirecast.neural_adapter import NeuralConverter
from nlirecast.records import McqExample, OptionEntry
from nlirecast.rule_converter import ConversionOutcome


def mcq(question="How often does the woman see her parents?", options=None, dataset="generic",
        dialogue=False, units=("A plain passage.",), example_id="generic/dev/q0/0"):
    options = options or [
        OptionEntry("Once a week.", False),
        OptionEntry("Twice a day.", True),
        OptionEntry("Never at all.", False),
        OptionEntry("Every month.", False),
    ]
    return McqExample(
        id=example_id,
        passage_units=tuple(units),
        is_dialogue=dialogue,
        question=question,
        options=tuple(options),
        source_dataset=dataset,
        split="dev",
    )


class TestBuildPremise:
    def test_prose_units_join_with_spaces(self):
        assert build_premise(mcq(units=("A.", "B."))) == "A. B."

    def test_dialogue_turns_join_with_newlines(self):
        example = mcq(units=("M: Hi.", "W: Hello."), dialogue=True)
        assert build_premise(example) == "M: Hi.\nW: Hello."

    def test_single_unit_is_identity(self):
        assert build_premise(mcq(units=("Only unit here.",))) == "Only unit here."


class TestCategoriesFor:
    def test_race_flags_for_any_dataset(self):
        example = mcq(question="How many title pages are there?")
        assert set(categories_for(example).tags()) == {"main_idea", "math"}
        assert categories_for(example).multirc_type is None

    def test_multirc_gets_a_type_too(self):
        example = mcq(question="Who does Billy have the same color hair as?", dataset="multirc",
                      options=[OptionEntry("Sally", True), OptionEntry("Tom", False)])
        cats = categories_for(example)
        assert cats.multirc_type == "who"


class TestConvertExample:
    def test_four_options_rule_strategy_labels(self):
        stats = ConversionStats()
        out = convert_example(mcq(), "rule", stats=stats)
        assert len(out) == 4
        assert [e.label for e in out] == [
            "not_entailment", "entailment", "not_entailment", "not_entailment"
        ]
        assert [e.id for e in out] == [f"generic/dev/q0/0#{i}" for i in range(4)]
        assert len({e.premise for e in out}) == 1
        assert all(e.strategy == "rule" for e in out)
        assert stats.entailment_count == 1
        assert stats.total_examples == 4 == sum(stats.per_strategy.values())

    def test_multirc_five_options_two_correct(self):
        options = [OptionEntry(f"answer {i}.", i in (1, 3)) for i in range(5)]
        example = mcq(question="Who came?", options=options, dataset="multirc")
        out = convert_example(example, "rule")
        assert len(out) == 5
        assert sum(e.label == "entailment" for e in out) == 2

    def test_rule_failures_fall_back_to_concatenation(self):
        stats = ConversionStats()
        example = mcq(question="Explain the schism in both kingdoms.")
        out = convert_example(example, "rule", stats=stats)
        assert all(e.strategy == "qa_concat" for e in out)
        assert stats.per_failure_reason["no_rule_matched"] == 4
        assert stats.per_strategy == {"qa_concat": 4}

    def test_hybrid_records_per_option_strategy(self):
        neural_outcomes = {
            0: ConversionOutcome.success("The woman sees her parents once a week."),
            1: ConversionOutcome.failure("no_rule_matched"),
            2: ConversionOutcome.failure("no_rule_matched"),
            3: ConversionOutcome.failure("no_rule_matched"),
        }
        example = mcq()
        out = convert_example(example, "hybrid", neural_outcomes=neural_outcomes)
        assert out[0].strategy == "neural"
        assert out[1].strategy == "rule"  # rule conversion succeeds for this shape
        assert {e.strategy for e in out} <= {"neural", "rule", "qa_concat"}

    def test_qa_strategy_is_pure_concatenation(self):
        out = convert_example(mcq(), "qa_concat")
        assert all(e.strategy == "qa_concat" for e in out)
        assert out[0].hypothesis == "How often does the woman see her parents? Once a week."

    def test_label_blind_generation(self):
        # Flipping which option is correct changes labels, not hypotheses.
        a = convert_example(mcq(), "rule")
        flipped_options = [
            OptionEntry("Once a week.", True),
            OptionEntry("Twice a day.", False),
            OptionEntry("Never at all.", False),
            OptionEntry("Every month.", False),
        ]
        b = convert_example(mcq(options=flipped_options), "rule")
        assert [e.hypothesis for e in a] == [e.hypothesis for e in b]
        assert [e.label for e in a] != [e.label for e in b]


class TestConvertCorpus:
    def test_output_order_and_stats(self, make_corpus):
        examples = read_mcq("generic", make_corpus(10))
        out, stats = convert_corpus(examples, "rule")
        assert len(out) == 40
        assert stats.total_questions == 10
        assert stats.total_examples == 40
        assert sum(stats.per_strategy.values()) == 40
        assert stats.entailment_count == 10
        assert [e.question_id for e in out[:4]] == [examples[0].id] * 4

    def test_jobs_do_not_change_output(self, make_corpus):
        examples = read_mcq("generic", make_corpus(12))
        serial, _ = convert_corpus(examples, "rule", jobs=1)
        parallel, _ = convert_corpus(examples, "rule", jobs=4)
        assert serial == parallel

    def test_neural_strategy_via_stub(self, make_corpus, tmp_path, stub_cmd):
        examples = read_mcq("generic", make_corpus(3))
        neural = NeuralConverter(backend_command=stub_cmd(), cache=tmp_path / "cache.jsonl")
        out, stats = convert_corpus(examples, "neural", neural=neural)
        assert len(out) == 12
        assert stats.per_strategy["neural"] == 12

    def test_neural_without_backend_is_usage_error(self, make_corpus):
        examples = read_mcq("generic", make_corpus(1))
        with pytest.raises(UsageError):
            convert_corpus(examples, "neural")

    def test_unknown_strategy(self, make_corpus):
        examples = read_mcq("generic", make_corpus(1))
        with pytest.raises(UsageError):
            convert_corpus(examples, "sparkle")

    def test_rerun_with_warm_cache_is_byte_identical(self, make_corpus, tmp_path, stub_cmd):
        examples = read_mcq("generic", make_corpus(4))
        cache = tmp_path / "cache.jsonl"
        neural = NeuralConverter(backend_command=stub_cmd(), cache=cache)
        first, _ = convert_corpus(examples, "hybrid", neural=neural)
        write_nli_jsonl(first, tmp_path / "a.jsonl")
        offline = NeuralConverter(backend_command=None, cache=cache)
        second, _ = convert_corpus(examples, "hybrid", neural=offline)
        write_nli_jsonl(second, tmp_path / "b.jsonl")
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
