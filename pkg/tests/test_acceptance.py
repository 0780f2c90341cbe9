"""Acceptance suite: one test per release criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance and budget is asserted in-test.
"""

import functools
import json
import random
import time
from fractions import Fraction

from conftest import generic_question, write_generic_corpus
from oracles import naive_best_threshold

from nlirecast.builder import convert_example
from nlirecast.cli import run
from nlirecast.hybrid import HybridConfig, select_hypothesis, well_formed
from nlirecast.metrics import gain_loss, score_mcrc, tune_threshold
from nlirecast.question_analysis import categorize_multirc, categorize_race
from nlirecast.records import CfcsLabeledItem, McqExample, NliExample, OptionEntry, ScoreRecord
from nlirecast.rule_converter import ConversionOutcome, convert_rule, load_golden_fixtures


def criterion(name):
    def decorator(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            started = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {name}: FAIL")
                raise
            elapsed = time.perf_counter() - started
            print(f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s)")

        return wrapper

    return decorator


@criterion("golden-rule-fixtures")
def test_golden_rule_fixtures():
    rows = load_golden_fixtures()
    assert len(rows) == 7
    started = time.perf_counter()
    for row in rows:
        outcome = convert_rule(row["question"], row["answer"])
        got = outcome.hypothesis if outcome.ok else outcome.failure_reason
        assert got == row["expected"], f"fixture mismatch for {row['question']!r}"
    assert time.perf_counter() - started < 1.0


@criterion("categorizer-fixtures")
def test_categorizer_fixtures():
    started = time.perf_counter()
    assert "main_idea" in categorize_race("What's the best title for this passage?", "p").race_flags
    assert "math" in categorize_race("How many functions of snow are discussed in the passage?", "p").race_flags
    assert "dialogue" in categorize_race("Anything?", '"' * 12).race_flags
    multirc_rows = [
        ("What is the drawback of kinetic energy from hydro power?", "what"),
        ("Who does Billy have the same color hair as?", "who"),
        ("Approximately how much older is Charlie than Sylvia?", "how"),
        ("Why did Phoebe cry?", "why"),
        ("Was the Emperor hurt when the explosion damaged his carriage?", "assertion"),
        ("Which philosopher is said to have taught the young Confucius?", "which"),
        (
            "Where did money to fund the 9/11 plotters come from and where didn't it come from?",
            "double_questions",
        ),
        ("When did the Romans set up a fortress at Aquae Sextiae (Aix-en-Provence)?", "when"),
        ("Where does the absorption part of digestion occur?", "where"),
        ("Explain the religious schism in both England and Scotland.", "uncategorized"),
    ]
    for question, want in multirc_rows:
        assert categorize_multirc(question) == want, question
    assert time.perf_counter() - started < 1.0


@criterion("conversion-cardinality")
def test_conversion_cardinality(tmp_path):
    corpus = write_generic_corpus(tmp_path / "corpus.jsonl", 1000, n_options=4)
    output = tmp_path / "nli.jsonl"
    manifest_path = tmp_path / "manifest.json"
    started = time.perf_counter()
    code = run([
        "convert", "--format", "generic", "--strategy", "rule",
        "--input", str(corpus), "--output", str(output),
        "--manifest", str(manifest_path), "--jobs", "1",
    ])
    elapsed = time.perf_counter() - started
    assert code == 0
    assert elapsed < 10.0, f"single-threaded convert took {elapsed:.2f}s"

    records = [json.loads(line) for line in output.read_text("utf-8").splitlines()]
    assert len(records) == 4000
    assert sum(r["label"] == "entailment" for r in records) == 1000
    premises = {}
    for record in records:
        premises.setdefault(record["question_id"], set()).add(record["premise"])
    assert len(premises) == 1000
    assert all(len(p) == 1 for p in premises.values())
    manifest = json.loads(manifest_path.read_text("utf-8"))
    assert sum(manifest["strategy_histogram"].values()) == 4000


@criterion("hybrid-cascade-properties")
def test_hybrid_cascade_properties():
    rng = random.Random(2024)
    config = HybridConfig()
    questions = [
        "How often does the woman see her parents?",
        "The capital of the region is _ .",
        "What is the name of the harbor?",
        "Explain the whole situation in detail.",
        "Did he arrive and was he late?",
    ]
    answers = ["Once a week.", "a bright harbor", "No idea!", "the woman parents", "Yes and yes."]
    stub_texts = [
        "The woman sees her parents once a week.",
        "A bright harbor indeed.",
        "Maybe?",
        "word " * 50,
        "Completely unrelated statement.",
    ]
    counts = {"neural": 0, "rule": 0, "qa_concat": 0}
    n_cases = 1200
    for _ in range(n_cases):
        question = rng.choice(questions)
        answer = rng.choice(answers)
        neural = (
            ConversionOutcome.success(rng.choice(stub_texts))
            if rng.random() < 0.7
            else ConversionOutcome.failure("no_rule_matched")
        )
        rule = convert_rule(question, answer)
        hypothesis, strategy = select_hypothesis(question, answer, neural, rule, config)
        # totality
        assert hypothesis and hypothesis.strip()
        # cascade ordering / monotonicity: a passing neural outcome decides alone
        if neural.ok and well_formed(neural.hypothesis, question, answer, config):
            assert (hypothesis, strategy) == (neural.hypothesis, "neural")
            alternative = select_hypothesis(
                question, answer, neural, ConversionOutcome.failure("no_rule_matched"), config
            )
            assert alternative == (hypothesis, strategy)
        counts[strategy] += 1
    # provenance conservation across the randomized corpus
    assert sum(counts.values()) == n_cases

    # conservation through the per-question builder as well
    total = 0
    histogram = {"neural": 0, "rule": 0, "qa_concat": 0}
    for index in range(250):
        example = McqExample(
            id=f"generic/dev/h{index}/0",
            passage_units=("A plain passage about daily life.",),
            is_dialogue=False,
            question=rng.choice(questions),
            options=tuple(
                OptionEntry(rng.choice(answers) + f" {i}", i == 0) for i in range(4)
            ),
            source_dataset="generic",
            split="dev",
        )
        outcomes = {
            i: ConversionOutcome.success(rng.choice(stub_texts))
            if rng.random() < 0.5
            else ConversionOutcome.failure("no_rule_matched")
            for i in range(4)
        }
        produced = convert_example(example, "hybrid", neural_outcomes=outcomes)
        total += len(produced)
        for nli in produced:
            histogram[nli.strategy] += 1
    assert sum(histogram.values()) == total == 1000


@criterion("threshold-oracle-equivalence")
def test_threshold_oracle_equivalence():
    rng = random.Random(99)
    started = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(2, 200)
        precision = rng.choice([1, 2, 3, 8])
        scores = [round(rng.random(), precision) for _ in range(n)]
        labels = ["consistent", "inconsistent"] + [
            rng.choice(["consistent", "inconsistent"]) for _ in range(n - 2)
        ]
        items = [
            CfcsLabeledItem(id=f"i{k}", score=s, label=l)
            for k, (s, l) in enumerate(zip(scores, labels))
        ]
        got_threshold, got_accuracy = tune_threshold(items)
        want_threshold, want_accuracy = naive_best_threshold(scores, labels)
        assert got_threshold == want_threshold
        assert abs(got_accuracy - want_accuracy) < 1e-12
    assert time.perf_counter() - started < 30.0


def _question_block(question_id: str, correct_index: int, n_options: int) -> list[NliExample]:
    return [
        NliExample(
            id=f"{question_id}#{i}",
            premise="Premise.",
            hypothesis=f"Hypothesis {i}.",
            label="entailment" if i == correct_index else "not_entailment",
            strategy="rule",
            question_id=question_id,
            option_index=i,
        )
        for i in range(n_options)
    ]


@criterion("mcrc-metric-properties")
def test_mcrc_metric_properties():
    rng = random.Random(404)
    grid = [i / 997 for i in range(1, 997)]
    transforms = [lambda x: x / 2 + 0.25, lambda x: x ** 3, lambda x: x ** 0.5]
    for _ in range(500):
        examples, scores = [], []
        for q in range(rng.randint(2, 5)):
            n = rng.randint(2, 5)
            examples += _question_block(f"q{q}", rng.randrange(n), n)
            for i, value in enumerate(rng.sample(grid, n)):
                scores.append(ScoreRecord(f"q{q}#{i}", value))
        base = score_mcrc(examples, scores)
        transform = rng.choice(transforms)
        moved = [ScoreRecord(s.id, transform(s.entail)) for s in scores]
        assert score_mcrc(examples, moved).per_question == base.per_question

    for _ in range(500):
        n = rng.randint(2, 40)
        examples, scores_a, scores_b = [], [], []
        for q in range(n):
            examples += _question_block(f"q{q}", 0, 2)
            a_correct = rng.random() < 0.5
            b_correct = rng.random() < 0.5
            scores_a += [
                ScoreRecord(f"q{q}#0", 0.9 if a_correct else 0.1),
                ScoreRecord(f"q{q}#1", 0.5),
            ]
            scores_b += [
                ScoreRecord(f"q{q}#0", 0.9 if b_correct else 0.1),
                ScoreRecord(f"q{q}#1", 0.5),
            ]
        report_a = score_mcrc(examples, scores_a)
        report_b = score_mcrc(examples, scores_b)
        regions = gain_loss(report_a, report_b, {f"q{q}": set() for q in range(n)})
        correct_a = len(report_a.correct_ids())
        correct_b = len(report_b.correct_ids())
        assert Fraction(100 * (correct_a - correct_b), n) == Fraction(
            100 * (len(regions.gain_ids) - len(regions.loss_ids)), n
        )
        assert report_a.accuracy == 100.0 * correct_a / n


TABLE_QUESTIONS = (
    ["Which statement is true about item %d?"] * 4
    + ["How many boxes does the clerk stack in room %d?"] * 4
    + ["What is the topic of passage %d?"] * 4
)
A_CORRECT = {0, 1, 2, 3, 4, 5, 8}
B_CORRECT = {0, 1, 4, 5, 6, 7, 8}


@criterion("synthetic-table-reproduction")
def test_synthetic_table_reproduction(tmp_path, capsys):
    corpus = tmp_path / "twelve.jsonl"
    with corpus.open("w", encoding="utf-8") as handle:
        for index, template in enumerate(TABLE_QUESTIONS):
            record = {
                "id": f"t{index:02d}",
                "passage": f"Plain passage number {index} with ordinary words.",
                "question": template % index,
                "options": [
                    {"text": f"choice {letter} {index}", "correct": letter == "b"}
                    for letter in "abcd"
                ],
                "split": "dev",
            }
            handle.write(json.dumps(record) + "\n")

    examples_path = tmp_path / "nli.jsonl"
    assert run(["convert", "--format", "generic", "--strategy", "rule",
                "--input", str(corpus), "--output", str(examples_path)]) == 0

    def score_file(path, correct_set):
        with path.open("w", encoding="utf-8") as handle:
            for index in range(12):
                values = [0.1, 0.9, 0.2, 0.3] if index in correct_set else [0.9, 0.1, 0.2, 0.3]
                for option, value in enumerate(values):
                    row = {"id": f"generic/dev/t{index:02d}/0#{option}", "entail": value}
                    handle.write(json.dumps(row) + "\n")
        return path

    scores_a = score_file(tmp_path / "a.jsonl", A_CORRECT)
    scores_b = score_file(tmp_path / "b.jsonl", B_CORRECT)
    capsys.readouterr()
    assert run(["compare", "--examples", str(examples_path), "--scores-a", str(scores_a),
                "--scores-b", str(scores_b), "--by-category"]) == 0
    got = capsys.readouterr().out

    # Hand-computed: 7/12 correct on each side (58.33), gain {t02,t03} deductive,
    # loss {t06,t07} math; per-category A: deductive 4/4, math 2/4, main_idea 1/4,
    # B: deductive 2/4, math 4/4, main_idea 1/4.
    expected = "\n".join([
        "n_questions: 12",
        "accuracy_a: 58.33",
        "accuracy_b: 58.33",
        "gain: 2",
        "loss: 2",
        "",
        "Type".ljust(18) + "A".rjust(10) + "B".rjust(10) + "n".rjust(6),
        "deductive".ljust(18) + "100.00".rjust(10) + "50.00".rjust(10) + "4".rjust(6),
        "main_idea".ljust(18) + "25.00".rjust(10) + "25.00".rjust(10) + "4".rjust(6),
        "math".ljust(18) + "50.00".rjust(10) + "100.00".rjust(10) + "4".rjust(6),
        "",
        "Gain region (n=2)",
        "deductive".ljust(18) + "100.00".rjust(10),
        "",
        "Loss region (n=2)",
        "math".ljust(18) + "100.00".rjust(10),
    ]) + "\n"
    assert got == expected


@criterion("convert-determinism")
def test_convert_determinism(tmp_path, stub_cmd):
    corpus = write_generic_corpus(tmp_path / "corpus.jsonl", 25)
    cache = tmp_path / "cache.jsonl"
    # Prime the cache, then run twice against the warm cache only.
    assert run(["convert", "--format", "generic", "--strategy", "hybrid",
                "--input", str(corpus), "--output", str(tmp_path / "prime.jsonl"),
                "--neural-cmd", stub_cmd(), "--cache", str(cache)]) == 0
    outputs = []
    for name in ("one.jsonl", "two.jsonl"):
        output = tmp_path / name
        assert run(["convert", "--format", "generic", "--strategy", "hybrid",
                    "--input", str(corpus), "--output", str(output),
                    "--cache", str(cache)]) == 0
        outputs.append(output.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0] == (tmp_path / "prime.jsonl").read_bytes()

    manifests = [
        json.loads((tmp_path / name).with_suffix(".jsonl.manifest.json").read_text("utf-8"))
        for name in ("one.jsonl", "two.jsonl")
    ]
    for manifest in manifests:
        manifest.pop("started_at")
        manifest.pop("finished_at")
        manifest.pop("output")
    assert manifests[0] == manifests[1]
