"""Command-line entry point.

Subcommands: convert, categorize, evaluate, compare, cfcs (tune/classify/rank),
stats. Data goes to files or stdout, diagnostics to stderr. Exit codes:
0 success, 1 usage error, 2 data/validation error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .builder import categories_for, convert_corpus
from .corpus_io import (
    read_cfcs_labeled,
    read_cfcs_pairs,
    read_mcq,
    read_nli_jsonl,
    read_scores,
    write_nli_jsonl,
)
from .errors import BackendError, DataError, UsageError
from .hybrid import HybridConfig
from .metrics import (
    balanced_accuracy_at,
    category_accuracy,
    format_category_table,
    format_comparison_table,
    format_distribution,
    gain_loss,
    rank_pairs,
    score_mcrc,
    tune_threshold,
)
from .neural_adapter import NeuralConverter
from .question_analysis import categorize_multirc, categorize_race


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _print_diag(message: str) -> None:
    print(message, file=sys.stderr)


# -- subcommand implementations --


def _cmd_convert(args) -> int:
    started = _utc_now()
    strategy = "qa_concat" if args.strategy == "qa" else args.strategy
    config = HybridConfig(
        min_answer_overlap=args.min_answer_overlap,
        max_length_ratio=args.max_length_ratio,
    )
    neural = None
    if strategy in ("neural", "hybrid"):
        if not args.neural_cmd and not args.cache:
            raise UsageError(f"--strategy {args.strategy} requires --neural-cmd and/or --cache")
        cache = args.cache or (args.output + ".neural_cache.jsonl")
        neural = NeuralConverter(backend_command=args.neural_cmd, cache=cache)

    examples = read_mcq(args.format, args.input, split=args.split)
    nli_examples, stats = convert_corpus(
        examples, strategy, config=config, neural=neural, jobs=args.jobs
    )
    count = write_nli_jsonl(nli_examples, args.output)

    manifest_path = Path(args.manifest or (args.output + ".manifest.json"))
    manifest = {
        "subcommand": "convert",
        "tool_version": __version__,
        "format": args.format,
        "strategy": args.strategy,
        "input": str(args.input),
        "output": str(args.output),
        "jobs": args.jobs,
        "config": config.to_dict(),
        "strategy_histogram": dict(sorted(stats.per_strategy.items())),
        "stats": stats.to_dict(),
        "started_at": started,
        "finished_at": _utc_now(),
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
    _print_diag(f"wrote {count} examples to {args.output} (manifest: {manifest_path})")
    return 0


def _cmd_categorize(args) -> int:
    examples = read_mcq("generic", args.input, split=args.split)
    with open(args.output, "w", encoding="utf-8") as handle:
        for example in examples:
            if args.scheme == "race":
                tags = list(categories_for(example).tags())
            else:
                tags = [categorize_multirc(example.question)]
            record = {"question_id": example.id, "categories": tags}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    _print_diag(f"categorized {len(examples)} questions to {args.output}")
    return 0


def _categories_by_question(examples) -> dict:
    categories = {}
    for example in examples:
        categories.setdefault(example.question_id or example.id, example.categories)
    return categories


def _cmd_evaluate(args) -> int:
    examples = read_nli_jsonl(args.examples)
    scores = read_scores(args.scores)
    report = score_mcrc(examples, scores)
    print(f"n_questions: {report.n_questions}")
    print(f"accuracy: {report.accuracy:.2f}")
    if args.by_category:
        per_category = category_accuracy(report, _categories_by_question(examples))
        print()
        print(format_category_table(per_category))
    return 0


def _cmd_compare(args) -> int:
    examples = read_nli_jsonl(args.examples)
    report_a = score_mcrc(examples, read_scores(args.scores_a))
    report_b = score_mcrc(examples, read_scores(args.scores_b))
    categories = _categories_by_question(examples)
    regions = gain_loss(report_a, report_b, categories)
    print(f"n_questions: {report_a.n_questions}")
    print(f"accuracy_a: {report_a.accuracy:.2f}")
    print(f"accuracy_b: {report_b.accuracy:.2f}")
    print(f"gain: {len(regions.gain_ids)}")
    print(f"loss: {len(regions.loss_ids)}")
    if args.by_category:
        table = format_comparison_table(
            category_accuracy(report_a, categories),
            category_accuracy(report_b, categories),
        )
        print()
        print(table)
        print()
        print(f"Gain region (n={len(regions.gain_ids)})")
        if regions.gain_category_distribution:
            print(format_distribution(regions.gain_category_distribution))
        print()
        print(f"Loss region (n={len(regions.loss_ids)})")
        if regions.loss_category_distribution:
            print(format_distribution(regions.loss_category_distribution))
    return 0


def _cmd_cfcs_tune(args) -> int:
    items = read_cfcs_labeled(args.labeled)
    threshold, balanced = tune_threshold(items)
    print(f"threshold: {threshold}")
    print(f"balanced_accuracy: {balanced:.2f}")
    return 0


def _cmd_cfcs_classify(args) -> int:
    items = read_cfcs_labeled(args.labeled)
    balanced = balanced_accuracy_at(items, args.threshold)
    print(f"threshold: {args.threshold}")
    print(f"balanced_accuracy: {balanced:.2f}")
    return 0


def _cmd_cfcs_rank(args) -> int:
    pairs = read_cfcs_pairs(args.pairs)
    accuracy = rank_pairs(pairs)
    print(f"n_pairs: {len(pairs)}")
    print(f"ranking_accuracy: {accuracy:.2f}")
    return 0


def _cmd_stats(args) -> int:
    examples = read_nli_jsonl(args.input)
    total = len(examples)

    def emit(kind: str, counts: dict) -> None:
        for name in sorted(counts):
            record = {
                "kind": kind,
                "name": name,
                "count": counts[name],
                "share": round(100.0 * counts[name] / total, 2) if total else 0.0,
            }
            print(json.dumps(record, ensure_ascii=False))

    labels: dict[str, int] = {}
    strategies: dict[str, int] = {}
    tags: dict[str, int] = {}
    for example in examples:
        labels[example.label] = labels.get(example.label, 0) + 1
        strategies[example.strategy] = strategies.get(example.strategy, 0) + 1
        for tag in example.categories.tags():
            tags[tag] = tags.get(tag, 0) + 1
    print(json.dumps({"kind": "total", "count": total}))
    emit("label", labels)
    emit("strategy", strategies)
    emit("category", tags)
    return 0


# -- parser --


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlirecast", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    convert = commands.add_parser("convert", help="recast an MCQ corpus into NLI lines")
    convert.add_argument("--format", required=True,
                         choices=("race", "multirc", "dream", "cosmosqa", "generic"))
    convert.add_argument("--strategy", required=True, choices=("rule", "neural", "hybrid", "qa"))
    convert.add_argument("--input", required=True)
    convert.add_argument("--output", required=True)
    convert.add_argument("--neural-cmd", default=None, help="backend command for neural/hybrid")
    convert.add_argument("--cache", default=None, help="neural response cache file")
    convert.add_argument("--min-answer-overlap", type=float, default=0.6)
    convert.add_argument("--max-length-ratio", type=float, default=2.5)
    convert.add_argument("--jobs", type=int, default=1)
    convert.add_argument("--manifest", default=None, help="manifest path (default: <output>.manifest.json)")
    convert.add_argument("--split", default=None, help="split override when not inferable")
    convert.set_defaults(func=_cmd_convert)

    categorize = commands.add_parser("categorize", help="emit question categories")
    categorize.add_argument("--scheme", required=True, choices=("race", "multirc"))
    categorize.add_argument("--input", required=True, help="generic-format MCQ lines")
    categorize.add_argument("--output", required=True)
    categorize.add_argument("--split", default=None)
    categorize.set_defaults(func=_cmd_categorize)

    evaluate = commands.add_parser("evaluate", help="accuracy from entailment scores")
    evaluate.add_argument("--examples", required=True)
    evaluate.add_argument("--scores", required=True)
    evaluate.add_argument("--by-category", action="store_true")
    evaluate.set_defaults(func=_cmd_evaluate)

    compare = commands.add_parser("compare", help="gain/loss analysis of two score sets")
    compare.add_argument("--examples", required=True)
    compare.add_argument("--scores-a", required=True)
    compare.add_argument("--scores-b", required=True)
    compare.add_argument("--by-category", action="store_true")
    compare.set_defaults(func=_cmd_compare)

    cfcs = commands.add_parser("cfcs", help="factual-consistency metrics")
    cfcs_commands = cfcs.add_subparsers(dest="cfcs_command", required=True)
    tune = cfcs_commands.add_parser("tune", help="fit the classification threshold")
    tune.add_argument("--labeled", required=True)
    tune.set_defaults(func=_cmd_cfcs_tune)
    classify = cfcs_commands.add_parser("classify", help="balanced accuracy at a threshold")
    classify.add_argument("--labeled", required=True)
    classify.add_argument("--threshold", type=float, required=True)
    classify.set_defaults(func=_cmd_cfcs_classify)
    rank = cfcs_commands.add_parser("rank", help="pairwise ranking accuracy")
    rank.add_argument("--pairs", required=True)
    rank.set_defaults(func=_cmd_cfcs_rank)

    stats = commands.add_parser("stats", help="label/strategy/category distributions")
    stats.add_argument("--input", required=True)
    stats.set_defaults(func=_cmd_stats)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help / --version
        code = exc.code
        return int(code) if code is not None else 0
    except UsageError as exc:
        _print_diag(f"usage error: {exc}")
        return 1
    except DataError as exc:
        _print_diag(f"data error: {exc}")
        return 2
    except BackendError as exc:
        _print_diag(f"backend error: {exc}")
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
