"""Readers for the source MCRC corpora and score files, writer for NLI corpora.

Native formats (RACE article files, MultiRC nested JSON, DREAM triples,
CosmosQA CSV) plus a line-delimited generic format for synthetic corpora.
All readers normalize whitespace on ingest and synthesize globally unique ids
"<dataset>/<split>/<passage-id>/<question-index>" with zero-based indices.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Iterable

from .errors import DataError, PartialWriteError
from .records import (
    CfcsLabeledItem,
    CfcsPair,
    McqExample,
    NliExample,
    OptionEntry,
    ScoreRecord,
    SPLITS,
)
from .validation import normalize_text

_ANSWER_LETTERS = "ABCDEFGH"
_NONE_OF_THE_ABOVE = "none of the above"


def _infer_split(path: Path, explicit: str | None) -> str:
    if explicit is not None:
        if explicit not in SPLITS:
            raise DataError(f"unknown split {explicit!r}; expected one of {SPLITS}")
        return explicit
    names = [p.lower() for p in path.parts]
    stem = path.stem.lower()
    for split in SPLITS:
        if split in names or stem.startswith(split) or split in re.split(r"[._-]", stem):
            return split
    if "valid" in stem or "val" in re.split(r"[._-]", stem):
        return "dev"
    raise DataError(f"cannot infer split from {path}; pass split= explicitly")


def _synth_id(dataset: str, split: str, passage_id: str, question_index: int) -> str:
    return f"{dataset}/{split}/{passage_id}/{question_index}"


def _check_new_id(example_id: str, seen: set[str]) -> None:
    if example_id in seen:
        raise DataError(f"duplicate synthesized id: {example_id}")
    seen.add(example_id)


def _json_lines(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise DataError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


# -- MCQ readers --


def read_mcq(format: str, source: str | Path, split: str | None = None) -> list[McqExample]:
    """Read one source corpus into McqExample records, in file order."""
    readers = {
        "race": _read_race,
        "multirc": _read_multirc,
        "dream": _read_dream,
        "cosmosqa": _read_cosmosqa,
        "generic": _read_generic,
    }
    if format not in readers:
        raise DataError(f"unknown corpus format {format!r}; expected one of {sorted(readers)}")
    source = Path(source)
    if not source.exists():
        raise DataError(f"source does not exist: {source}")
    return readers[format](source, split)


def _race_files(source: Path) -> list[Path]:
    if source.is_file():
        return [source]
    return sorted(p for p in source.rglob("*.txt") if p.is_file())


def _read_race(source: Path, split: str | None) -> list[McqExample]:
    examples: list[McqExample] = []
    seen: set[str] = set()
    files = _race_files(source)
    if not files:
        raise DataError(f"no RACE article files under {source}")
    for path in files:
        file_split = _infer_split(path, split)
        try:
            payload = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON ({exc.msg})") from None
        try:
            article = payload["article"]
            questions = payload["questions"]
            options = payload["options"]
            answers = payload["answers"]
        except (KeyError, TypeError):
            raise DataError(f"{path}: not a RACE article record") from None
        if not (len(questions) == len(options) == len(answers)):
            raise DataError(f"{path}: questions/options/answers lengths differ")
        passage_id = str(payload.get("id", path.name)).removesuffix(".txt") or path.stem
        passage = normalize_text(article)
        for q_index, (question, opts, answer) in enumerate(zip(questions, options, answers)):
            answer = str(answer).strip().upper()
            if answer not in _ANSWER_LETTERS[: len(opts)]:
                raise DataError(f"{path}: question {q_index}: bad answer letter {answer!r}")
            correct = _ANSWER_LETTERS.index(answer)
            example_id = _synth_id("race", file_split, passage_id, q_index)
            _check_new_id(example_id, seen)
            examples.append(
                McqExample(
                    id=example_id,
                    passage_units=(passage,),
                    is_dialogue=False,
                    question=normalize_text(question),
                    options=tuple(
                        OptionEntry(normalize_text(o), i == correct) for i, o in enumerate(opts)
                    ),
                    source_dataset="race",
                    split=file_split,
                )
            )
    return examples


_MULTIRC_SENT_TAG = re.compile(r"<b>\s*Sent\s*\d+:\s*</b>", re.IGNORECASE)
_HTML_TAG = re.compile(r"</?[a-zA-Z][^>]*>")


def _multirc_units(text: str) -> tuple[str, ...]:
    parts = re.split(r"<br\s*/?>", text, flags=re.IGNORECASE)
    units = []
    for part in parts:
        cleaned = normalize_text(_HTML_TAG.sub(" ", _MULTIRC_SENT_TAG.sub(" ", part)))
        if cleaned:
            units.append(cleaned)
    return tuple(units)


def _read_multirc(source: Path, split: str | None) -> list[McqExample]:
    file_split = _infer_split(source, split)
    try:
        payload = json.loads(source.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{source}: invalid JSON ({exc.msg})") from None
    data = payload.get("data")
    if not isinstance(data, list):
        raise DataError(f"{source}: expected a top-level 'data' list")
    examples: list[McqExample] = []
    seen: set[str] = set()
    for p_index, item in enumerate(data):
        try:
            paragraph = item["paragraph"]
            text = paragraph["text"]
            questions = paragraph["questions"]
        except (KeyError, TypeError):
            raise DataError(f"{source}: record {p_index}: not a MultiRC paragraph") from None
        passage_id = str(item.get("id", p_index))
        units = _multirc_units(text)
        for q_index, q in enumerate(questions):
            try:
                question = q["question"]
                answers = q["answers"]
            except (KeyError, TypeError):
                raise DataError(
                    f"{source}: record {p_index}, question {q_index}: malformed question"
                ) from None
            example_id = _synth_id("multirc", file_split, passage_id, q_index)
            _check_new_id(example_id, seen)
            examples.append(
                McqExample(
                    id=example_id,
                    passage_units=units,
                    is_dialogue=False,
                    question=normalize_text(question),
                    options=tuple(
                        OptionEntry(normalize_text(a["text"]), bool(a["isAnswer"]))
                        for a in answers
                    ),
                    source_dataset="multirc",
                    split=file_split,
                )
            )
    return examples


def _read_dream(source: Path, split: str | None) -> list[McqExample]:
    file_split = _infer_split(source, split)
    try:
        payload = json.loads(source.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{source}: invalid JSON ({exc.msg})") from None
    if not isinstance(payload, list):
        raise DataError(f"{source}: expected a top-level list of dialogues")
    examples: list[McqExample] = []
    seen: set[str] = set()
    for d_index, triple in enumerate(payload):
        if not (isinstance(triple, list) and len(triple) == 3):
            raise DataError(f"{source}: record {d_index}: expected [turns, questions, id]")
        turns_raw, questions, dialogue_id = triple
        turns = tuple(normalize_text(t, preserve_newlines=True) for t in turns_raw)
        passage_id = str(dialogue_id) if dialogue_id else str(d_index)
        for q_index, q in enumerate(questions):
            try:
                question = q["question"]
                choices = q["choice"]
                answer = q["answer"]
            except (KeyError, TypeError):
                raise DataError(
                    f"{source}: record {d_index}, question {q_index}: malformed question"
                ) from None
            matches = [i for i, c in enumerate(choices) if c == answer]
            if len(matches) != 1:
                raise DataError(
                    f"{source}: record {d_index}, question {q_index}: "
                    f"answer matches {len(matches)} choices"
                )
            example_id = _synth_id("dream", file_split, passage_id, q_index)
            _check_new_id(example_id, seen)
            examples.append(
                McqExample(
                    id=example_id,
                    passage_units=turns,
                    is_dialogue=True,
                    question=normalize_text(question),
                    options=tuple(
                        OptionEntry(normalize_text(c), i == matches[0])
                        for i, c in enumerate(choices)
                    ),
                    source_dataset="dream",
                    split=file_split,
                )
            )
    return examples


def _read_cosmosqa(source: Path, split: str | None) -> list[McqExample]:
    file_split = _infer_split(source, split)
    examples: list[McqExample] = []
    seen: set[str] = set()
    with source.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        required = {"context", "question", "answer0", "answer1", "answer2", "answer3", "label"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise DataError(f"{source}: missing CosmosQA columns {sorted(required)}")
        for row_index, row in enumerate(reader):
            try:
                label = int(row["label"])
            except (TypeError, ValueError):
                raise DataError(f"{source}: row {row_index}: bad label {row.get('label')!r}") from None
            answers = [row[f"answer{i}"] for i in range(4)]
            if not 0 <= label < 4:
                raise DataError(f"{source}: row {row_index}: label {label} out of range")
            if answers[label].strip().lower() == _NONE_OF_THE_ABOVE:
                continue
            passage_id = row.get("id") or f"r{row_index}"
            example_id = _synth_id("cosmosqa", file_split, passage_id, 0)
            _check_new_id(example_id, seen)
            examples.append(
                McqExample(
                    id=example_id,
                    passage_units=(normalize_text(row["context"]),),
                    is_dialogue=False,
                    question=normalize_text(row["question"]),
                    options=tuple(
                        OptionEntry(normalize_text(a), i == label) for i, a in enumerate(answers)
                    ),
                    source_dataset="cosmosqa",
                    split=file_split,
                )
            )
    return examples


def _read_generic(source: Path, split: str | None) -> list[McqExample]:
    examples: list[McqExample] = []
    seen: set[str] = set()
    for lineno, record in _json_lines(source):
        has_passage = "passage" in record
        has_turns = "turns" in record
        if has_passage == has_turns:
            raise DataError(f"{source}:{lineno}: need exactly one of 'passage' or 'turns'")
        try:
            question = record["question"]
            options = record["options"]
        except KeyError as exc:
            raise DataError(f"{source}:{lineno}: missing field {exc.args[0]!r}") from None
        line_split = record.get("split", split)
        if line_split is None:
            raise DataError(f"{source}:{lineno}: no 'split' field and no explicit split")
        if line_split not in SPLITS:
            raise DataError(f"{source}:{lineno}: unknown split {line_split!r}")
        if has_turns:
            units = tuple(normalize_text(t, preserve_newlines=True) for t in record["turns"])
        else:
            units = (normalize_text(record["passage"]),)
        passage_id = str(record.get("id") or f"q{lineno - 1}")
        example_id = _synth_id("generic", line_split, passage_id, 0)
        _check_new_id(example_id, seen)
        try:
            entries = tuple(
                OptionEntry(normalize_text(o["text"]), bool(o["correct"])) for o in options
            )
        except (KeyError, TypeError):
            raise DataError(f"{source}:{lineno}: options must be objects with text/correct") from None
        examples.append(
            McqExample(
                id=example_id,
                passage_units=units,
                is_dialogue=has_turns,
                question=normalize_text(question),
                options=entries,
                source_dataset="generic",
                split=line_split,
            )
        )
    return examples


# -- NLI corpus lines --


def write_nli_jsonl(examples: Iterable[NliExample], sink: str | Path) -> int:
    """Write one UTF-8 JSON record per line; returns the number of lines."""
    sink = Path(sink)
    count = 0
    try:
        with sink.open("w", encoding="utf-8") as handle:
            for example in examples:
                handle.write(json.dumps(example.to_record(), ensure_ascii=False) + "\n")
                count += 1
    except OSError as exc:
        raise PartialWriteError(f"failed writing {sink}: {exc}", count) from None
    return count


def read_nli_jsonl(source: str | Path) -> list[NliExample]:
    source = Path(source)
    if not source.exists():
        raise DataError(f"source does not exist: {source}")
    examples = []
    seen: set[str] = set()
    for lineno, record in _json_lines(source):
        try:
            example = NliExample.from_record(record)
        except DataError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from None
        if example.id in seen:
            raise DataError(f"{source}:{lineno}: duplicate id {example.id!r}")
        seen.add(example.id)
        examples.append(example)
    return examples


# -- score and CFCS files --


def read_scores(source: str | Path) -> list[ScoreRecord]:
    source = Path(source)
    if not source.exists():
        raise DataError(f"source does not exist: {source}")
    records = []
    seen: set[str] = set()
    for lineno, record in _json_lines(source):
        if "id" not in record or "entail" not in record:
            raise DataError(f"{source}:{lineno}: score line needs 'id' and 'entail'")
        try:
            score = ScoreRecord(id=str(record["id"]), entail=record["entail"])
        except DataError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from None
        if score.id in seen:
            raise DataError(f"{source}:{lineno}: duplicate id {score.id!r}")
        seen.add(score.id)
        records.append(score)
    return records


def read_cfcs(kind: str, source: str | Path):
    """Read a CFCS file: kind "labeled" or "pairs"."""
    if kind == "labeled":
        return read_cfcs_labeled(source)
    if kind == "pairs":
        return read_cfcs_pairs(source)
    raise DataError(f"unknown CFCS kind {kind!r}; expected 'labeled' or 'pairs'")


def read_cfcs_labeled(source: str | Path) -> list[CfcsLabeledItem]:
    source = Path(source)
    if not source.exists():
        raise DataError(f"source does not exist: {source}")
    items = []
    seen: set[str] = set()
    for lineno, record in _json_lines(source):
        for field in ("id", "score", "label"):
            if field not in record:
                raise DataError(f"{source}:{lineno}: missing field {field!r}")
        try:
            item = CfcsLabeledItem(
                id=str(record["id"]), score=record["score"], label=record["label"]
            )
        except DataError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from None
        if item.id in seen:
            raise DataError(f"{source}:{lineno}: duplicate id {item.id!r}")
        seen.add(item.id)
        items.append(item)
    return items


def read_cfcs_pairs(source: str | Path) -> list[CfcsPair]:
    source = Path(source)
    if not source.exists():
        raise DataError(f"source does not exist: {source}")
    pairs = []
    seen: set[str] = set()
    for lineno, record in _json_lines(source):
        for field in ("id", "consistent_score", "inconsistent_score"):
            if field not in record:
                raise DataError(f"{source}:{lineno}: missing field {field!r}")
        try:
            pair = CfcsPair(
                id=str(record["id"]),
                consistent_score=record["consistent_score"],
                inconsistent_score=record["inconsistent_score"],
            )
        except DataError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from None
        if pair.id in seen:
            raise DataError(f"{source}:{lineno}: duplicate id {pair.id!r}")
        seen.add(pair.id)
        pairs.append(pair)
    return pairs
