import json
import sys
from pathlib import Path

import pytest

STUB_BACKEND = Path(__file__).parent / "stub_backend.py"

sys.path.insert(0, str(Path(__file__).parent))


def stub_command(mode: str = "echo", count_file: Path | None = None, sleep: float | None = None) -> str:
    parts = [sys.executable, str(STUB_BACKEND), "--mode", mode]
    if count_file is not None:
        parts += ["--count-file", str(count_file)]
    if sleep is not None:
        parts += ["--sleep", str(sleep)]
    return " ".join(parts)


@pytest.fixture
def stub_cmd():
    return stub_command


def generic_question(index: int, n_options: int = 4, correct: int = 1) -> dict:
    """One deterministic generic-format MCQ line; shapes cycle with the index."""
    shapes = [
        f"How often does the clerk visit store {index}?",
        f"What is the name of room {index}?",
        f"The color of item {index} is _ .",
        f"Explain the layout of hall {index}.",
    ]
    return {
        "id": f"q{index}",
        "passage": f"Passage {index} describes the scene in plain words. Nothing unusual happens.",
        "question": shapes[index % len(shapes)],
        "options": [
            {"text": f"choice {letter} {index}", "correct": i == correct}
            for i, letter in zip(range(n_options), "abcdefgh")
        ],
        "split": "dev",
    }


def write_generic_corpus(path: Path, n_questions: int, n_options: int = 4) -> Path:
    with path.open("w", encoding="utf-8") as handle:
        for index in range(n_questions):
            handle.write(json.dumps(generic_question(index, n_options)) + "\n")
    return path


@pytest.fixture
def make_corpus(tmp_path):
    def factory(n_questions: int, n_options: int = 4, name: str = "corpus.jsonl") -> Path:
        return write_generic_corpus(tmp_path / name, n_questions, n_options)

    return factory
