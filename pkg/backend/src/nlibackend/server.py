"""Serve question+answer -> statement conversions over standard streams.

Protocol (UTF-8, one JSON object per line): the client writes
`{"id", "question", "answer"}` requests and closes stdin; the server answers
every id with `{"id", "hypothesis"}` or `{"id", "error"}` and exits 0 at end
of input. A line that cannot be parsed gets an error response under the
synthetic id "line-<n>". Per-item model failures become error records, never
a crash; only a model that fails to load aborts the process (before any
input is read).
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass

MIN_OUTPUT_LENGTH = 8
_MIN_NEW_TOKENS = 4

_QUOTES = "\"'`“”‘’"


@dataclass
class BackendConfig:
    model: str
    max_output_length: int = 64
    beam_width: int = 1
    device: str = "cpu"
    separator: str = "</s>"
    seed: int | None = None

    def validate(self) -> None:
        if self.max_output_length < MIN_OUTPUT_LENGTH:
            raise ValueError(f"max output length must be >= {MIN_OUTPUT_LENGTH}")
        if self.beam_width < 1:
            raise ValueError("beam width must be >= 1")


def hygiene(text: str) -> str:
    """Scrub a generation into statement shape.

    Strips surrounding quotes, removes question marks (the output must be
    declarative), and collapses whitespace runs. An empty result is the
    caller's cue to emit an error record instead.
    """
    cleaned = text.strip().strip(_QUOTES)
    cleaned = cleaned.replace("?", "")
    return re.sub(r"\s+", " ", cleaned).strip()


class _Generator:
    def __init__(self, config: BackendConfig):
        import torch
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self.torch = torch
        if config.seed is not None:
            torch.manual_seed(config.seed)
        self.tokenizer = AutoTokenizer.from_pretrained(config.model)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(config.model)
        self.model.to(config.device)
        self.model.eval()
        self.config = config
        # Never emit padding/bos/unk: they decode to nothing and starve short
        # generations.
        suppressed = {
            self.tokenizer.pad_token_id,
            self.tokenizer.bos_token_id,
            self.tokenizer.unk_token_id,
        }
        suppressed.discard(None)
        suppressed.discard(self.tokenizer.eos_token_id)
        self.bad_words_ids = [[i] for i in sorted(suppressed)] or None

    def generate(self, question: str, answer: str) -> str:
        text = f"{question} {self.config.separator} {answer}"
        inputs = self.tokenizer([text], return_tensors="pt", truncation=True, max_length=512)
        inputs = {k: v.to(self.config.device) for k, v in inputs.items()}
        with self.torch.no_grad():
            output_ids = self.model.generate(
                **inputs,
                do_sample=False,
                num_beams=self.config.beam_width,
                max_new_tokens=self.config.max_output_length,
                min_new_tokens=min(_MIN_NEW_TOKENS, self.config.max_output_length),
                bad_words_ids=self.bad_words_ids,
            )
        return self.tokenizer.decode(output_ids[0], skip_special_tokens=True).rstrip()


def _respond(out, record: dict) -> None:
    out.write(json.dumps(record, ensure_ascii=False) + "\n")
    out.flush()


def serve(config: BackendConfig, stdin=None, stdout=None) -> int:
    """Run until end of input; returns the process exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    config.validate()
    try:
        generator = _Generator(config)
    except Exception as exc:
        print(f"model load failed: {exc}", file=sys.stderr)
        return 2

    for lineno, line in enumerate(stdin, start=1):
        if not line.strip():
            continue
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request is not an object")
        except ValueError as exc:
            _respond(stdout, {"id": f"line-{lineno}", "error": f"malformed request: {exc}"})
            continue
        request_id = str(request.get("id", f"line-{lineno}"))
        try:
            question = request["question"]
            answer = request["answer"]
        except KeyError as exc:
            _respond(stdout, {"id": request_id, "error": f"missing field {exc.args[0]!r}"})
            continue
        try:
            hypothesis = hygiene(generator.generate(str(question), str(answer)))
        except Exception as exc:  # per-item failures must not kill the server
            _respond(stdout, {"id": request_id, "error": f"generation failed: {exc}"})
            continue
        if not hypothesis:
            _respond(stdout, {"id": request_id, "error": "empty generation"})
            continue
        _respond(stdout, {"id": request_id, "hypothesis": hypothesis})
    return 0
