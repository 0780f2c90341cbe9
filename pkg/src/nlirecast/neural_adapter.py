"""Client for an external neural question+answer -> statement converter.

The backend is any command that speaks a line protocol on its standard
streams: the client writes `{"id", "question", "answer"}` objects one per
line, closes its write end, and the backend must answer every id with either
`{"id", "hypothesis"}` or `{"id", "error"}` before exiting with status 0.
Responses are cached in an append-only line file keyed by a content hash, so
repeated conversions never touch the backend again.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .base import ParamsMixin
from .errors import BackendError, DataError
from .rule_converter import ConversionOutcome
from .validation import check_unique

DEFAULT_TIMEOUT = 300.0

_KEY_SEPARATOR = "\x1f"


@dataclass(frozen=True)
class ConversionRequest:
    id: str
    question: str
    answer: str


@dataclass(frozen=True)
class ConversionResponse:
    id: str
    hypothesis: str | None = None
    error: str | None = None

    def __post_init__(self):
        if (self.hypothesis is None) == (self.error is None):
            raise DataError(f"response {self.id!r} needs exactly one of hypothesis/error")


def cache_key(question: str, answer: str) -> str:
    digest = hashlib.sha256((question + _KEY_SEPARATOR + answer).encode("utf-8"))
    return digest.hexdigest()


def _load_cache(path: Path) -> dict[str, dict]:
    entries: dict[str, dict] = {}
    if not path.exists():
        return entries
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                key = record["key"]
            except (json.JSONDecodeError, KeyError, TypeError):
                raise DataError(f"{path}:{lineno}: corrupt cache line") from None
            entries[key] = record  # last entry wins
    return entries


def _append_cache(path: Path, records: Iterable[dict]) -> None:
    lines = [json.dumps(r, ensure_ascii=False) for r in records]
    if not lines:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as handle:
        fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
        try:
            handle.write("\n".join(lines) + "\n")
            handle.flush()
        finally:
            fcntl.flock(handle.fileno(), fcntl.LOCK_UN)


def _run_backend(
    backend_command: str, requests: Sequence[ConversionRequest], timeout: float
) -> dict[str, ConversionResponse]:
    payload = "".join(
        json.dumps({"id": r.id, "question": r.question, "answer": r.answer}, ensure_ascii=False)
        + "\n"
        for r in requests
    )
    try:
        process = subprocess.Popen(
            shlex.split(backend_command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            encoding="utf-8",
        )
    except OSError as exc:
        raise BackendError(f"backend failed to start: {exc}") from None
    try:
        stdout, _ = process.communicate(payload, timeout=timeout)
    except subprocess.TimeoutExpired:
        process.kill()
        process.wait()
        raise BackendError(f"backend timed out after {timeout:g}s") from None
    if process.returncode != 0:
        raise BackendError(f"backend exited with status {process.returncode}")

    expected = {r.id for r in requests}
    responses: dict[str, ConversionResponse] = {}
    for lineno, line in enumerate(stdout.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            raise BackendError(f"backend emitted malformed line {lineno}: {line[:80]!r}") from None
        if not isinstance(record, dict) or "id" not in record:
            raise BackendError(f"backend emitted malformed line {lineno}: {line[:80]!r}")
        response_id = str(record["id"])
        if response_id not in expected:
            raise BackendError(f"backend replied to unknown id {response_id!r} (line {lineno})")
        if "hypothesis" in record:
            responses[response_id] = ConversionResponse(response_id, hypothesis=record["hypothesis"])
        elif "error" in record:
            responses[response_id] = ConversionResponse(response_id, error=str(record["error"]))
        else:
            raise BackendError(f"backend line {lineno} has neither hypothesis nor error")
    missing = sorted(expected - set(responses))
    if missing:
        raise BackendError(f"backend never answered ids: {', '.join(missing)}")
    return responses


def _outcome_from_cache(record: dict) -> ConversionOutcome:
    if record.get("hypothesis"):
        return ConversionOutcome.success(record["hypothesis"])
    return ConversionOutcome.failure(
        "no_rule_matched", detail=f"backend error: {record.get('error', 'empty hypothesis')}"
    )


def convert_batch(
    backend_command: str | None,
    requests: Sequence[ConversionRequest],
    cache: str | Path,
    timeout: float = DEFAULT_TIMEOUT,
) -> list[ConversionOutcome]:
    """Convert a batch through the backend, serving cache hits without it.

    Output order equals request order. Every backend response, errors
    included, is appended to the cache.
    """
    check_unique((r.id for r in requests), "request id")
    cache = Path(cache)
    entries = _load_cache(cache)

    keys = [cache_key(r.question, r.answer) for r in requests]
    misses = [r for r, key in zip(requests, keys) if key not in entries]
    if misses:
        if not backend_command:
            raise BackendError(
                f"{len(misses)} requests are not cached and no backend command is configured"
            )
        responses = _run_backend(backend_command, misses, timeout)
        fresh = []
        for request in misses:
            response = responses[request.id]
            record = {"key": cache_key(request.question, request.answer)}
            if response.hypothesis is not None:
                record["hypothesis"] = response.hypothesis
            else:
                record["error"] = response.error
            fresh.append(record)
            entries[record["key"]] = record
        _append_cache(cache, fresh)

    return [_outcome_from_cache(entries[key]) for key in keys]


class NeuralConverter(ParamsMixin):
    """Stateless transformer facade over the backend protocol client."""

    def __init__(
        self,
        backend_command: str | None = None,
        cache: str | Path = "neural_cache.jsonl",
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self.backend_command = backend_command
        self.cache = cache
        self.timeout = timeout

    def fit(self, X=None, y=None):
        return self

    def convert_requests(self, requests: Sequence[ConversionRequest]) -> list[ConversionOutcome]:
        return convert_batch(self.backend_command, requests, self.cache, self.timeout)

    def transform(self, X) -> list[ConversionOutcome]:
        """Convert a sequence of (question, answer) pairs."""
        requests = [ConversionRequest(f"b{i}", q, a) for i, (q, a) in enumerate(X)]
        return self.convert_requests(requests)
