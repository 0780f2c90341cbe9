"""Input validation and text scrubbing helpers used across the package."""

from __future__ import annotations

import re
from collections.abc import Iterable

from .errors import DataError

_SPACE_RUN = re.compile(r"[ \t]+")
_WS_RUN = re.compile(r"\s+")


def normalize_text(text: str, preserve_newlines: bool = False) -> str:
    """Collapse runs of spaces/tabs and trim the ends.

    With preserve_newlines=True (dialogue turns) internal newlines survive and
    each line is collapsed separately; otherwise all whitespace runs, newlines
    included, become single spaces.
    """
    if preserve_newlines:
        lines = [_SPACE_RUN.sub(" ", line).strip() for line in text.split("\n")]
        return "\n".join(lines).strip("\n")
    return _WS_RUN.sub(" ", text).strip()


def check_nonempty(value: str, name: str) -> str:
    if not value or not value.strip():
        raise DataError(f"{name} must be non-empty")
    return value


def check_choice(value: str, allowed: Iterable[str], name: str) -> str:
    allowed = tuple(allowed)
    if value not in allowed:
        raise DataError(f"{name} must be one of {allowed}, got {value!r}")
    return value


def check_unit_interval(value: float, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DataError(f"{name} must be a number, got {value!r}") from None
    if not 0.0 <= value <= 1.0:
        raise DataError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if value <= 0:
        raise DataError(f"{name} must be positive, got {value!r}")
    return value


def check_unique(ids: Iterable[str], what: str) -> None:
    seen: set[str] = set()
    for item in ids:
        if item in seen:
            raise DataError(f"duplicate {what}: {item!r}")
        seen.add(item)
