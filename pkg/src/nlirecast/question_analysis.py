"""Heuristic question typing and shallow interrogative-structure analysis.

Two category schemes are supported: a non-exclusive flag set keyed on trigger
words (RACE-style corpora) and a single first-match type drawn from prefix,
suffix, and contains rules (MultiRC-style corpora).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DataError

RACE_FLAGS = ("main_idea", "negation", "dialogue", "math", "deductive", "fitb")

MULTIRC_TYPES = (
    "what",
    "who",
    "how",
    "why",
    "assertion",
    "which",
    "double_questions",
    "when",
    "where",
    "uncategorized",
)


@dataclass(frozen=True)
class CategorySet:
    """Non-exclusive RACE-style flags plus an optional single MultiRC type."""

    race_flags: frozenset = field(default_factory=frozenset)
    multirc_type: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "race_flags", frozenset(self.race_flags))
        for flag in self.race_flags:
            if flag not in RACE_FLAGS:
                raise DataError(f"unknown race flag: {flag!r}")
        if self.multirc_type is not None and self.multirc_type not in MULTIRC_TYPES:
            raise DataError(f"unknown multirc type: {self.multirc_type!r}")

    def tags(self) -> tuple[str, ...]:
        """All category tags as sorted lowercase strings (serialization order)."""
        tags = sorted(self.race_flags)
        if self.multirc_type is not None:
            tags.append(self.multirc_type)
        return tuple(tags)

    @classmethod
    def from_tags(cls, tags) -> "CategorySet":
        flags = set()
        multirc_type = None
        for tag in tags:
            if tag in RACE_FLAGS:
                flags.add(tag)
            elif tag in MULTIRC_TYPES:
                if multirc_type is not None:
                    raise DataError(f"more than one multirc type in tags: {tuple(tags)!r}")
                multirc_type = tag
            else:
                raise DataError(f"unknown category tag: {tag!r}")
        return cls(frozenset(flags), multirc_type)


# -- RACE-style flags --

_MAIN_IDEA_WORDS = ("mainly", "title", "purpose", "topic")
_MATH_PHRASES = ("how many", "how old", "how much")
_WRONG_PHRASE = "which of the following is wrong"


def _has_word(text_lower: str, word: str) -> bool:
    return re.search(rf"\b{word}\b", text_lower) is not None


def categorize_race(question: str, passage: str) -> CategorySet:
    """Assign the non-exclusive flag set for one question and its passage.

    Single-word triggers match on word boundaries, multiword triggers as
    substrings, all case-insensitively; the dialogue flag depends only on the
    passage (more than 10 double-quote characters).
    """
    q = question.lower()
    flags = set()
    if any(_has_word(q, w) for w in _MAIN_IDEA_WORDS):
        flags.add("main_idea")
    if _has_word(q, "not") or _has_word(q, "except") or _WRONG_PHRASE in q:
        flags.add("negation")
    if passage.count('"') > 10:
        flags.add("dialogue")
    if any(p in q for p in _MATH_PHRASES):
        flags.add("math")
    if _has_word(q, "true"):
        flags.add("deductive")
    if "_" in question:
        flags.add("fitb")
    return CategorySet(frozenset(flags))


# -- MultiRC-style single type --

_DOUBLE_CONTAINS = (
    "and what",
    "and how",
    "and which",
    "and where",
    "and when",
    "and why",
    "and by whom",
    "if not, what?",
)

# (type, prefixes, case-insensitive suffixes), in table row order. "Will " keeps
# its trailing space so "William..." does not read as an assertion.
_MULTIRC_RULES = (
    ("what", ("What", "In what", "With what", "To what"), ("what?",)),
    ("who", ("Who", "Whom", "With whom", "From whom", "For whom"), ("who?", "whom?")),
    ("how", ("How",), ()),
    ("why", ("Why",), ()),
    (
        "assertion",
        ("Could it", "Will ", "Was", "Were", "Has", "Have", "Does", "Would",
         "Did", "Had", "Is", "Are", "Do", "Can", "True or false"),
        (),
    ),
    ("which", ("Which", "In which"), ()),
    ("when", ("When",), ()),
    ("where", ("Where",), ("where?",)),
)

_LY_ADVERB = re.compile(r"^\s*([A-Za-z]{4,}ly)[,\s]+(.+)$", re.DOTALL)


def _strip_leading_adverbs(question: str) -> str | None:
    """Drop leading -ly adverbs ("Approximately how ...") and recapitalize."""
    stripped = question
    changed = False
    while True:
        m = _LY_ADVERB.match(stripped)
        if not m:
            break
        stripped = m.group(2)
        changed = True
    if not changed or not stripped:
        return None
    return stripped[0].upper() + stripped[1:]


def categorize_multirc(question: str) -> str:
    """Assign exactly one MultiRC question type.

    double_questions is evaluated first (the only mid-string rule), then the
    prefix/suffix rules in table row order; first match wins. Prefixes are
    case-sensitive, suffixes case-insensitive. No match yields "uncategorized".
    """
    if question.count("?") > 1 or any(lit in question for lit in _DOUBLE_CONTAINS):
        return "double_questions"
    candidates = [question]
    stripped = _strip_leading_adverbs(question)
    if stripped is not None:
        candidates.append(stripped)
    q_lower = question.lower().rstrip()
    for qtype, prefixes, suffixes in _MULTIRC_RULES:
        if any(c.startswith(p) for c in candidates for p in prefixes):
            return qtype
        if any(q_lower.endswith(s) for s in suffixes):
            return qtype
    return "uncategorized"


# -- interrogative structure --

WH_WORDS = ("what", "who", "whom", "when", "where", "why", "which", "how")

AUXILIARIES = (
    "do", "does", "did", "is", "are", "was", "were",
    "has", "have", "can", "will", "would", "could",
)

_CONJUNCTIONS = ("and", "or", "but")

# How far past the wh word an attached adverb/noun may reach before the
# auxiliary ("which of the following is" needs three tokens).
_MAX_WH_ATTACHMENT = 3


@dataclass(frozen=True)
class WhAnalysis:
    """Shallow parse of one question: wh phrase, auxiliary, spans, shape flags."""

    wh_phrase: str | None = None
    auxiliary: str | None = None
    subject_span: str | None = None
    body_span: str | None = None
    is_fitb: bool = False
    is_multi_clause: bool = False
    terminal: str = "other"


_DETERMINERS = frozenset(
    "the a an this that these those my your his her its our their "
    "each every no some any both another".split()
)
_PRONOUNS = frozenset(
    "i you he she it we they someone somebody anyone anybody everyone everybody".split()
)
_NUMBER_WORDS = frozenset(
    "one two three four five six seven eight nine ten eleven twelve "
    "twenty thirty forty fifty hundred thousand few several many".split()
)


def _terminal_kind(question: str) -> str:
    tail = question.rstrip()
    if not tail:
        return "other"
    last = tail[-1]
    if last == "?":
        return "question_mark"
    if last == ".":
        return "period"
    if last == "_":
        return "blank"
    return "other"


def _is_interrogative_head(token: str) -> bool:
    t = token.lower().strip("\"'")
    return t in AUXILIARIES or t in WH_WORDS or t in ("had", "should", "must", "might")


def is_multi_clause(question: str) -> bool:
    """True when two interrogative clauses are conjoined or "?" appears twice."""
    if question.count("?") > 1:
        return True
    body = question.rstrip().rstrip("?")
    tokens = body.split()
    for i, token in enumerate(tokens[:-1]):
        if token.lower() in _CONJUNCTIONS and _is_interrogative_head(tokens[i + 1]):
            return True
    return False


def detect_subject(tokens: list[str]) -> int:
    """Length of a confidently-recognized subject noun phrase prefix, else 0.

    Recognizes a pronoun, determiner (+ optional number word) + one noun, or a
    short run of capitalized tokens. Anything fancier is left unparsed rather
    than risking a bad verb split.
    """
    if not tokens:
        return 0
    head = tokens[0].lower()
    if head in _PRONOUNS:
        return 1
    if head in _DETERMINERS:
        if len(tokens) >= 3 and tokens[1].lower() in _NUMBER_WORDS:
            return 3
        if len(tokens) >= 2:
            return 2
        return 0
    if tokens[0][:1].isupper():
        n = 1
        while n < min(len(tokens) - 1, 3) and tokens[n][:1].isupper():
            n += 1
        return n
    return 0


def analyze_question(question: str) -> WhAnalysis:
    """Identify the leading wh phrase, auxiliary, and subject/body spans.

    Unparseable structure leaves the optional fields absent; the flags
    (is_fitb, is_multi_clause, terminal) are always populated.
    """
    from .validation import normalize_text

    q = normalize_text(question)
    fitb = "_" in q
    multi = is_multi_clause(q)
    terminal = _terminal_kind(q)
    tokens = q.rstrip("?.!").split()
    if not tokens:
        return WhAnalysis(is_fitb=fitb, is_multi_clause=multi, terminal=terminal)

    first = tokens[0]
    first_lower = first.lower()
    if first_lower in AUXILIARIES:
        # Assertion form: no wh phrase by definition.
        return WhAnalysis(
            auxiliary=first,
            is_fitb=fitb,
            is_multi_clause=multi,
            terminal=terminal,
        )

    contraction = re.match(r"^(what|who|when|where|which|why|how)(['’]s)$", first_lower)
    if contraction:
        rest = " ".join(tokens[1:]) or None
        return WhAnalysis(
            wh_phrase=first[: len(contraction.group(1))],
            auxiliary=first[len(contraction.group(1)):],
            subject_span=rest,
            is_fitb=fitb,
            is_multi_clause=multi,
            terminal=terminal,
        )

    if first_lower not in WH_WORDS:
        return WhAnalysis(is_fitb=fitb, is_multi_clause=multi, terminal=terminal)

    aux_index = None
    for j in range(1, min(len(tokens), 2 + _MAX_WH_ATTACHMENT)):
        if tokens[j].lower() in AUXILIARIES:
            aux_index = j
            break
    if aux_index is None:
        return WhAnalysis(
            wh_phrase=" ".join(tokens[: 1]),
            is_fitb=fitb,
            is_multi_clause=multi,
            terminal=terminal,
        )

    wh_phrase = " ".join(tokens[:aux_index])
    aux = tokens[aux_index]
    remainder = tokens[aux_index + 1:]
    if aux.lower() in ("do", "does", "did"):
        n = detect_subject(remainder)
        subject = " ".join(remainder[:n]) if n else None
        body = " ".join(remainder[n:]) if n and remainder[n:] else None
    else:
        subject = " ".join(remainder) if remainder else None
        body = None
    return WhAnalysis(
        wh_phrase=wh_phrase,
        auxiliary=aux,
        subject_span=subject,
        body_span=body,
        is_fitb=fitb,
        is_multi_clause=multi,
        terminal=terminal,
    )
