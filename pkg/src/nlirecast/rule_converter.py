"""Deterministic question+answer to declarative-hypothesis conversion.

An ordered rule grammar over shallow token patterns; no parser, no lexicon
beyond a closed irregular-verb stem list. A question either matches one of the
rules below or the conversion reports a typed failure:

  R1  fill-in-the-blank: substitute the answer into the first blank run.
  R2  "Which of the following is TRUE/NOT true/wrong ...": assert the answer
      with the polarity literal copied verbatim.
  R3  copula wh questions, contraction ("What's <NP>?") and full
      ("What is <NP> <relative clause>?") forms.
  R4  wh + auxiliary + subject inversion ("How often does the woman ...?"),
      with do-support folded into the verb and the answer placed in the
      object slot (what/who/which) or clause-finally (how/when/where/why).

Outputs favor determinism over fluency; a downstream well-formedness filter
decides whether they are usable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .base import ParamsMixin
from .errors import DataError
from .question_analysis import WH_WORDS, detect_subject, is_multi_clause
from .validation import normalize_text

FAILURE_REASONS = ("multi_clause", "no_rule_matched", "empty_answer", "answer_is_question")

_R4_AUXILIARIES = ("do", "does", "did", "is", "are", "was", "were")
_COPULAS = ("is", "are", "was", "were")
_OBJECT_WH = ("what", "who", "whom", "which")
_MAX_WH_ATTACHMENT = 3

_VOWELS = "aeiou"

# Common irregular stems; for these "did <verb>" is kept instead of a wrong
# regular past.
_IRREGULAR_VERBS = frozenset(
    """
    arise awake be bear beat become begin bend bet bind bite bleed blow break
    breed bring build burst buy cast catch choose cling come cost creep cut
    deal dig dive do draw drink drive eat fall feed feel fight find flee fling
    fly forbid forget forgive freeze get give go grind grow hang have hear
    hide hit hold hurt keep kneel know lay lead leave lend let lie light lose
    make mean meet pay prove put quit read ride ring rise run say see seek
    sell send set sew shake shed shine shoot show shrink shut sing sink sit
    slay sleep slide sling speak speed spend spin spit split spread spring
    stand steal stick sting stink strike strive swear sweep swim swing take
    teach tear tell think throw thrust understand undergo wake wear weave weep
    win wind withdraw write
    """.split()
)


@dataclass(frozen=True)
class ConversionOutcome:
    """Result of converting one (question, answer) pair."""

    status: str
    hypothesis: str | None = None
    failure_reason: str | None = None
    detail: str | None = None

    def __post_init__(self):
        if self.status == "success":
            if not self.hypothesis:
                raise DataError("successful outcome requires a non-empty hypothesis")
            if self.failure_reason is not None:
                raise DataError("successful outcome cannot carry a failure reason")
        elif self.status == "failure":
            if self.failure_reason not in FAILURE_REASONS:
                raise DataError(f"unknown failure reason: {self.failure_reason!r}")
            if self.hypothesis is not None:
                raise DataError("failed outcome cannot carry a hypothesis")
        else:
            raise DataError(f"unknown outcome status: {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == "success"

    @classmethod
    def success(cls, hypothesis: str) -> "ConversionOutcome":
        return cls(status="success", hypothesis=hypothesis)

    @classmethod
    def failure(cls, reason: str, detail: str | None = None) -> "ConversionOutcome":
        return cls(status="failure", failure_reason=reason, detail=detail)


# -- morphology --


def _third_singular(verb: str) -> str:
    specials = {"have": "has", "do": "does", "be": "is"}
    low = verb.lower()
    if low in specials:
        return specials[low]
    if re.search(r"(s|x|z|ch|sh|o)$", low):
        return verb + "es"
    if len(verb) >= 2 and verb[-1] in "yY" and verb[-2].lower() not in _VOWELS:
        return verb[:-1] + "ies"
    return verb + "s"


def _regular_past(verb: str) -> str | None:
    """Regular +ed form when safely derivable, otherwise None.

    None for known irregular stems and for consonant-vowel-consonant endings
    where doubling would be a guess (stop -> stopped vs. stoped).
    """
    low = verb.lower()
    if low in _IRREGULAR_VERBS or len(low) < 2 or not low.isalpha():
        return None
    if low.endswith("e"):
        return verb + "d"
    if low.endswith("y"):
        if low[-2] not in _VOWELS:
            return verb[:-1] + "ied"
        return verb + "ed"
    if low[-1] in _VOWELS:
        return None
    if low[-1] in "wx":
        return verb + "ed"
    if low[-2] not in _VOWELS:
        return verb + "ed"
    if len(low) >= 3 and low[-3] in _VOWELS:
        return None  # CVC ending: doubling is ambiguous
    return verb + "ed"


def _fold_do_support(aux: str, verb: str) -> list[str]:
    """Fold a do-auxiliary into the verb; keeps "did <verb>" when unsafe."""
    low = aux.lower()
    if low == "does":
        return [_third_singular(verb)]
    if low == "do":
        return [verb]
    past = _regular_past(verb)
    return [past] if past is not None else [aux, verb]


# -- answer normalization --

_PROPER_EXEMPT = ("I", "I'm", "I'd", "I'll", "I've")


def _looks_proper(token: str, question: str) -> bool:
    core = token.strip("\"'’,;:()")
    if not core:
        return False
    if core in _PROPER_EXEMPT:
        return True
    if any(c.isupper() for c in core[1:]):
        return True
    if len(core) >= 2 and core.isupper():
        return True
    if core[:1].isupper():
        question_tokens = re.findall(r"[\w'’]+", question)[1:]
        if core in question_tokens:
            return True
    return False


def normalize_answer(answer: str, question: str = "") -> str:
    """First sentence of the answer, shaped for mid-sentence insertion.

    Keeps the text up to the first terminal punctuation, strips that
    punctuation, and lowercases the leading character unless the first token
    looks like a proper noun (internal capitals, an acronym, or the same
    capitalized token occurring inside the question).
    """
    text = normalize_text(answer)
    if not text:
        return ""
    segment = ""
    for part in re.split(r"[.!?]+", text):
        if part.strip():
            segment = part.strip()
            break
    if not segment:
        return ""
    first_token = segment.split()[0]
    if _looks_proper(first_token, question):
        return segment
    return segment[0].lower() + segment[1:]


# -- assembly --


def _finish(text: str) -> str:
    """Final hypothesis hygiene: spacing, no "?", capital start, terminal stop."""
    s = normalize_text(text).replace("?", ".")
    s = re.sub(r"\s+([.,!;:])", r"\1", s)
    if not s:
        return s
    s = s[:1].upper() + s[1:]
    if not s.endswith((".", "!")):
        s += "."
    return s


def fill_blank(question: str, answer_text: str) -> str:
    """Substitute the first blank run of a FITB question with the answer."""
    filled = re.sub(r"_+", lambda m: answer_text, question, count=1)
    return _finish(filled)


_WHICH_POLARITY = re.compile(
    r"^which of the following\b.*?\b(?:is|are)\s+((?:not\s+)?(?:true|false)|wrong)\b",
    re.IGNORECASE,
)

_CONTRACTION_COPULA = re.compile(
    r"^(what|who|when|where|which|why|how)(['’]s)\s+(.+)$", re.IGNORECASE
)

_FULL_COPULA = re.compile(
    r"^(what|who|which)(\s+of\s+the\s+following)?\s+(is|are)\s+(.+)$", re.IGNORECASE
)


def _strip_terminal(question: str) -> str:
    return re.sub(r"[\s?.!]+$", "", question)


def _try_which_polarity(question: str, raw_answer: str) -> str | None:
    m = _WHICH_POLARITY.match(question)
    if not m:
        return None
    polarity = question[m.start(1):m.end(1)]
    answer = re.sub(r"[\s.!?]+$", "", raw_answer.strip())
    if not answer:
        return None
    return _finish(f"{answer} is {polarity}")


def _deinvert_relative(clause: str) -> str:
    """Fold an embedded do-auxiliary inside a relative clause into its verb."""
    tokens = clause.split()
    aux_index = None
    for i, token in enumerate(tokens):
        if token.lower() in ("do", "does", "did"):
            aux_index = i
    if aux_index is None or aux_index + 1 >= len(tokens):
        return clause
    left = tokens[:aux_index]
    aux = tokens[aux_index]
    after = tokens[aux_index + 1:]
    negation = [after[0]] if after[0].lower() == "not" else []
    verb_index = len(negation)
    if verb_index >= len(after):
        return clause
    if aux.lower() == "did" and _regular_past(after[verb_index]) is None:
        return clause  # already declarative order; keep "did"
    folded = _fold_do_support(aux, after[verb_index])
    return " ".join(left + negation + folded + after[verb_index + 1:])


def _try_copula_wh(question: str, answer: str) -> str | None:
    base = _strip_terminal(question)
    m = _CONTRACTION_COPULA.match(base)
    if m:
        return _finish(f"{m.group(3)}{m.group(2)} {answer}")
    m = _FULL_COPULA.match(base)
    if not m:
        return None
    copula = m.group(3)
    clause = _deinvert_relative(m.group(4))
    return _finish(f"{answer} {copula} {clause}")


def _try_wh_aux_subject(question: str, answer: str) -> str | None:
    base = _strip_terminal(question)
    tokens = base.split()
    if not tokens or tokens[0].lower() not in WH_WORDS:
        return None
    from .question_analysis import AUXILIARIES

    aux_index = None
    for j in range(1, min(len(tokens), 2 + _MAX_WH_ATTACHMENT)):
        if tokens[j].lower() in AUXILIARIES:
            aux_index = j
            break
    if aux_index is None or tokens[aux_index].lower() not in _R4_AUXILIARIES:
        return None
    aux = tokens[aux_index]
    remainder = tokens[aux_index + 1:]
    if not remainder:
        return None

    if aux.lower() in _COPULAS:
        return _finish(f"{' '.join(remainder)} {aux} {answer}")

    n = detect_subject(remainder)
    if n == 0 or n >= len(remainder):
        return None
    subject = remainder[:n]
    body = remainder[n:]
    negation = [body[0]] if body[0].lower() == "not" else []
    verb_index = len(negation)
    if verb_index >= len(body):
        return None
    folded = _fold_do_support(aux, body[verb_index])
    tail = body[verb_index + 1:]
    if tokens[0].lower() in _OBJECT_WH:
        parts = subject + negation + folded + [answer] + tail
    else:
        parts = subject + negation + folded + tail + [answer]
    return _finish(" ".join(parts))


def convert_rule(question: str, answer: str) -> ConversionOutcome:
    """Convert one (question, answer) pair, or report a typed failure.

    Pre-checks (multi-clause question, empty answer, answer that is itself a
    question) run before the rules; the rules apply in fixed order R1..R4 and
    the first match wins.
    """
    q = normalize_text(question)
    if not q:
        return ConversionOutcome.failure("no_rule_matched", detail="empty question")
    if is_multi_clause(q):
        return ConversionOutcome.failure("multi_clause")
    normalized_answer = normalize_answer(answer, q)
    if not normalized_answer:
        return ConversionOutcome.failure("empty_answer")
    if answer.strip().endswith("?"):
        return ConversionOutcome.failure("answer_is_question")

    if "_" in q:
        return ConversionOutcome.success(fill_blank(q, normalized_answer))
    for attempt in (
        lambda: _try_which_polarity(q, answer),
        lambda: _try_copula_wh(q, normalized_answer),
        lambda: _try_wh_aux_subject(q, normalized_answer),
    ):
        hypothesis = attempt()
        if hypothesis:
            return ConversionOutcome.success(hypothesis)
    return ConversionOutcome.failure("no_rule_matched")


class RuleConverter(ParamsMixin):
    """Stateless transformer wrapping the rule grammar."""

    def fit(self, X=None, y=None):
        return self

    def convert(self, question: str, answer: str) -> ConversionOutcome:
        return convert_rule(question, answer)

    def transform(self, X) -> list[ConversionOutcome]:
        """Convert a sequence of (question, answer) pairs."""
        return [convert_rule(q, a) for q, a in X]


def load_golden_fixtures() -> list[dict]:
    """Plain dict rows of the shipped conversion fixture file."""
    text = resources.files("nlirecast").joinpath("data/rule_conversions.jsonl").read_text("utf-8")
    return [json.loads(line) for line in text.splitlines() if line.strip()]
