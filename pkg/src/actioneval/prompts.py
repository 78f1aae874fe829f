"""Per-action question generation for yes/no visual question answering.

Every action class gets exactly one question. By default the class name's
verb is turned into its gerund and substituted into ``"is someone {action}?"``
(so ``sit`` becomes ``is someone sitting?``); awkward nominal phrases such as
``hand shake`` carry a full-question override instead.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .ava_data import ActionVocabulary, Source, _line_stream
from .errors import PromptError

logger = logging.getLogger(__name__)

DEFAULT_PATTERN = "is someone {action}?"

_VOWELS = frozenset("aeiou")

# Gerunds for every verb in the bundled vocabulary. The rule engine below
# would get almost all of these right; the table keeps the known vocabulary
# independent of heuristics.
DEFAULT_GERUND_OVERRIDES: Mapping[str, str] = {
    "answer": "answering",
    "bend": "bending",
    "brush": "brushing",
    "carry": "carrying",
    "catch": "catching",
    "chop": "chopping",
    "clap": "clapping",
    "climb": "climbing",
    "clink": "clinking",
    "close": "closing",
    "cook": "cooking",
    "crawl": "crawling",
    "crouch": "crouching",
    "cut": "cutting",
    "dance": "dancing",
    "die": "dying",
    "dig": "digging",
    "dress": "dressing",
    "drink": "drinking",
    "drive": "driving",
    "eat": "eating",
    "enter": "entering",
    "exit": "exiting",
    "extract": "extracting",
    "fall": "falling",
    "fight": "fighting",
    "fish": "fishing",
    "get": "getting",
    "give": "giving",
    "grab": "grabbing",
    "hit": "hitting",
    "hug": "hugging",
    "jump": "jumping",
    "kick": "kicking",
    "kiss": "kissing",
    "lie": "lying",
    "lift": "lifting",
    "listen": "listening",
    "look": "looking",
    "open": "opening",
    "paint": "painting",
    "play": "playing",
    "point": "pointing",
    "press": "pressing",
    "pull": "pulling",
    "push": "pushing",
    "put": "putting",
    "read": "reading",
    "ride": "riding",
    "row": "rowing",
    "run": "running",
    "sail": "sailing",
    "shake": "shaking",
    "shoot": "shooting",
    "shovel": "shoveling",
    "sing": "singing",
    "sit": "sitting",
    "sleep": "sleeping",
    "smoke": "smoking",
    "stand": "standing",
    "stir": "stirring",
    "swim": "swimming",
    "take": "taking",
    "talk": "talking",
    "throw": "throwing",
    "tie": "tying",
    "touch": "touching",
    "turn": "turning",
    "walk": "walking",
    "watch": "watching",
    "wave": "waving",
    "work": "working",
    "write": "writing",
}

# Full questions for class names that do not start with a usable verb.
DEFAULT_QUESTION_OVERRIDES: Mapping[str, str] = {
    "answer phone": "is someone answering the phone?",
    "brush teeth": "is someone brushing their teeth?",
    "clink glass": "is someone clinking a glass?",
    "hand clap": "is someone clapping their hands?",
    "hand shake": "is someone shaking hands?",
    "hand wave": "is someone waving their hand?",
    "martial art": "is someone doing martial arts?",
    "play board game": "is someone playing a board game?",
    "play musical instrument": "is someone playing a musical instrument?",
    "row boat": "is someone rowing a boat?",
    "sail boat": "is someone sailing a boat?",
}


def gerundize(verb_phrase: str, overrides: Mapping[str, str] | None = None) -> str:
    """Return the phrase with its leading verb in gerund form.

    Only the first token is inflected; the remainder of the phrase (for
    example a ``(an object)`` qualifier) is carried through unchanged.
    Lookup order: override table, then drop a consonant-preceded final 'e',
    then double the final consonant of single-syllable consonant-vowel-
    consonant verbs, else append 'ing'.
    """
    phrase = verb_phrase.strip()
    if not phrase:
        raise PromptError("cannot gerundize an empty phrase")
    if overrides is None:
        overrides = DEFAULT_GERUND_OVERRIDES
    verb, _, rest = phrase.partition(" ")
    gerund = overrides.get(verb)
    if gerund is None:
        gerund = _gerund_by_rule(verb)
    return f"{gerund} {rest}" if rest else gerund


def _gerund_by_rule(verb: str) -> str:
    if len(verb) >= 3 and verb[-1] == "e" and verb[-2] not in _VOWELS:
        return verb[:-1] + "ing"  # dance -> dancing
    if (
        len(verb) >= 3
        and verb[-1] not in _VOWELS
        and verb[-1] not in "wxy"
        and verb[-2] in _VOWELS
        and verb[-3] not in _VOWELS
        and _syllable_groups(verb) == 1
    ):
        return verb + verb[-1] + "ing"  # chop -> chopping
    return verb + "ing"


def _syllable_groups(word: str) -> int:
    groups = 0
    in_group = False
    for ch in word:
        if ch in _VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return groups


@dataclass(frozen=True)
class PromptTemplate:
    """Question pattern plus the override tables used to fill it."""

    pattern: str = DEFAULT_PATTERN
    overrides: Mapping[str, str] = field(default_factory=dict)
    gerund_overrides: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.pattern.count("{action}") != 1:
            raise PromptError("pattern must contain the {action} placeholder exactly once")
        for name, question in self.overrides.items():
            if not question.endswith("?"):
                raise PromptError(f"override for {name!r} must end with '?': {question!r}")


def default_template() -> PromptTemplate:
    return PromptTemplate(
        pattern=DEFAULT_PATTERN,
        overrides=DEFAULT_QUESTION_OVERRIDES,
        gerund_overrides=DEFAULT_GERUND_OVERRIDES,
    )


@dataclass(frozen=True)
class PromptBank:
    """One question per action id; a bijection over the vocabulary."""

    entries: Mapping[int, str]
    template: PromptTemplate

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(sorted(self.entries.items()))

    def __len__(self) -> int:
        return len(self.entries)


def build_prompt_bank(
    vocab: ActionVocabulary,
    template: PromptTemplate | None = None,
    *,
    strict: bool = False,
) -> PromptBank:
    """Generate the question for every class in the vocabulary.

    Full-name overrides win over the pattern. Overrides that reference no
    vocabulary name are an error in strict mode and a logged warning
    otherwise.
    """
    if template is None:
        template = default_template()
    unknown = sorted(set(template.overrides) - set(vocab.names))
    if unknown:
        message = f"overrides reference unknown class names: {', '.join(unknown)}"
        if strict:
            raise PromptError(message)
        logger.warning("%s", message)
    entries: dict[int, str] = {}
    seen: dict[str, int] = {}
    for cls in vocab:
        question = template.overrides.get(cls.name)
        if question is None:
            question = template.pattern.format(action=gerundize(cls.name, template.gerund_overrides))
        if not question or not question.endswith("?"):
            raise PromptError(f"question for {cls.name!r} must be non-empty and end with '?'")
        if question in seen:
            raise PromptError(
                f"classes {seen[question]} and {cls.id} map to the same question {question!r}"
            )
        seen[question] = cls.id
        entries[cls.id] = question
    return PromptBank(entries, template)


def serialize_prompt_bank(bank: PromptBank) -> bytes:
    """Render ``action_id,question`` rows in ascending id order.

    Questions may not contain commas (the CSV schema has no quoting); a
    colliding override must be rephrased.
    """
    out = io.StringIO()
    for action_id, question in bank:
        if "," in question or "\n" in question:
            raise PromptError(f"question contains a comma or newline, rephrase it: {question!r}")
        out.write(f"{action_id},{question}\n")
    return out.getvalue().encode("utf-8")


def parse_prompt_bank(source: Source) -> dict[int, str]:
    """Read a serialized bank back into an id -> question mapping."""
    lines, cleanup = _line_stream(source)
    entries: dict[int, str] = {}
    try:
        for line_no, raw in enumerate(lines, start=1):
            row = raw.decode("utf-8").rstrip("\r\n")
            if not row:
                continue
            head, sep, question = row.partition(",")
            if not sep or not question:
                raise PromptError(f"line {line_no}: expected 'action_id,question'")
            try:
                action_id = int(head)
            except ValueError:
                raise PromptError(f"line {line_no}: bad action id {head!r}") from None
            if action_id in entries:
                raise PromptError(f"line {line_no}: duplicate action id {action_id}")
            entries[action_id] = question
    finally:
        cleanup()
    return entries
