"""Content packs: authoring, validation, JSON persistence, and the teacher gate."""

from __future__ import annotations

import dataclasses
import json
import random
import secrets
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

SUBJECTS = ("reading", "math")

GATE_TTL_S = 300.0
GATE_OPERAND_RANGE = (2, 9)


class PackError(Exception):
    """Raised for operations that cannot be applied to a pack."""

    code = "pack-error"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class PackFormatError(PackError):
    """A pack file could not be parsed into a well-formed pack."""

    code = "pack-format"


@dataclass
class Classification:
    classification_id: str
    name: str
    subject: str


@dataclass
class ContentItem:
    """One tutoring question: a prompt over an image with multiple choices."""

    item_id: str
    prompt_text: str
    choices: list[str]
    correct_index: int
    classification_id: str
    subject: str
    media_ref: Optional[str] = None


@dataclass
class ContentPack:
    pack_id: str
    version: int = 0
    classifications: list[Classification] = field(default_factory=list)
    items: list[ContentItem] = field(default_factory=list)

    def find_item(self, item_id: str) -> Optional[ContentItem]:
        for item in self.items:
            if item.item_id == item_id:
                return item
        return None

    def find_classification(self, classification_id: str) -> Optional[Classification]:
        for c in self.classifications:
            if c.classification_id == classification_id:
                return c
        return None


@dataclass(frozen=True)
class Violation:
    """One validation finding; rule names are stable identifiers."""

    rule: str
    subject_id: str
    message: str


def item_violations(item: ContentItem) -> list[Violation]:
    """Check a single item against the ContentItem invariants."""
    out = []
    if not item.prompt_text:
        out.append(Violation("empty-prompt", item.item_id, "prompt_text must be non-empty"))
    if len(item.choices) < 2:
        out.append(Violation("choices-min-two", item.item_id, "at least two answer choices required"))
    if any(not c for c in item.choices):
        out.append(Violation("empty-choice", item.item_id, "answer choices must be non-empty"))
    if len(set(item.choices)) != len(item.choices):
        out.append(Violation("duplicate-choice", item.item_id, "answer choices must be distinct"))
    if not 0 <= item.correct_index < len(item.choices):
        out.append(Violation(
            "answer-index-range", item.item_id,
            f"correct_index {item.correct_index} out of range for {len(item.choices)} choices"))
    if item.subject not in SUBJECTS:
        out.append(Violation("unknown-subject", item.item_id, f"subject must be one of {SUBJECTS}"))
    return out


def validate_pack(pack: ContentPack) -> list[Violation]:
    """Full pack validation report; empty report means the pack can back a session.

    Violations are data, not errors: authoring passes through invalid
    intermediate states, and the report is what gates session start.
    """
    out: list[Violation] = []
    seen_cls: set[str] = set()
    for c in pack.classifications:
        if c.classification_id in seen_cls:
            out.append(Violation("duplicate-classification-id", c.classification_id,
                                 "classification_id must be unique"))
        seen_cls.add(c.classification_id)
        if c.subject not in SUBJECTS:
            out.append(Violation("unknown-subject", c.classification_id,
                                 f"subject must be one of {SUBJECTS}"))

    seen_items: set[str] = set()
    counts: dict[str, int] = {}
    for item in pack.items:
        if item.item_id in seen_items:
            out.append(Violation("duplicate-item-id", item.item_id, "item_id must be unique"))
        seen_items.add(item.item_id)
        out.extend(item_violations(item))
        if item.classification_id not in seen_cls:
            out.append(Violation("unknown-classification", item.item_id,
                                 f"item references unknown classification {item.classification_id!r}"))
        counts[item.classification_id] = counts.get(item.classification_id, 0) + 1

    for cls_id, n in counts.items():
        if n < 2:
            out.append(Violation(
                "min-two-per-classification", cls_id,
                f"classification {cls_id!r} has {n} item(s); at least two are required"))
    return out


def add_classification(pack: ContentPack, classification: Classification) -> ContentPack:
    if pack.find_classification(classification.classification_id) is not None:
        raise PackError(f"duplicate classification_id {classification.classification_id!r}",
                        code="duplicate-classification")
    if classification.subject not in SUBJECTS:
        raise PackError(f"subject must be one of {SUBJECTS}", code="invalid-classification")
    pack.classifications.append(classification)
    pack.version += 1
    return pack


def remove_classification(pack: ContentPack, classification_id: str) -> ContentPack:
    c = pack.find_classification(classification_id)
    if c is None:
        raise PackError(f"unknown classification_id {classification_id!r}",
                        code="classification-not-found")
    if any(i.classification_id == classification_id for i in pack.items):
        raise PackError(f"classification {classification_id!r} still has items",
                        code="classification-in-use")
    pack.classifications.remove(c)
    pack.version += 1
    return pack


def add_item(pack: ContentPack, item: ContentItem) -> ContentPack:
    """Append an item. The pack may become invalid for sessions (e.g. a
    one-item classification); that is surfaced by validate_pack, not here."""
    if pack.find_item(item.item_id) is not None:
        raise PackError(f"duplicate item_id {item.item_id!r}", code="duplicate-item")
    if pack.find_classification(item.classification_id) is None:
        raise PackError(f"unknown classification_id {item.classification_id!r}",
                        code="classification-not-found")
    bad = item_violations(item)
    if bad:
        raise PackError("; ".join(v.message for v in bad), code="invalid-item")
    pack.items.append(item)
    pack.version += 1
    return pack


def edit_item(pack: ContentPack, item_id: str, **new_fields: Any) -> ContentPack:
    item = pack.find_item(item_id)
    if item is None:
        raise PackError(f"unknown item_id {item_id!r}", code="item-not-found")
    allowed = {f.name for f in dataclasses.fields(ContentItem)} - {"item_id"}
    unknown = set(new_fields) - allowed
    if unknown:
        raise PackError(f"unknown field(s) {sorted(unknown)}", code="invalid-item")
    updated = dataclasses.replace(item, **new_fields)
    if pack.find_classification(updated.classification_id) is None:
        raise PackError(f"unknown classification_id {updated.classification_id!r}",
                        code="classification-not-found")
    bad = item_violations(updated)
    if bad:
        raise PackError("; ".join(v.message for v in bad), code="invalid-item")
    pack.items[pack.items.index(item)] = updated
    pack.version += 1
    return pack


def remove_item(pack: ContentPack, item_id: str) -> ContentPack:
    item = pack.find_item(item_id)
    if item is None:
        raise PackError(f"unknown item_id {item_id!r}", code="item-not-found")
    pack.items.remove(item)
    pack.version += 1
    return pack


# --- persistence ------------------------------------------------------------

_PACK_FIELDS = {"pack_id", "version", "classifications", "items"}
_CLS_FIELDS = {"classification_id", "name", "subject"}
_ITEM_FIELDS = {"item_id", "prompt_text", "choices", "correct_index",
                "classification_id", "subject", "media_ref"}
_ITEM_REQUIRED = _ITEM_FIELDS - {"media_ref"}


def pack_to_dict(pack: ContentPack) -> dict:
    return {
        "pack_id": pack.pack_id,
        "version": pack.version,
        "classifications": [dataclasses.asdict(c) for c in pack.classifications],
        "items": [dataclasses.asdict(i) for i in pack.items],
    }


def _require(obj: dict, required: set[str], allowed: set[str], where: str) -> None:
    missing = required - set(obj)
    if missing:
        raise PackFormatError(f"{where}: missing field {sorted(missing)[0]!r}")
    unknown = set(obj) - allowed
    if unknown:
        raise PackFormatError(f"{where}: unknown field {sorted(unknown)[0]!r}")


def pack_from_dict(raw: dict) -> ContentPack:
    if not isinstance(raw, dict):
        raise PackFormatError("pack document must be a JSON object")
    _require(raw, _PACK_FIELDS, _PACK_FIELDS, "pack")
    if not isinstance(raw["version"], int) or isinstance(raw["version"], bool):
        raise PackFormatError("pack: version must be an integer")
    classifications = []
    for i, c in enumerate(raw["classifications"]):
        _require(c, _CLS_FIELDS, _CLS_FIELDS, f"classifications[{i}]")
        classifications.append(Classification(**c))
    items = []
    for i, it in enumerate(raw["items"]):
        _require(it, _ITEM_REQUIRED, _ITEM_FIELDS, f"items[{i}]")
        if not isinstance(it["correct_index"], int) or isinstance(it["correct_index"], bool):
            raise PackFormatError(f"items[{i}]: correct_index must be an integer")
        if not isinstance(it["choices"], list):
            raise PackFormatError(f"items[{i}]: choices must be a list")
        items.append(ContentItem(**it))
    pack = ContentPack(pack_id=raw["pack_id"], version=raw["version"],
                       classifications=classifications, items=items)
    ids = [it.item_id for it in pack.items]
    if len(set(ids)) != len(ids):
        raise PackFormatError("pack: duplicate item_id")
    cls_ids = [c.classification_id for c in pack.classifications]
    if len(set(cls_ids)) != len(cls_ids):
        raise PackFormatError("pack: duplicate classification_id")
    return pack


def save_pack(pack: ContentPack, destination: str | Path) -> None:
    Path(destination).write_text(
        json.dumps(pack_to_dict(pack), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")


def load_pack(source: str | Path) -> ContentPack:
    try:
        raw = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise PackFormatError(f"not valid JSON: line {e.lineno}: {e.msg}") from e
    except TypeError as e:
        raise PackFormatError(str(e)) from e
    return pack_from_dict(raw)


# --- teacher gate -----------------------------------------------------------

@dataclass
class GateChallenge:
    """Single-use arithmetic challenge restricting authoring to adults."""

    challenge_id: str
    operand_a: int
    operand_b: int
    expected: int
    expires_at: float
    operation: str = "multiplication"
    used: bool = False


@dataclass(frozen=True)
class GateResult:
    passed: bool
    reason: Optional[str] = None


def new_gate_challenge(now: float, rng: Optional[random.Random] = None,
                       ttl_s: float = GATE_TTL_S) -> GateChallenge:
    pick = rng.randint if rng is not None else random.randint
    a = pick(*GATE_OPERAND_RANGE)
    b = pick(*GATE_OPERAND_RANGE)
    return GateChallenge(
        challenge_id=secrets.token_hex(8),
        operand_a=a, operand_b=b, expected=a * b,
        expires_at=now + ttl_s)


def verify_gate(challenge: GateChallenge, answer: int, now: float) -> GateResult:
    """Consumes the challenge on first use, pass or fail."""
    if challenge.used:
        return GateResult(False, "already-used")
    challenge.used = True
    if now >= challenge.expires_at:
        return GateResult(False, "expired")
    if answer != challenge.expected:
        return GateResult(False, "wrong-answer")
    return GateResult(True)
