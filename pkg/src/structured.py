"""
Structured impression parsing and validation.

LLM output for the few-shot structured prompt is a JSON object of the form
{"impression": str, "attributes": [{"pathology", "positional", "severity",
"size"}, ...]}. The tuple list may also arrive under "findings". Chat models
often wrap the object in prose, so the first balanced {...} block is used.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .errors import NotJson, SchemaViolation, VocabViolation
from .vocab import VocabLists

ATTRIBUTE_FIELDS = ("pathology", "positional", "severity", "size")
ATTRIBUTE_LIST_KEYS = ("attributes", "findings")


@dataclass(frozen=True)
class Attribute:
    pathology: str
    positional: str = ""
    severity: str = ""
    size: str = ""

    def to_dict(self) -> Dict[str, str]:
        return {name: getattr(self, name) for name in ATTRIBUTE_FIELDS}


@dataclass(frozen=True)
class StructuredImpression:
    impression: str
    attributes: Tuple[Attribute, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "impression": self.impression,
            "attributes": [a.to_dict() for a in self.attributes],
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=indent)


def extract_json_object(text: str) -> str:
    """Return the first balanced {...} substring, honoring JSON string escapes."""
    start = text.find("{")
    while start != -1:
        depth = 0
        in_string = False
        escaped = False
        for pos in range(start, len(text)):
            ch = text[pos]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
                continue
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return text[start : pos + 1]
        # unbalanced from this brace; try the next one
        start = text.find("{", start + 1)
    raise NotJson("no JSON object found in model output")


def _check_term(value: str, list_name: str, vocab: VocabLists) -> None:
    if vocab.contains(list_name, value):
        return
    # multi-valued attributes such as "bilateral, base"
    parts = [p.strip() for p in value.split(",") if p.strip()]
    for part in parts:
        if not vocab.contains(list_name, part):
            raise VocabViolation(part, list_name)


def _parse_attribute(raw: Any, position: int, vocab: VocabLists) -> Attribute:
    where = f"attributes[{position}]"
    if not isinstance(raw, dict):
        raise SchemaViolation(where, "expected an object")

    values = {}
    for name in ATTRIBUTE_FIELDS:
        value = raw.get(name, "")
        if value is None:
            value = ""
        if not isinstance(value, str):
            raise SchemaViolation(f"{where}.{name}", "expected a string")
        values[name] = value.strip()

    if not values["pathology"]:
        raise SchemaViolation(f"{where}.pathology", "pathology is required")
    for name in ATTRIBUTE_FIELDS:
        if values[name]:
            _check_term(values[name], name, vocab)
    return Attribute(**values)


def parse_structured(text: str, vocab: VocabLists) -> StructuredImpression:
    """
    Parse and validate a structured impression from raw model output.

    Args:
        text: Model output, possibly with prose around the JSON object
        vocab: Vocabulary lists the attribute terms must come from

    Returns:
        Validated StructuredImpression
    """
    try:
        obj = json.loads(extract_json_object(text))
    except json.JSONDecodeError as e:
        raise NotJson(f"model output is not valid JSON: {e}") from e

    impression = obj.get("impression")
    if not isinstance(impression, str):
        raise SchemaViolation("impression", "expected a string")

    list_key = next((k for k in ATTRIBUTE_LIST_KEYS if k in obj), None)
    raw_attributes = obj.get(list_key, []) if list_key else []
    if not isinstance(raw_attributes, list):
        raise SchemaViolation(list_key, "expected a list")

    attributes: List[Attribute] = [
        _parse_attribute(raw, i, vocab) for i, raw in enumerate(raw_attributes)
    ]
    return StructuredImpression(impression=impression.strip(), attributes=tuple(attributes))
