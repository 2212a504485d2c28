"""
Rule-based sentence splitter for radiology impressions.

Splits on sentence-terminal punctuation (. ! ?) followed by whitespace or
end of text. A period does not end a sentence after a known abbreviation or
between two digits ("3. 5 cm"). Numbered impressions ("1. Low lung volumes.
2. Atelectasis.") lose their enumerators.
"""

import re
from typing import List

ABBREVIATIONS = frozenset(
    {"dr", "vs", "mr", "mrs", "ms", "e.g", "i.e", "approx", "st", "cf", "etc"}
)

_TERMINAL = re.compile(r"[.!?]+(?=\s|$)")
_WORD_BEFORE = re.compile(r"([A-Za-z][A-Za-z.]*)$")
_ENUMERATOR = re.compile(r"^\(?\d{1,2}[.)](?:\s+|$)")
_BARE_ENUMERATOR = re.compile(r"^\(?\d{1,2}$")


def _is_abbreviation(text: str, period_pos: int) -> bool:
    match = _WORD_BEFORE.search(text, 0, period_pos)
    if not match:
        return False
    return match.group(1).lower() in ABBREVIATIONS


def _is_decimal_gap(text: str, period_pos: int, end: int) -> bool:
    rest = text[end:].lstrip()
    return period_pos > 0 and text[period_pos - 1].isdigit() and bool(rest) and rest[0].isdigit()


def _strip_enumerator(sentence: str) -> str:
    return _ENUMERATOR.sub("", sentence.strip(), count=1).strip()


def split_sentences(text: str) -> List[str]:
    """Split a report impression into sentences; never returns an empty list
    for non-blank input."""
    sentences = []
    start = 0
    for match in _TERMINAL.finditer(text):
        end = match.end()
        if match.group() == ".":
            if _is_abbreviation(text, match.start()):
                continue
            if _is_decimal_gap(text, match.start(), end):
                continue
            # "2." opening a numbered item is not a sentence of its own
            if _BARE_ENUMERATOR.match(text[start : match.start()].strip()):
                continue
        sentence = _strip_enumerator(text[start:end])
        if sentence:
            sentences.append(sentence)
        start = end

    tail = _strip_enumerator(text[start:])
    if tail:
        sentences.append(tail)
    if not sentences and text.strip():
        return [text.strip()]
    return sentences
