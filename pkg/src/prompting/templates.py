"""
Template assets for prompt rendering.

Templates are UTF-8 text files with {name} placeholders, listed with their
versions in manifest.yaml. A directory override lets prompts be edited
without touching code.
"""

import re
import string
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml

from ..errors import TemplateError

DEFAULT_TEMPLATE_DIR = Path(__file__).parent / "templates"
MANIFEST_NAME = "manifest.yaml"


def _placeholders(text: str) -> List[str]:
    return [name for _, name, _, _ in string.Formatter().parse(text) if name is not None]


class PromptTemplate:
    """One template asset: text, version and a matcher for rendered output."""

    def __init__(self, name: str, text: str, version: str, placeholders: List[str]):
        found = _placeholders(text)
        if sorted(found) != sorted(placeholders) or len(set(found)) != len(found):
            raise TemplateError(
                f"template '{name}' must use each of {placeholders} exactly once, found {found}"
            )
        self.name = name
        self.text = text
        self.version = version
        self.placeholders = found
        self._pattern = self._build_pattern(text)

    @staticmethod
    def _build_pattern(text: str):
        parts = []
        for literal, name, _, _ in string.Formatter().parse(text):
            parts.append(re.escape(literal))
            if name is not None:
                parts.append(f"(?P<{name}>.*?)")
        return re.compile("^" + "".join(parts) + "$", re.DOTALL)

    def render(self, **values: str) -> str:
        return self.text.format(**values)

    def match(self, rendered: str) -> Optional[Dict[str, str]]:
        """Recover placeholder values from text rendered by this template."""
        m = self._pattern.match(rendered)
        return m.groupdict() if m else None


class TemplateSet:
    """All prompt templates plus the default instruction lists."""

    def __init__(self, templates: Dict[str, PromptTemplate], default_instructions: Dict):
        self.templates = templates
        self.default_instructions = default_instructions

    def __getitem__(self, name: str) -> PromptTemplate:
        try:
            return self.templates[name]
        except KeyError:
            raise TemplateError(f"unknown template '{name}'") from None

    def versions(self) -> Dict[str, str]:
        return {name: t.version for name, t in sorted(self.templates.items())}

    def instructions_for(self, key: str) -> List[str]:
        return list(self.default_instructions.get(key, []))

    @property
    def maxlen_instruction(self) -> str:
        return self.default_instructions.get("maxlen", "Limit the generation to {maxlen} words.")


def load_templates(template_dir: Union[str, Path, None] = None) -> TemplateSet:
    """
    Load template assets from a directory.

    Args:
        template_dir: Directory holding manifest.yaml and the template files;
            the packaged templates when None

    Returns:
        TemplateSet with every template validated
    """
    directory = Path(template_dir) if template_dir else DEFAULT_TEMPLATE_DIR
    manifest_path = directory / MANIFEST_NAME
    try:
        with open(manifest_path, encoding="utf-8") as f:
            manifest = yaml.safe_load(f) or {}
    except FileNotFoundError as e:
        raise TemplateError(f"template manifest not found: {manifest_path}") from e
    except yaml.YAMLError as e:
        raise TemplateError(f"error parsing template manifest: {e}") from e

    default_instructions = manifest.pop("default_instructions", {})
    templates = {}
    for name, entry in manifest.items():
        path = directory / entry["file"]
        with open(path, encoding="utf-8") as f:
            text = f.read()
        # asset files end with one newline that is not part of the prompt
        if text.endswith("\n"):
            text = text[:-1]
        templates[name] = PromptTemplate(
            name, text, str(entry.get("version", "0")), list(entry.get("placeholders", []))
        )
    return TemplateSet(templates, default_instructions)


_default_set: Optional[TemplateSet] = None


def default_templates() -> TemplateSet:
    global _default_set
    if _default_set is None:
        _default_set = load_templates()
    return _default_set
