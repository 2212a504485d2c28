"""
Prompt rendering: zero-shot free text, few-shot structured and refine.

Rendering is a pure function of its inputs and the loaded template assets.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..errors import EmptyContext, MissingShots, MissingVocab, PromptError
from ..structured import parse_structured
from ..vocab import VOCAB_FIELDS, VocabLists
from .templates import TemplateSet, default_templates

COMPLETION = "completion"
CHAT = "chat"
MODES = (COMPLETION, CHAT)

ZERO_SHOT = "zero_shot"
STRUCTURED_FEW_SHOT = "structured_few_shot"
REFINE = "refine"
TEMPLATE_IDS = (ZERO_SHOT, STRUCTURED_FEW_SHOT, REFINE)

DEFAULT_MAXLEN = 50
CONTEXT_SEPARATOR = "\n"

DEFAULT_SHOTS_PATH = Path(__file__).parent / "assets" / "shots.jsonl"


@dataclass(frozen=True)
class PromptSpec:
    mode: str = COMPLETION
    instructions: Optional[Tuple[str, ...]] = None
    maxlen: int = DEFAULT_MAXLEN
    template_id: str = ZERO_SHOT

    def __post_init__(self):
        if self.mode not in MODES:
            raise PromptError(f"unknown prompt mode '{self.mode}'")
        if self.template_id not in TEMPLATE_IDS:
            raise PromptError(f"unknown template id '{self.template_id}'")
        if not isinstance(self.maxlen, int) or self.maxlen < 1:
            raise PromptError(f"maxlen must be a positive integer, got {self.maxlen!r}")
        if self.instructions is not None:
            object.__setattr__(self, "instructions", tuple(self.instructions))

    def with_template(self, template_id: str) -> "PromptSpec":
        return PromptSpec(self.mode, self.instructions, self.maxlen, template_id)


@dataclass(frozen=True)
class RenderedPrompt:
    mode: str
    text: Optional[str] = None
    system_text: Optional[str] = None
    user_text: Optional[str] = None
    template_id: str = ZERO_SHOT
    template_versions: Dict[str, str] = field(default_factory=dict, compare=False)

    def as_text(self) -> str:
        """Single string view used for token estimation and logging."""
        if self.mode == COMPLETION:
            return self.text
        return f"{self.system_text}\n\n{self.user_text}"

    def to_messages(self) -> List[Dict[str, str]]:
        if self.mode != CHAT:
            raise PromptError("completion prompts have no chat messages")
        return [
            {"role": "system", "content": self.system_text},
            {"role": "user", "content": self.user_text},
        ]


@dataclass(frozen=True)
class FewShotExample:
    context: str
    impression_json: str

    def validate(self, vocab: VocabLists) -> None:
        parse_structured(self.impression_json, vocab)


def load_shots(path: Union[str, Path, None] = None) -> List[FewShotExample]:
    """Read few-shot examples from JSONL ({context, impression_json})."""
    shots = []
    with open(path or DEFAULT_SHOTS_PATH, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            obj = json.loads(line)
            impression = obj["impression_json"]
            if not isinstance(impression, str):
                impression = json.dumps(impression, ensure_ascii=False)
            shots.append(FewShotExample(context=obj["context"], impression_json=impression))
    return shots


class PromptRenderer:
    """Renders prompts from a TemplateSet."""

    def __init__(self, templates: Optional[TemplateSet] = None):
        self.templates = templates or default_templates()

    def _instruction_block(self, spec: PromptSpec, default_key: str) -> str:
        instructions = (
            list(spec.instructions)
            if spec.instructions is not None
            else self.templates.instructions_for(default_key)
        )
        instructions.append(self.templates.maxlen_instruction.format(maxlen=spec.maxlen))
        return "\n".join(f"- {line}" for line in instructions)

    def _versions(self, *names: str) -> Dict[str, str]:
        return {name: self.templates[name].version for name in names}

    @staticmethod
    def _join_context(context: Sequence[str]) -> str:
        if not context or any(not c or not c.strip() for c in context):
            raise EmptyContext("context must contain at least one non-empty record")
        return CONTEXT_SEPARATOR.join(context)

    def render_zero_shot(self, context: Sequence[str], spec: PromptSpec) -> RenderedPrompt:
        context_text = self._join_context(context)
        if spec.mode == COMPLETION:
            name = "zero_shot_completion"
            return RenderedPrompt(
                mode=COMPLETION,
                text=self.templates[name].render(
                    instructions=self._instruction_block(spec, COMPLETION),
                    context=context_text,
                ),
                template_id=ZERO_SHOT,
                template_versions=self._versions(name),
            )
        return RenderedPrompt(
            mode=CHAT,
            system_text=self._chat_system(spec),
            user_text=self.templates["zero_shot_chat_user"].render(context=context_text),
            template_id=ZERO_SHOT,
            template_versions=self._versions("zero_shot_chat_system", "zero_shot_chat_user"),
        )

    def _chat_system(self, spec: PromptSpec) -> str:
        return self.templates["zero_shot_chat_system"].render(
            instructions=self._instruction_block(spec, CHAT)
        )

    def _structured_header(self, vocab: VocabLists) -> str:
        return self.templates["structured_header"].render(
            pathology=", ".join(vocab.pathology),
            positional_words=", ".join(vocab.positional),
            severity_words=", ".join(vocab.severity),
            size_words=", ".join(vocab.size),
        )

    def _structured_body(self, shots: Sequence[FewShotExample], context_text: str) -> str:
        shot_template = self.templates["structured_shot"]
        blocks = [
            shot_template.render(context=shot.context, impression=shot.impression_json)
            for shot in shots
        ]
        # the query block ends at "IMPRESSION:" with nothing after it
        blocks.append(shot_template.render(context=context_text, impression="").rstrip())
        return "\n".join(blocks)

    def render_structured(
        self,
        context: Sequence[str],
        vocab: VocabLists,
        shots: Sequence[FewShotExample],
        spec: PromptSpec,
    ) -> RenderedPrompt:
        if not shots:
            raise MissingShots("structured prompts need at least one few-shot example")
        for name in VOCAB_FIELDS:
            if not getattr(vocab, name, None):
                raise MissingVocab(name)
        context_text = self._join_context(context)

        header = self._structured_header(vocab)
        body = self._structured_body(shots, context_text)
        versions = self._versions("structured_header", "structured_shot")

        if spec.mode == COMPLETION:
            return RenderedPrompt(
                mode=COMPLETION,
                text=f"{header}\n{body}",
                template_id=STRUCTURED_FEW_SHOT,
                template_versions=versions,
            )
        return RenderedPrompt(
            mode=CHAT,
            system_text=header,
            user_text=body,
            template_id=STRUCTURED_FEW_SHOT,
            template_versions=versions,
        )

    def render_refine(
        self, prev_impression: str, next_record: str, spec: PromptSpec
    ) -> RenderedPrompt:
        if not prev_impression or not prev_impression.strip():
            raise EmptyContext("refine needs a non-empty previous impression")
        if not next_record or not next_record.strip():
            raise EmptyContext("refine needs a non-empty context record")

        if spec.mode == COMPLETION:
            name = "refine_completion"
            return RenderedPrompt(
                mode=COMPLETION,
                text=self.templates[name].render(
                    instructions=self._instruction_block(spec, REFINE),
                    existing_impression=prev_impression,
                    context=next_record,
                ),
                template_id=REFINE,
                template_versions=self._versions(name),
            )
        return RenderedPrompt(
            mode=CHAT,
            system_text=self._chat_system(spec),
            user_text=self.templates["refine_chat_user"].render(
                existing_impression=prev_impression, context=next_record
            ),
            template_id=REFINE,
            template_versions=self._versions("zero_shot_chat_system", "refine_chat_user"),
        )

    def render_frame(
        self,
        spec: PromptSpec,
        vocab: Optional[VocabLists] = None,
        shots: Sequence[FewShotExample] = (),
    ) -> str:
        """Prompt text with an empty context slot, as a single string."""
        if spec.template_id == STRUCTURED_FEW_SHOT:
            if vocab is None:
                raise MissingVocab("pathology")
            header = self._structured_header(vocab)
            return f"{header}\n{self._structured_body(shots, '')}"
        if spec.mode == COMPLETION:
            return self.templates["zero_shot_completion"].render(
                instructions=self._instruction_block(spec, COMPLETION), context=""
            )
        user = self.templates["zero_shot_chat_user"].render(context="")
        return f"{self._chat_system(spec)}\n\n{user}"

    def extract_sections(self, prompt: RenderedPrompt) -> Dict[str, str]:
        """
        Recover the context pieces from a rendered prompt.

        Returns a dict with "context" and, for refine prompts,
        "existing_impression". Used by stub clients that answer from the prompt.
        """
        if prompt.mode == COMPLETION:
            candidates = [
                (prompt.text, "refine_completion"),
                (prompt.text, "zero_shot_completion"),
            ]
        else:
            candidates = [
                (prompt.user_text, "refine_chat_user"),
                (prompt.user_text, "zero_shot_chat_user"),
            ]

        for text, name in candidates:
            found = self.templates[name].match(text or "")
            if found is not None:
                return {k: v for k, v in found.items() if k != "instructions"}

        # structured prompts: the query context is the last CONTEXT: block
        full = prompt.as_text()
        marker = "CONTEXT: "
        start = full.rfind(marker)
        end = full.rfind("\nIMPRESSION:")
        if start != -1 and end > start:
            return {"context": full[start + len(marker) : end]}
        raise PromptError("could not locate a context block in the prompt")


_default_renderer: Optional[PromptRenderer] = None


def _renderer() -> PromptRenderer:
    global _default_renderer
    if _default_renderer is None:
        _default_renderer = PromptRenderer()
    return _default_renderer


def render_zero_shot(context: Sequence[str], spec: PromptSpec) -> RenderedPrompt:
    return _renderer().render_zero_shot(context, spec)


def render_structured(
    context: Sequence[str], vocab: VocabLists, shots: Sequence[FewShotExample], spec: PromptSpec
) -> RenderedPrompt:
    return _renderer().render_structured(context, vocab, shots, spec)


def render_refine(prev_impression: str, next_record: str, spec: PromptSpec) -> RenderedPrompt:
    return _renderer().render_refine(prev_impression, next_record, spec)
