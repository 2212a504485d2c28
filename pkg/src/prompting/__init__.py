from .renderer import (
    CHAT,
    COMPLETION,
    DEFAULT_MAXLEN,
    REFINE,
    STRUCTURED_FEW_SHOT,
    ZERO_SHOT,
    FewShotExample,
    PromptRenderer,
    PromptSpec,
    RenderedPrompt,
    load_shots,
    render_refine,
    render_structured,
    render_zero_shot,
)
from .templates import PromptTemplate, TemplateSet, default_templates, load_templates

__all__ = [
    "CHAT",
    "COMPLETION",
    "DEFAULT_MAXLEN",
    "REFINE",
    "STRUCTURED_FEW_SHOT",
    "ZERO_SHOT",
    "FewShotExample",
    "PromptRenderer",
    "PromptSpec",
    "PromptTemplate",
    "RenderedPrompt",
    "TemplateSet",
    "default_templates",
    "load_shots",
    "load_templates",
    "render_refine",
    "render_structured",
    "render_zero_shot",
]
