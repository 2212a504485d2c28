"""
Configuration loader for the radiology impression RAG engine.
Provides centralized access to configuration values.

The config file is YAML (JSON is valid YAML, so JSON configs load too).
The LLM API key is never read from the file, only from the environment.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

import yaml

from .errors import ConfigError, InvalidConfig
from .eval.metrics import DEFAULT_THRESHOLD
from .generation import GenerationConfig

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config.yaml"

HTTP_CLIENT = "http"
CLIENT_KINDS = (HTTP_CLIENT, "echo", "concatenate", "extractive")

CONFIG_SECTIONS = ("paths", "generation", "llm", "evaluation", "sweep", "seed")

SIDECAR_KEYS = (
    "pred_report_embeddings",
    "ref_report_embeddings",
    "context_report_embeddings",
    "pred_token_embeddings",
    "ref_token_embeddings",
    "pred_entities",
    "ref_entities",
)


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file.

    Args:
        config_path: Path to the config file; when None the default
            config.yaml is used if present

    Returns:
        Dictionary containing configuration values
    """
    explicit = config_path is not None
    path = Path(config_path or DEFAULT_CONFIG_PATH)
    try:
        with open(path, encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except FileNotFoundError:
        if explicit:
            raise ConfigError(f"config file not found: {path}") from None
        logger.debug("no %s found, using defaults", path)
        return {}
    except yaml.YAMLError as e:
        raise ConfigError(f"error parsing config file {path}: {e}") from e
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return config


@dataclass(frozen=True)
class PathsConfig:
    corpus: Optional[str] = None
    embeddings: Optional[str] = None
    index: Optional[str] = None
    queries: Optional[str] = None
    templates: Optional[str] = None
    vocab: Optional[str] = None
    shots: Optional[str] = None
    output_dir: str = "out"


@dataclass(frozen=True)
class LlmConfig:
    client: str = HTTP_CLIENT
    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    max_in_flight: int = 4

    def __post_init__(self):
        if self.client not in CLIENT_KINDS:
            raise ConfigError(f"llm.client must be one of {CLIENT_KINDS}, got '{self.client}'")
        if self.max_attempts < 1:
            raise ConfigError("llm.max_attempts must be at least 1")
        if self.backoff_base < 0:
            raise ConfigError("llm.backoff_base cannot be negative")
        if self.max_in_flight < 1:
            raise ConfigError("llm.max_in_flight must be at least 1")


@dataclass(frozen=True)
class EvalConfig:
    threshold: float = DEFAULT_THRESHOLD
    workers: int = 1
    report_dim: int = 1024
    token_dim: int = 64
    sidecars: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        unknown = sorted(set(self.sidecars) - set(SIDECAR_KEYS))
        if unknown:
            raise ConfigError(f"unknown evaluation.sidecars keys: {unknown}")


@dataclass(frozen=True)
class SweepConfig:
    k_values: Tuple[int, ...] = (1, 2, 3)
    temperatures: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        k_values = tuple(self.k_values)
        temperatures = tuple(self.temperatures)
        if not k_values or any(
            isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in k_values
        ):
            raise ConfigError(f"sweep.k_values must be positive integers, got {list(k_values)}")
        if not temperatures or any(
            isinstance(t, bool) or not isinstance(t, (int, float)) or t < 0 for t in temperatures
        ):
            raise ConfigError(
                f"sweep.temperatures must be non-negative numbers, got {list(temperatures)}"
            )
        object.__setattr__(self, "k_values", k_values)
        object.__setattr__(self, "temperatures", tuple(float(t) for t in temperatures))


def _section(cls, data: Any, name: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"config section '{name}' must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {unknown}")
    try:
        return cls(**data)
    except (TypeError, InvalidConfig) as e:
        raise ConfigError(f"invalid '{name}' section: {e}") from e


@dataclass(frozen=True)
class RunConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    llm: LlmConfig = field(default_factory=LlmConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    seed: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        unknown = sorted(set(data) - set(CONFIG_SECTIONS))
        if unknown:
            raise ConfigError(f"unknown top-level config keys: {unknown}")
        seed = data.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError(f"seed must be an integer, got {seed!r}")
        return cls(
            paths=_section(PathsConfig, data.get("paths"), "paths"),
            generation=_section(GenerationConfig, data.get("generation"), "generation"),
            llm=_section(LlmConfig, data.get("llm"), "llm"),
            evaluation=_section(EvalConfig, data.get("evaluation"), "evaluation"),
            sweep=_section(SweepConfig, data.get("sweep"), "sweep"),
            seed=seed,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "paths": asdict(self.paths),
            "generation": self.generation.to_dict(),
            "llm": asdict(self.llm),
            "evaluation": asdict(self.evaluation),
            "sweep": {
                "k_values": list(self.sweep.k_values),
                "temperatures": list(self.sweep.temperatures),
            },
            "seed": self.seed,
        }

    def with_overrides(self, section: str, **values: Any) -> "RunConfig":
        """Copy with non-None values replaced in one section."""
        values = {k: v for k, v in values.items() if v is not None}
        if not values:
            return self
        try:
            updated = replace(getattr(self, section), **values)
        except (TypeError, InvalidConfig) as e:
            raise ConfigError(f"invalid '{section}' override: {e}") from e
        return replace(self, **{section: updated})

    def validate(self, required: Iterable[str] = ()) -> None:
        """
        Check that referenced paths exist.

        Args:
            required: Path fields that must be set for the current command
        """
        for name in required:
            if getattr(self.paths, name) is None:
                raise ConfigError(f"paths.{name} is required for this command")
        for name in ("corpus", "embeddings", "index", "queries", "templates", "vocab", "shots"):
            value = getattr(self.paths, name)
            if value is not None and not Path(value).exists():
                raise ConfigError(f"paths.{name} does not exist: {value}")
        for key, value in self.evaluation.sidecars.items():
            if not Path(value).exists():
                raise ConfigError(f"evaluation.sidecars.{key} does not exist: {value}")


def get_run_config(config: Dict[str, Any]) -> RunConfig:
    return RunConfig.from_dict(config)


def get_api_key(llm: LlmConfig) -> Optional[str]:
    """
    Get the LLM API key from the environment.

    Args:
        llm: LLM endpoint settings naming the environment variable

    Returns:
        API key or None if the variable is unset
    """
    value = os.environ.get(llm.api_key_env, "").strip()
    return value or None
