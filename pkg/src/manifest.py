"""Run manifests and diff-stable JSON output"""

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .config import RunConfig
from .prompting import TemplateSet

PathLike = Union[str, Path]


def stable_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def config_hash(config: RunConfig) -> str:
    """sha256 over the canonical JSON form of the config."""
    return hashlib.sha256(stable_json(config.to_dict()).encode("utf-8")).hexdigest()


def write_json(path: PathLike, data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path


def write_jsonl(path: PathLike, rows: Iterable[Dict[str, Any]]) -> Path:
    """One sorted-key JSON object per line, "\\n" line endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(stable_json(row) + "\n")
    return path


def build_manifest(
    command: str,
    config: RunConfig,
    templates: TemplateSet,
    provenance: Optional[Dict[str, List[int]]] = None,
    failures: Optional[Dict[str, str]] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Describe a run: what was configured, which template versions rendered
    the prompts and which records fed each output.

    The timestamp lives here and nowhere else so data files stay diff-stable.
    """
    manifest = {
        "command": command,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "template_versions": templates.versions(),
        "provenance": provenance or {},
        "failures": failures or {},
    }
    if extra:
        manifest.update(extra)
    return manifest
