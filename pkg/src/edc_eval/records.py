"""Run manifests and deterministic JSON output records."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict[str, Any] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__

    def add_input(self, role: str, path: str | Path) -> None:
        self.inputs[role] = f"{path} {file_digest(path)}"

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "toolkit_version": self.version,
            "seed": self.seed,
            "inputs": dict(sorted(self.inputs.items())),
            "config": self.config,
        }


def _clean(obj):
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalar
        return _clean(obj.item())
    return obj


def dumps(record: dict) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(_clean(record), indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def write_record(path: str | Path, manifest: RunManifest, body: dict) -> None:
    record = {"manifest": manifest.to_dict()}
    record.update(body)
    Path(path).write_text(dumps(record), encoding="utf-8")


def read_record(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
