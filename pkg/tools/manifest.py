"""
tools/manifest.py

The run manifest written next to an enhanced system: what went in (with
content digests), what ran, the verdicts and state counts, and what came out.
Multi-line values (serialized LTS text) are stored as YAML literal blocks so
the manifest stays line-oriented and diffable.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml

logger = logging.getLogger(__name__)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class _LiteralDumper(yaml.SafeDumper):
    pass


def _str_representer(dumper: yaml.SafeDumper, data: str):
    if "\n" in data:
        return dumper.represent_scalar("tag:yaml.org,2002:str", data, style="|")
    return dumper.represent_scalar("tag:yaml.org,2002:str", data)


_LiteralDumper.add_representer(str, _str_representer)


@dataclass
class RunManifest:
    inputs: Dict[str, str] = field(default_factory=dict)      # path -> sha256
    commands: List[str] = field(default_factory=list)
    verdicts: Dict[str, str] = field(default_factory=dict)
    metrics: Dict[str, int] = field(default_factory=dict)
    channel_maps: List[Dict[str, Any]] = field(default_factory=list)
    lts: Dict[str, str] = field(default_factory=dict)          # role -> serialized LTS
    outputs: Dict[str, str] = field(default_factory=dict)     # path relative to out dir -> sha256

    def add_input(self, path: Union[str, Path]) -> None:
        self.inputs[str(path)] = sha256_file(path)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inputs": dict(sorted(self.inputs.items())),
            "commands": list(self.commands),
            "verdicts": dict(self.verdicts),
            "metrics": dict(self.metrics),
            "channel_maps": list(self.channel_maps),
            "lts": dict(self.lts),
            "outputs": dict(sorted(self.outputs.items())),
        }

    def dump(self) -> str:
        return yaml.dump(self.to_dict(), Dumper=_LiteralDumper, sort_keys=False,
                         default_flow_style=False, allow_unicode=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            inputs=dict(data.get("inputs") or {}),
            commands=list(data.get("commands") or []),
            verdicts=dict(data.get("verdicts") or {}),
            metrics=dict(data.get("metrics") or {}),
            channel_maps=list(data.get("channel_maps") or []),
            lts=dict(data.get("lts") or {}),
            outputs=dict(data.get("outputs") or {}),
        )


def load_manifest(path: Union[str, Path]) -> RunManifest:
    with open(path, "r", encoding="utf-8") as f:
        return RunManifest.from_dict(yaml.safe_load(f) or {})


def verify_outputs(manifest: RunManifest, out_dir: Union[str, Path]) -> List[str]:
    """Problems with the listed outputs: missing files or digest mismatches."""
    out_dir = Path(out_dir)
    problems: List[str] = []
    for rel, digest in manifest.outputs.items():
        path = out_dir / rel
        if not path.is_file():
            problems.append(f"{rel}: missing")
        elif sha256_file(path) != digest:
            problems.append(f"{rel}: digest mismatch")
    for problem in problems:
        logger.warning(f"[Manifest] {problem}")
    return problems
