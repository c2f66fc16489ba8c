"""Run manifests: enough provenance to reproduce any report byte-for-byte."""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

from . import __version__
from .unicode_catalog import UCD_VERSION

PathLike = Union[str, Path]


def sha256_file(path: PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """What ran, on which bytes, with which knobs.

    Re-running a command whose manifest matches (everything except
    wall_clock_s) must reproduce byte-identical outputs.
    """

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    seed: Optional[int] = None
    unicode_version: str = UCD_VERSION
    toolkit_version: str = __version__
    wall_clock_s: float = 0.0

    @classmethod
    def for_command(
        cls,
        command: str,
        input_paths: dict[str, PathLike],
        parameters: dict,
        seed: Optional[int] = None,
    ) -> "RunManifest":
        digests = {name: sha256_file(p) for name, p in sorted(input_paths.items())}
        return cls(command=command, inputs=digests, parameters=parameters, seed=seed)

    def to_dict(self) -> dict:
        return asdict(self)


def write_json_report(path: PathLike, report: dict, manifest: RunManifest) -> None:
    """Write {"manifest": ..., "report": ...} with stable key order."""
    payload = {"manifest": manifest.to_dict(), "report": report}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def write_sidecar_manifest(data_path: PathLike, manifest: RunManifest) -> Path:
    """Manifest for non-JSON outputs, written next to the data file."""
    side = Path(str(data_path) + ".manifest.json")
    with open(side, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    return side
