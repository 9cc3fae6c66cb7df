"""Provenance header attached to every emitted report."""

import hashlib
from collections.abc import Iterable
from pathlib import Path

from pydantic import BaseModel, Field

from src import __version__
from src.core.config import Settings


class Provenance(BaseModel):
    """Input digests, config digest and tool version for one run."""

    tool_version: str = __version__
    config_digest: str
    inputs: dict[str, str] = Field(default_factory=dict)

    def comment_lines(self) -> list[str]:
        """Render as ``# key: value`` lines for the head of a CSV file."""
        lines = [
            f"# tool_version: {self.tool_version}",
            f"# config_digest: {self.config_digest}",
        ]
        lines.extend(f"# input {name}: {digest}" for name, digest in sorted(self.inputs.items()))
        return lines


def file_digest(path: Path) -> str:
    """SHA-256 of a file's bytes."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


def build_provenance(settings: Settings, paths: Iterable[Path]) -> Provenance:
    """Digest the given input files; keys are bare file names."""
    inputs = {path.name: file_digest(path) for path in sorted(paths) if path.is_file()}
    return Provenance(config_digest=settings.digest(), inputs=inputs)
