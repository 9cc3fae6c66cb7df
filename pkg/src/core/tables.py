"""Reading and writing the emitted CSV tables."""

from collections.abc import Sequence
from pathlib import Path

import pandas as pd


def write_table(frame: pd.DataFrame, path: Path, header_lines: Sequence[str] = ()) -> Path:
    """CSV with ``\\n`` endings, preceded by ``#`` comment lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = frame.to_csv(index=False, lineterminator="\n")
    prefix = "".join(f"{line}\n" for line in header_lines)
    path.write_text(prefix + body, encoding="utf-8")
    return path


def read_table(path: Path) -> pd.DataFrame:
    """Read an emitted table, skipping provenance comment lines."""
    return pd.read_csv(path, dtype=str, keep_default_na=False, comment="#", encoding="utf-8")
