"""CSV/JSON artifacts: atomic writes, a version header line, and readers."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

BUILD_ID = f"gasket-walk {__version__}"


def header_line(command: str, params: dict) -> str:
    args = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# {BUILD_ID} {command} {args}".rstrip() + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(command: str, params: dict, columns: Sequence[str],
             rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(header_line(command, params))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def json_text(doc: dict) -> str:
    out = {"generator": BUILD_ID}
    out.update(doc)
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


def read_csv(path_or_text: str | os.PathLike, text: bool = False) -> tuple[list[str], list[dict]]:
    """Columns and rows of an artifact CSV; '#' header lines are skipped."""
    if text:
        content = str(path_or_text)
    else:
        content = Path(path_or_text).read_text(encoding="utf-8")
    lines = [ln for ln in content.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    rows = list(reader)
    return list(reader.fieldnames or []), rows


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)
