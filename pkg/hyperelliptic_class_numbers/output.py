"""
Table rendering, per-curve record streams and run manifests for the CLI.

Tables are lists of string rows so the bytes written depend only on the
computed values; floats are formatted by the callers with 17 significant
digits.
"""

import csv
import hashlib
import io
import json
import logging
from pathlib import Path
from typing import IO, Optional, Sequence

from .models.base import OutputFormat
from .models.curves import CurveRecord
from .models.reports import RunManifest

logger = logging.getLogger(__name__)


def fmt_float(value: float) -> str:
    return format(value, ".17g")


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]],
                 fmt: OutputFormat = OutputFormat.CSV) -> str:
    """CSV with a header row, or a JSON list of objects keyed by the header."""
    if OutputFormat(fmt) == OutputFormat.JSON:
        payload = [dict(zip(header, row)) for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def read_table(path: Path) -> list[dict[str, str]]:
    """Rows of a table written by render_table, in either format."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        return [{k: str(v) for k, v in row.items()} for row in json.loads(text)]
    return list(csv.DictReader(io.StringIO(text)))


def checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def emit(text: str, out: Optional[Path], stream: IO[str]) -> str:
    """Write to --out (or the stream) and return the sha256 of the bytes."""
    if out is None:
        stream.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
    return checksum(text)


def manifest_path(out: Path) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def write_manifest(manifest: RunManifest, out: Optional[Path]) -> None:
    """<out>.manifest.json next to the output, or an INFO log line without --out."""
    body = manifest.model_dump_json(indent=2)
    if out is None:
        logger.info("run manifest: %s", body)
        return
    manifest_path(out).write_text(body + "\n", encoding="utf-8")


class RecordWriter:
    """Streams CurveRecords to a CSV file in the order they are received."""

    def __init__(self, path: Path, g: int):
        self.path = Path(path)
        self._handle = self.path.open("w", encoding="utf-8", newline="")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(CurveRecord.csv_header(g))
        self.count = 0

    def __call__(self, record: CurveRecord) -> None:
        self._writer.writerow(record.csv_row())
        self.count += 1

    def close(self) -> None:
        self._handle.close()

    def __enter__(self) -> "RecordWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_records(path: Path) -> list[CurveRecord]:
    """CurveRecords back from a records CSV."""
    records = []
    for row in read_table(path):
        g = int(row["g"])
        records.append(CurveRecord(
            q=int(row["q"]),
            d=int(row["d"]),
            g=g,
            f_coeffs=tuple(int(c) for c in row["F"].split(",")),
            class_number=int(row["class_number"]),
            n_f=float(row["n_f"]),
            power_sums=tuple(int(row[f"s_{n}"]) for n in range(1, g + 1)),
        ))
    return records
