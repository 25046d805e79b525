"""CSV / JSON writers for :class:`RunRecord`.

CSV layout: ``#`` comment lines (tool, scenario, config hash, timestamp,
warnings), then the header row and the data rows.  Everything after the
comments is the data section and is byte-stable for a given config.
"""

import csv
import io
import json
import math


def _fmt(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def to_csv(record):
    buf = io.StringIO()
    buf.write(f"# vacspp {record.version}\n")
    buf.write(f"# scenario: {record.scenario}\n")
    buf.write(f"# config_hash: {record.config_hash}\n")
    buf.write(f"# timestamp: {record.timestamp}\n")
    for msg in record.warnings:
        buf.write("# warning: " + msg.replace("\n", " ") + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record.columns)
    for row in record.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def to_json(record):
    """JSON mirror of the CSV; floats use Python's exact round-trip repr."""
    doc = {
        "tool": "vacspp",
        "version": record.version,
        "scenario": record.scenario,
        "config_hash": record.config_hash,
        "timestamp": record.timestamp,
        "warnings": list(record.warnings),
        "summary": record.summary,
        "columns": list(record.columns),
        "rows": [list(r) for r in record.rows],
    }
    return json.dumps(doc, indent=1) + "\n"


def data_section(text, fmt):
    """Strip run metadata so two outputs can be compared byte for byte."""
    if fmt == "csv":
        return "".join(line for line in text.splitlines(True) if not line.startswith("#"))
    doc = json.loads(text)
    return json.dumps({"columns": doc["columns"], "rows": doc["rows"]})


def emit(record, fmt="csv", path=None):
    """Render ``record`` and write it to ``path`` (returns the text).

    Raises
    ------
    OSError
        With the offending path, if the file cannot be written.
    """
    text = to_csv(record) if fmt == "csv" else to_json(record)
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write output: {exc.strerror}", str(path)) from exc
    return text
