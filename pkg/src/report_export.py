# src/report_export.py

"""
Report sink: validates a report payload against REPORT_SCHEMA and writes it as
JSON or CSV, atomically, to a file or to stdout.
"""

import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd
from filelock import FileLock, Timeout
from jsonschema import ValidationError, validate


class ReportExportError(Exception):
    """Custom exception for report export errors."""

    pass


ROW_SCHEMA = {
    "type": "object",
    "required": [
        "suite",
        "case",
        "observed",
        "expected",
        "deviation",
        "tolerance",
        "stderr",
        "passed",
    ],
    "properties": {
        "suite": {"type": "string"},
        "case": {"type": "string"},
        "observed": {"type": "number"},
        "expected": {"type": "number"},
        "deviation": {"type": "number"},
        "tolerance": {"type": "number", "minimum": 0},
        "stderr": {"type": "number", "minimum": 0},
        "passed": {"type": "boolean"},
        "strict_passed": {"type": "boolean"},
        "method": {"type": "string"},
        "samples": {"type": "integer", "minimum": 0},
        "details": {"type": "object"},
    },
}

INTEGER_COLUMNS = {
    name for name, spec in ROW_SCHEMA["properties"].items() if spec["type"] == "integer"
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["version", "config", "rows", "summary"],
    "properties": {
        "version": {"type": "string"},
        "config": {"type": "object", "required": ["subcommand", "n", "seed"]},
        "rows": {"type": "array", "items": ROW_SCHEMA},
        "summary": {
            "type": "object",
            "required": ["pass"],
            "properties": {
                "pass": {"type": "boolean"},
                "c_hat": {"type": "number"},
                "defect_max": {"type": "number"},
            },
        },
        "runtime": {
            "type": "object",
            "properties": {"duration_seconds": {"type": "number", "minimum": 0}},
        },
    },
}

LOCK_TIMEOUT = 10


class ReportExporter:
    """Serializes reports; the same payload always produces the same bytes."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def validate(self, payload: Dict[str, Any]) -> None:
        try:
            validate(instance=payload, schema=REPORT_SCHEMA)
        except ValidationError as exc:
            self.logger.error("Report does not match the schema: %s", exc.message)
            raise ReportExportError(f"Invalid report: {exc.message}") from exc

    def render(self, payload: Dict[str, Any], fmt: str) -> str:
        """Report text, UTF-8 and newline-terminated."""
        if fmt == "json":
            try:
                return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
            except ValueError as exc:
                raise ReportExportError("Report contains non-finite numbers.") from exc
        if fmt == "csv":
            frame = pd.json_normalize(payload["rows"])
            for column in INTEGER_COLUMNS.intersection(frame.columns):
                frame[column] = frame[column].astype("Int64")
            buffer = io.StringIO()
            frame.to_csv(buffer, index=False, lineterminator="\n")
            return buffer.getvalue()
        raise ReportExportError(f"Unknown report format: {fmt}")

    def write(self, payload: Dict[str, Any], path: Optional[Path], fmt: str = "json") -> None:
        """Validates and writes the report; without a path it goes to stdout."""
        self.validate(payload)
        text = self.render(payload, fmt)
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        path = Path(path)
        if not path.parent.is_dir():
            raise ReportExportError(f"Output directory does not exist: {path.parent}")
        lock = FileLock(f"{path}.lock")
        temp_name = None
        try:
            with lock.acquire(timeout=LOCK_TIMEOUT):
                with tempfile.NamedTemporaryFile(
                    "w",
                    encoding="utf-8",
                    newline="",
                    dir=path.parent,
                    prefix=f".{path.name}.",
                    delete=False,
                ) as handle:
                    temp_name = handle.name
                    handle.write(text)
                os.replace(temp_name, path)
        except Timeout as exc:
            self.logger.error("Could not acquire lock on %s.", path)
            raise ReportExportError(f"Failed to acquire lock on {path}.") from exc
        except OSError as exc:
            self.logger.error("Failed to write report to %s: %s", path, exc)
            if temp_name and os.path.exists(temp_name):
                os.unlink(temp_name)
            raise ReportExportError(f"Cannot write report to {path}: {exc}") from exc
        self.logger.info("Report written to %s (%s).", path, fmt)
