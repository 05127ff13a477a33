# src/utils/config.py

import os
import sys
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Iterable, Optional

from dotenv import load_dotenv
from tqdm import tqdm

# Load environment variables from .env file
load_dotenv()


class Config:
    # Artifact version, embedded in every report
    VERSION = "0.1.0"

    # Logging
    LOG_FILE = os.getenv("MEASURED_WALLS_LOG_FILE")  # unset -> stderr
    LOG_LEVEL = os.getenv("MEASURED_WALLS_LOG_LEVEL", "INFO").upper()

    # Execution (never affects numerical results)
    WORKERS = int(os.getenv("MEASURED_WALLS_WORKERS", "1"))
    PROGRESS = os.getenv("MEASURED_WALLS_PROGRESS", "False").lower() in (
        "true",
        "1",
        "t",
    )


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configures the root logger once for a CLI run.

    Logs go to stderr unless a log file is configured, in which case a rotating
    file handler is used. Reports are written separately, so logging never
    touches stdout.
    """
    level_name = (level or Config.LOG_LEVEL).upper()
    target = log_file or Config.LOG_FILE

    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = RotatingFileHandler(
            target, maxBytes=5 * 1024 * 1024, backupCount=5
        )
    else:
        handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level_name, logging.INFO))


def progress_bar(items: Iterable, desc: str, enabled: Optional[bool] = None):
    """tqdm on stderr, shown only when progress is enabled (Config.PROGRESS by default)."""
    enabled = Config.PROGRESS if enabled is None else enabled
    return tqdm(items, desc=desc, disable=not enabled, file=sys.stderr, leave=False)
