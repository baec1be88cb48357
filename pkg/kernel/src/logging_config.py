"""
Structured JSON logging configuration for the kernel CLI.

Each log record is emitted as a single JSON line on stderr containing
``timestamp``, ``level``, ``logger`` and ``message``, plus any fields
passed through ``extra=`` (``law``, ``cases``, ``failures``, ``seed``,
``steps``). Stdout stays reserved for command output.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-011)

TODO:
- None
"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import TextIO

UTC = timezone.utc  # datetime.UTC is 3.11+

# Attributes every LogRecord carries; anything else came in through extra=.
_RESERVED = frozenset(
    logging.LogRecord("", logging.INFO, "", 0, "", None, None).__dict__
) | {"message", "asctime"}


class JSONFormatter(logging.Formatter):
    """Logging formatter that outputs a single JSON object per line."""

    def format(self, record: logging.LogRecord) -> str:
        """Format *record* as a JSON string.

        Args:
            record: The log record to format.

        Returns:
            A single-line JSON string.
        """
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key, value in record.__dict__.items():
            if key not in _RESERVED and not key.startswith("_"):
                log_entry[key] = value
        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_entry, default=str, ensure_ascii=False)


def setup_logging(
    level: int | str = logging.WARNING, stream: TextIO | None = None
) -> None:
    """Configure the root logger with structured JSON output.

    Removes any existing handlers on the root logger and installs a
    single ``StreamHandler`` using :class:`JSONFormatter`.

    Args:
        level: Level for the root logger, as a number or a name.
        stream: Destination; defaults to ``sys.stderr``.
    """
    root = logging.getLogger()
    root.setLevel(level)

    for handler in root.handlers[:]:
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(JSONFormatter())
    root.addHandler(handler)
