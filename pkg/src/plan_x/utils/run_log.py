from __future__ import annotations

import datetime as _dt
import logging
from pathlib import Path


_ROOT_LOGGER = "plan_x"


class _UtcFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        timestamp = _dt.datetime.fromtimestamp(record.created, _dt.timezone.utc)
        stamp = timestamp.replace(tzinfo=None).isoformat() + "Z"
        return f"[{stamp}] {record.getMessage()}"


def attach_run_log(run_log_path: Path) -> logging.Handler:
    """Mirror every plan_x log record into ``run_log_path``."""
    run_log_path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(run_log_path, mode="a", encoding="utf-8")
    handler.setFormatter(_UtcFormatter())
    handler.setLevel(logging.INFO)
    logger = logging.getLogger(_ROOT_LOGGER)
    logger.addHandler(handler)
    if logger.level == logging.NOTSET or logger.level > logging.INFO:
        logger.setLevel(logging.INFO)
    return handler


def detach_run_log(handler: logging.Handler) -> None:
    logger = logging.getLogger(_ROOT_LOGGER)
    logger.removeHandler(handler)
    handler.close()
