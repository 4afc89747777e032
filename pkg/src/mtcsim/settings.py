"""
Environment configuration.

Values come from the process environment (a .env file is loaded by the
CLI at start-up).
"""

import logging
import os
from pathlib import Path

DEFAULT_THREADS = 1
DEFAULT_LOG_LEVEL = "INFO"


def get_thread_limit() -> int:
    """Worker threads for concurrent solves (MTCSIM_THREADS, default 1)."""
    try:
        threads = int(os.getenv("MTCSIM_THREADS") or DEFAULT_THREADS)
    except ValueError:
        return DEFAULT_THREADS
    return max(1, threads)


def get_runs_dir(out_dir: str | Path) -> Path:
    """Run-record directory (MTCSIM_RUNS_DIR, default <out_dir>/runs), created if needed."""
    runs_dir = Path(os.getenv("MTCSIM_RUNS_DIR") or Path(out_dir) / "runs")
    runs_dir.mkdir(parents=True, exist_ok=True)
    return runs_dir


def get_log_level() -> int:
    name = (os.getenv("MTCSIM_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO
