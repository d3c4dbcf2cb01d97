import os
import logging
from dotenv import load_dotenv

load_dotenv()

DEFAULT_FREQUENCY_CAP = 4096


def frequency_cap() -> int:
    """Hard cap on |frequency| for CircleFn and series products."""
    raw = os.getenv("ANZAI_FREQUENCY_CAP", str(DEFAULT_FREQUENCY_CAP))
    try:
        cap = int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            f"Ignoring non-integer ANZAI_FREQUENCY_CAP={raw!r}"
        )
        return DEFAULT_FREQUENCY_CAP
    return max(cap, 1)


def thread_count() -> int:
    """Worker cap for grid and sample parallelism (1 means sequential)."""
    raw = os.getenv("ANZAI_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def audit_log_path() -> str:
    return os.getenv("ANZAI_AUDIT_LOG", "audit.log")


def log_level() -> str:
    return os.getenv("ANZAI_LOG_LEVEL", "INFO").upper()
