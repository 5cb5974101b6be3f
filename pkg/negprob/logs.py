"""
Structured logging for negprob
One JSON object per line, prefixed with a status marker and the entry kind:

    📥 SOLVE: {"timestamp": ..., "type": "solve", ...}
    ✓ SOLVE: {"timestamp": ..., "type": "solve", "latency_ms": 3, ...}

Entries go to stderr through the "negprob" logger so command reports stay clean.
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional

logger = logging.getLogger("negprob")


def configure(level: str = "WARNING") -> None:
    """Attach a handler for the current stderr to the negprob logger, replacing an earlier one"""
    for h in [h for h in logger.handlers if getattr(h, "_negprob", False)]:
        logger.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    handler._negprob = True
    logger.addHandler(handler)
    logger.setLevel(level.upper())


def _entry(kind: str, fields: Dict[str, Any]) -> Dict[str, Any]:
    entry = {
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "type": kind,
    }
    entry.update(fields)
    return entry


def log_event(kind: str, **fields: Any) -> None:
    """Log an incoming request (inputs of an operation)"""
    logger.info(f"📥 {kind.upper()}: {json.dumps(_entry(kind, fields), default=str)}")


def log_result(kind: str, latency_ms: int, error: Optional[str] = None, **fields: Any) -> None:
    """Log an operation outcome with its latency"""
    entry = _entry(kind, {"latency_ms": latency_ms, **fields})
    if error:
        entry["error"] = error
    status = "✗" if error else "✓"
    log = logger.warning if error else logger.info
    log(f"{status} {kind.upper()}: {json.dumps(entry, default=str)}")


@contextmanager
def timed(kind: str, **fields: Any) -> Iterator[Dict[str, Any]]:
    """Log start and outcome of a block; the yielded dict collects result fields"""
    log_event(kind, **fields)
    start_time = time.time()
    outcome: Dict[str, Any] = {}
    try:
        yield outcome
    except Exception as e:
        latency_ms = int((time.time() - start_time) * 1000)
        log_result(kind, latency_ms, error=f"{type(e).__name__}: {e}", **outcome)
        raise
    latency_ms = int((time.time() - start_time) * 1000)
    log_result(kind, latency_ms, **outcome)
