from __future__ import annotations

from typing import Optional, Sequence

try:
    from .logger import get_logger
    from . import db
except ImportError:  # pragma: no cover
    from logger import get_logger  # type: ignore
    import db  # type: ignore

logger = get_logger("greedybases.storage")


def record_run(
    space: str,
    suite: str,
    seed: int,
    reports: Sequence,
    report_text: str,
    corpus_size: Optional[int] = None,
) -> Optional[int]:
    """
    Persist a verify run to the DB. Best-effort with logging.
    Returns the new record ID or None on failure.
    """
    violations = sum(r.violation_count for r in reports)
    try:
        return db.add_run(
            space=space,
            suite=suite,
            seed=seed,
            status="fail" if violations else "pass",
            violations=violations,
            report=report_text,
            corpus_size=corpus_size,
        )
    except Exception as e:
        logger.error(f"Failed to record run to DB: {e}")
        return None
