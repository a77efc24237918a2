import logging
import os
import sys

_setup_done = False

LOG_LEVEL_ENV = "GREEDYBASES_LOG_LEVEL"


def setup_logging(level: str | None = None):
    global _setup_done
    if _setup_done:
        return

    # Leave an embedding application's handlers alone.
    if logging.root.handlers:
        return

    level_name = (level or os.environ.get(LOG_LEVEL_ENV) or "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    _setup_done = True


def get_logger(name: str):
    # Library modules never configure logging themselves; cli.main does.
    return logging.getLogger(name)
