"""Logging configuration for dmpfem."""

# this_file: src/dmpfem/utils/logging.py

import sys
from typing import Any

from loguru import logger

__all__ = ["format_record", "is_verbose", "logger", "setup_logging"]

LEVEL_TAGS = {
    "SUCCESS": ("[S]", "green"),
    "ERROR": ("[E]", "red"),
    "WARNING": ("[W]", "yellow"),
    "INFO": ("[I]", "white"),
    "DEBUG": ("[D]", "dim"),
}

_state = {"verbose": False}


def format_record(record: Any, verbose: bool = False) -> str:
    """Loguru template for one record: level tag, message, and the call site when verbose.

    The message stays a ``{message}`` field so braces in formatted tensors
    and meshes are not re-interpreted.
    """
    tag, color = LEVEL_TAGS.get(record["level"].name, ("[?]", "white"))
    line = f"<{color}>{tag}</{color}> <{color}>{{message}}</{color}>"
    if verbose:
        func = str(record["function"]).replace("<", r"\<").replace(">", r"\>")
        line += f" <dim>{record['name']}:{func}:{record['line']}</dim>"
    return line + "\n"


def setup_logging(verbose: bool = False) -> None:
    """Replace loguru's default sink with the tagged stderr sink.

    Also used as the initializer of sweep worker processes, so their
    per-case lines match the parent's.

    Args:
        verbose: DEBUG level with call sites instead of INFO.
    """
    _state["verbose"] = verbose
    logger.remove()
    logger.add(
        sys.stderr,
        level="DEBUG" if verbose else "INFO",
        format=lambda record: format_record(record, verbose),
    )


def is_verbose() -> bool:
    """Verbosity of the last :func:`setup_logging` call."""
    return _state["verbose"]
