"""Utility functions for dmpfem."""

from dmpfem.utils.logging import logger, setup_logging
from dmpfem.utils.paths import prepare_output_path, read_text, write_text

__all__ = [
    "logger",
    "prepare_output_path",
    "read_text",
    "setup_logging",
    "write_text",
]
