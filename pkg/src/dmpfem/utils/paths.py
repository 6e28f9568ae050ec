"""File system utilities. Validates and prepares output paths for generated artifacts."""

from pathlib import Path

from pathvalidate import ValidationError as PathValidationError
from pathvalidate import validate_filepath

from dmpfem.api.exceptions import UsageError, ValidationError
from dmpfem.utils.logging import logger


def prepare_output_path(path: str | Path) -> Path:
    """Validate an output path and create its parent directory.

    Args:
        path: Destination file requested on the command line.

    Returns:
        The path as a Path object, ready to be written.

    Raises:
        UsageError: If the path is not a valid file path on this platform.
    """
    try:
        validate_filepath(str(path), platform="auto")
    except PathValidationError as e:
        raise UsageError(f"Invalid output path '{path}': {e}", {"path": str(path)}) from e

    out = Path(path)
    if not out.parent.exists():
        logger.info(f"Creating output directory {out.parent}")
        out.parent.mkdir(parents=True, exist_ok=True)
    return out


def write_text(path: str | Path, text: str) -> Path:
    """Write UTF-8 text to a validated output path."""
    out = prepare_output_path(path)
    out.write_text(text, encoding="utf-8")
    logger.debug(f"Wrote {len(text)} characters to {out}")
    return out


def read_text(path: str | Path) -> str:
    """Read a UTF-8 input file.

    Raises:
        ValidationError: If the file does not exist.
    """
    src = Path(path)
    if not src.exists():
        raise ValidationError("input", str(src), "file not found")
    return src.read_text(encoding="utf-8")
