"""File handling utilities."""

import hashlib
from pathlib import Path


def ensure_dir(path: Path) -> Path:
    """Ensure a directory exists, creating it if necessary.

    Args:
        path: Directory path to ensure exists

    Returns:
        The path (for chaining)
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def file_digest(path: Path, chunk_size: int = 1 << 16) -> str:
    """Compute the sha256 hex digest of a file.

    Args:
        path: File to hash
        chunk_size: Read block size in bytes

    Returns:
        Hex digest string
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(chunk_size), b""):
            digest.update(block)
    return digest.hexdigest()
