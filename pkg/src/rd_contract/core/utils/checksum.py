import hashlib
from pathlib import Path
from typing import Any

from .serialization import canonical_json


def compute_config_hash(config_data: Any) -> str:
    """Compute SHA256 of the canonical JSON form of a config dump.

    Args:
        config_data: Output of ``model_dump(mode="json")`` or any JSON-compatible object

    Returns:
        Hexadecimal digest
    """
    return hashlib.sha256(canonical_json(config_data).encode("utf-8")).hexdigest()


def compute_file_checksum(file_path: str | Path) -> str:
    """Compute SHA256 hash of an output file.

    Args:
        file_path: Path to the file

    Returns:
        SHA256 hash of the file as a hexadecimal string

    Raises:
        FileNotFoundError: If the file does not exist
    """
    path = Path(file_path)

    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    return hashlib.sha256(path.read_bytes()).hexdigest()
