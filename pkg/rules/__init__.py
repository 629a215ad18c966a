"""
Catalog loader for the ECTFF certification engine.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from packaging.specifiers import SpecifierSet
from packaging.version import InvalidVersion, Version

from src.models.errors import CatalogError

logger = logging.getLogger(__name__)

DEFAULT_PATH = Path(__file__).parent / "rules.json"
SUPPORTED_SCHEMA = SpecifierSet(">=1.0,<2.0")


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as e:
        raise CatalogError(f"cannot read catalog {path}: {e}") from e


def catalog_hash(path: Optional[Path] = None) -> str:
    """SHA-256 of the catalog file bytes."""
    return hashlib.sha256(_read(Path(path or DEFAULT_PATH))).hexdigest()


def load_rules(path: Optional[Path] = None) -> Dict[str, Any]:
    """Load catalog rules and existence tables from rules.json (or an alternate file)."""
    path = Path(path or DEFAULT_PATH)
    raw = _read(path)
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CatalogError(f"catalog {path} is not valid JSON: {e}") from e

    version = data.get("schema_version")
    try:
        supported = version is not None and Version(str(version)) in SUPPORTED_SCHEMA
    except InvalidVersion:
        supported = False
    if not supported:
        raise CatalogError(f"catalog {path} has schema_version {version!r}, expected {SUPPORTED_SCHEMA}")
    for key in ("rules", "tables"):
        if key not in data:
            raise CatalogError(f"catalog {path} is missing the '{key}' section")

    data["content_hash"] = hashlib.sha256(raw).hexdigest()
    data["source"] = str(path)
    logger.info("loaded catalog %s version %s (sha256 %s)", path, data.get("catalog_version"),
                data["content_hash"][:12])
    return data
