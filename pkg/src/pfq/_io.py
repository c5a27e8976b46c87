"""Small input helpers shared by the loaders."""
from __future__ import annotations

import json
from pathlib import Path


def is_file(source) -> bool:
    """True when ``source`` names an existing file; inline text never does."""
    if isinstance(source, Path):
        return source.is_file()
    if not isinstance(source, str) or source.lstrip().startswith(("{", "[")):
        return False
    try:
        return Path(source).is_file()
    except OSError:  # e.g. a long inline polynomial
        return False


def load_json_source(source) -> dict:
    """Accept a dict, a path to a JSON file, or JSON text."""
    if isinstance(source, dict):
        return source
    if is_file(source):
        return json.loads(Path(source).read_text())
    return json.loads(source)
