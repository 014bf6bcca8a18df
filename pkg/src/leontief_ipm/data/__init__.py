"""Bundled economy files usable with the CLI and the test suite."""

from importlib import resources
from pathlib import Path


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled model file, e.g. 'leontief_generalized.json'."""
    candidate = resources.files(__package__).joinpath(name)
    path = Path(str(candidate))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r}")
    return path
