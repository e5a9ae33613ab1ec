__version__ = "Unknown-dev"

from pathlib import Path

# VERSION lives at the repository root in source checkouts
_version_file = Path(__file__).parent.parent / "VERSION"
if _version_file.exists():
    __version__ = _version_file.read_text().strip()
