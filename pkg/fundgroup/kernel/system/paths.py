import os
from typing import List


def get_resource_path(relative_path: str) -> str:
    """
    Absolute path of a file bundled under fundgroup/resources.
    """
    # this file is in fundgroup/kernel/system/paths.py
    base_path = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", "resources"))
    return os.path.join(base_path, relative_path)


def list_samples() -> List[str]:
    """Names of the bundled sample model and diagram files, sorted."""
    sample_dir = get_resource_path("samples")
    if not os.path.isdir(sample_dir):
        return []
    return sorted(name for name in os.listdir(sample_dir) if name.endswith((".alg", ".brt")))


def resolve_input_path(path: str) -> str:
    """
    Resolves a user path, falling back to the bundled samples for bare names like 'm2m3.alg'.
    """
    if os.path.exists(path):
        return os.path.abspath(path)
    candidate = get_resource_path(os.path.join("samples", os.path.basename(path)))
    if os.path.exists(candidate):
        return candidate
    return os.path.abspath(path)
