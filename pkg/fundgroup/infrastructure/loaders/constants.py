from typing import Set

MODEL_EXTENSIONS: Set[str] = {
    ".alg",
}

BRATTELI_EXTENSIONS: Set[str] = {
    ".brt",
}

COMMENT_PREFIX = "#"
