"""Versioned prompt templates."""

from functools import lru_cache
from importlib import resources

PROMPT_VERSION = "1"


@lru_cache(maxsize=None)
def load(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.txt").read_text(encoding="utf-8")
