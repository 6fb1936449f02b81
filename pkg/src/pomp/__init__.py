"""Partial-order planning for multiple agents with interacting actions."""
from __future__ import annotations

from importlib import resources

__version__ = "0.1.0"


def corpus_path(name: str) -> str:
    """Filesystem path of a file shipped in the example corpus."""
    return str(resources.files("pomp.corpus").joinpath(name))
