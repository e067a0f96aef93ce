"""The shipped fixture workspace."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import yaml

from .config import Workspace

FIXTURE_FILE = "fixtures.yaml"


def fixture_document():
    text = resources.files("gradval").joinpath("data", FIXTURE_FILE).read_text()
    return yaml.safe_load(text)


@lru_cache(maxsize=1)
def fixtures():
    """The shipped workspace (built once per process)."""
    return Workspace([fixture_document()])


def workspace(docs=()):
    """Shipped fixtures merged with user documents."""
    return Workspace([fixture_document(), *docs])
