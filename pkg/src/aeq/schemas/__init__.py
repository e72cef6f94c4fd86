"""Bundled JSON schemas for the wire formats the CLI emits."""
from __future__ import annotations

import json
from importlib import resources

_NAMES = (
    "run_report",
    "pointset",
    "certificate",
    "verify",
    "bound_report",
    "search_result",
    "tdrank",
    "weyl",
    "perron",
    "gershgorin",
)


def schema_names() -> tuple:
    return _NAMES


def load_schema(name: str) -> dict:
    """Return the parsed schema dict for one of the bundled names."""
    if name not in _NAMES:
        raise ValueError(f"unknown schema {name!r}; have {', '.join(_NAMES)}")
    path = resources.files(__package__).joinpath(f"{name}.schema.json")
    return json.loads(path.read_text())
