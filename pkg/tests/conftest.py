"""Shared fixtures: the running six-factor hierarchy, the golden model
files, and the generated corpus the property and acceptance suites share."""

from __future__ import annotations

from pathlib import Path

import pytest

from casebound.dsl import load_model
from casebound.hierarchy import Hierarchy
from casebound.oracle import random_model

DATA = Path(__file__).parent / "data"

STANDARD_LINKS = [
    ("f1", "p"),
    ("f2", "p"),
    ("f3", "p'"),
    ("f3", "q'"),
    ("p", "q"),
    ("p'", "q'"),
    ("q", "1"),
    ("f4", "r"),
    ("f5", "r'"),
    ("f6", "r'"),
    ("r'", "0"),
]

CORPUS_SIZE = 500


def golden_text(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def standard_hierarchy() -> Hierarchy:
    return Hierarchy.build(
        base=[f"f{i}" for i in range(1, 7)],
        intermediate=["p", "q", "r"],
        links=STANDARD_LINKS,
    )


@pytest.fixture(scope="session")
def base_model():
    """Two opposite-outcome precedents plus the query they constrain."""
    return load_model(golden_text("base_model.cb"))


@pytest.fixture(scope="session")
def opposed_model():
    """The smallest inconsistent case base: reasons ordered both ways."""
    return load_model(golden_text("opposed_precedents.cb"))


@pytest.fixture(scope="session")
def negligible_model():
    """Same-outcome precedents that split on one lower concern."""
    return load_model(golden_text("negligible_conflict.cb"))


@pytest.fixture(scope="session")
def court_model():
    """Three-court chain with a partial overruling and a per-incuriam ruling."""
    return load_model(golden_text("court_hierarchy.cb"))


@pytest.fixture(scope="session")
def corpus():
    """The generated models all property-style suites run over."""
    return [
        random_model(seed, with_courts=(seed % 4 == 0))
        for seed in range(CORPUS_SIZE)
    ]
