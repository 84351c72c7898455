"""Shared fixtures; puts scripts/ on sys.path for the flat module layout"""

import sys
from pathlib import Path

import pytest
from hypothesis import settings

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"
sys.path.insert(0, str(SCRIPTS))

from finite_field import make_field  # noqa: E402
from padic import LocalBase  # noqa: E402

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")


@pytest.fixture
def f27():
    return make_field(3, 3)


@pytest.fixture
def f81():
    return make_field(3, 4)


@pytest.fixture
def base7():
    return LocalBase(7, 1, prec=32, guard=8)


@pytest.fixture
def base3():
    return LocalBase(3, 1, prec=32, guard=8)


@pytest.fixture
def scripts_dir():
    return SCRIPTS
