import os
import sys
from datetime import timedelta

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

settings.register_profile(
    "default", max_examples=25, deadline=timedelta(milliseconds=20000)
)
settings.load_profile("default")

from npk.checks import CATALOG  # noqa: E402
from npk.weil import build_algebra, parse_presentation  # noqa: E402


@pytest.fixture(scope="session")
def catalog():
    return [build_algebra(parse_presentation(text)) for text in CATALOG]


@pytest.fixture(scope="session")
def dual():
    return build_algebra(parse_presentation("R[x]/(x^2)"))


@pytest.fixture(scope="session")
def jet3():
    return build_algebra(parse_presentation("R[t]/(t^3)"))


@pytest.fixture(scope="session")
def plane_jet():
    return build_algebra(parse_presentation("R[x,y]/(x^2,x*y,y^2)"))
