import importlib.resources
import pathlib

import pytest

from sqzbudget.scenario_io import parse_scenario

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def bundled_scenario_path(name):
    return str(importlib.resources.files("sqzbudget") / "scenarios" / f"{name}.scn")


def load_bundled(name):
    path = importlib.resources.files("sqzbudget") / "scenarios" / f"{name}.scn"
    return parse_scenario(path.read_text(encoding="utf-8"), name=name)


@pytest.fixture(scope="session")
def tabletop():
    return load_bundled("tabletop")


@pytest.fixture(scope="session")
def geo600():
    return load_bundled("geo600")


@pytest.fixture(scope="session")
def vacuum_scenario():
    return load_bundled("vacuum")


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN_DIR
