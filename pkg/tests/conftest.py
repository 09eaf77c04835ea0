from pathlib import Path

import numpy as np
import pytest

from wordbox.config import package_dir
from wordbox.resources import load_font_pool, load_resources

DATA = package_dir() / "data"
FONT_DIR = DATA / "fonts"

_acceptance_results = []


@pytest.fixture(scope="session")
def resources():
    return load_resources(DATA / "lexicon.txt", FONT_DIR, DATA / "textures", DATA / "colormap.txt",
                          case_augment=True)


@pytest.fixture(scope="session")
def font_pool():
    return load_font_pool(FONT_DIR)


@pytest.fixture(scope="session")
def sans(font_pool):
    return next(f for f in font_pool.fonts if Path(f.path).name == "DejaVuSans.ttf")


@pytest.fixture(scope="session")
def mono(font_pool):
    return next(f for f in font_pool.fonts if Path(f.path).name == "DejaVuSansMono.ttf")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        _acceptance_results.append((marker, report.outcome))


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("acceptance")
    if mark:
        item.user_properties.append(("acceptance", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
