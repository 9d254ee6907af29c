import json
from fractions import Fraction
from pathlib import Path

import pytest

from sepsos.scalars import GaussQ

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def parse_table(table):
    """Frozen ``{"u;v": "re,im"}`` -> ``{(u, v): GaussQ}``."""
    out = {}
    for key, val in table.items():
        u, v = key.split(";")
        re, im = val.split(",")
        out[(tuple(int(x) for x in u.split(",")), tuple(int(x) for x in v.split(",")))] = GaussQ(
            Fraction(re), Fraction(im))
    return out


def record_acceptance(line: str):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
