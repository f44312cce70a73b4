from pathlib import Path

import numpy as np
import pytest

from shockgrid import engine
from shockgrid.aggregation import ValueAddedTable, WageTable
from shockgrid.taxonomy import EssentialList, build_concordance, parse_code

FIXTURES = Path(__file__).parent / "fixtures"
ACCEPTANCE_LINES: list[str] = []
T1_DIR = FIXTURES / "t1"


def naics(raw):
    return parse_code("NAICS", raw)


def soc(raw):
    return parse_code("SOC", raw)


class Toy:
    """Toy economy T1 built directly from domain objects (no file I/O).

    n1 = 3251 links fine codes {325120: essential, 325130: not};
    n2 = 6211 links {621111, 621210}, both essential.
    Employment M = [[10, 0, 30], [0, 20, 20]] over occupations
    (172041, 132041, 472011) in that order; v = (1, 0, 1, 0).
    """

    def __init__(self):
        self.industries = (naics("3251"), naics("6211"))
        self.fine = tuple(naics(c) for c in ("325120", "325130", "621111", "621210"))
        self.S = build_concordance(self.industries, self.fine, [
            (self.industries[0], self.fine[0]), (self.industries[0], self.fine[1]),
            (self.industries[1], self.fine[2]), (self.industries[1], self.fine[3]),
        ])
        self.essential = EssentialList(tuple(zip(self.fine, (1, 0, 1, 1))))
        self.occupations = (soc("17-2041"), soc("13-2041"), soc("47-2011"))
        self.M = engine.EmploymentMatrix(self.industries, self.occupations,
                                         np.array([[10.0, 0.0, 30.0], [0.0, 20.0, 20.0]]))
        self.activities = ("a1", "a2", "a3", "a4")
        self.T = engine.ActivityMap(self.occupations, self.activities, np.array([
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
        ]))
        self.ratings = np.array([[1, 1, 1, 0], [1, 1, 0, 0], [1, 1, 1, 1], [0, 0, 0, 0]])
        self.v = engine.rate_consensus(self.ratings, 3, self.activities)
        self.wages = WageTable(self.occupations, np.array([10.0, 20.0, 50.0]),
                               np.array([40.0, 60.0, 20.0]), np.array([38.0, 55.0, 19.0]))
        self.va = ValueAddedTable(self.industries, np.array([400.0, 600.0]))
        self.scenario = {"32": -0.10, "62": 0.15}


@pytest.fixture
def toy():
    return Toy()


@pytest.fixture
def t1_dir():
    return T1_DIR


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: l.split("criterion ")[1]):
            terminalreporter.write_line(line)
