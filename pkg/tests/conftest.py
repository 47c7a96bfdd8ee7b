import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cayleytm.groups import (GeneratorAlphabet, GroupBackend, TapeGraph, free_group,  # noqa: E402
                             grid, infinite_dihedral, integers)
from cayleytm.serialize import read_json, standard_from_dict  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def standard_machine(name: str):
    return standard_from_dict(read_json(FIXTURES / name))


TEST_GRAPHS = {"Z": integers, "Z2": grid, "F2": free_group, "Dinf": infinite_dihedral}


@pytest.fixture(params=sorted(TEST_GRAPHS))
def any_graph(request):
    return TEST_GRAPHS[request.param]()


@pytest.fixture
def z():
    return integers()


@pytest.fixture
def dihedral():
    return infinite_dihedral()


class IntegersTimesThree(GroupBackend):
    """Z x Z/3 with generators c, C (order 3) and t, T; elements are (n, k)."""

    kind = "z_times_z3"
    n_generators = 4
    steps = [(0, 1), (0, 2), (1, 0), (-1, 0)]

    def identity(self):
        return (0, 0)

    def multiply(self, element, generator):
        dn, dk = self.steps[generator]
        return element[0] + dn, (element[1] + dk) % 3


def torsion_product() -> TapeGraph:
    """A tape graph whose least generator has order 3, so tree growth must backtrack."""
    return TapeGraph(IntegersTimesThree(), GeneratorAlphabet(("c", "C", "t", "T"), (1, 0, 3, 2)),
                     name="ZxZ3")
