import pytest
from hypothesis import settings

from torusalg.lattice import canonical_subgroup, full_torus, trivial_subgroup

settings.register_profile("repo", deadline=None, max_examples=40)
settings.load_profile("repo")

ACCEPTANCE = {}


def record(label, ok, detail=""):
    ACCEPTANCE[label] = (bool(ok), detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: int(s[2:].split()[0])):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'}  {detail}")


def rank2_list():
    """trivial, Z/2 x 1, Z/6 diagonal, two circles, G."""
    return [
        trivial_subgroup(2),
        canonical_subgroup(2, [[2, 0], [0, 1]]),
        canonical_subgroup(2, [[1, -1], [0, 6]]),
        canonical_subgroup(2, [[1, 0]]),
        canonical_subgroup(2, [[0, 1]]),
        full_torus(2),
    ]


@pytest.fixture
def r2_subgroups():
    return rank2_list()
