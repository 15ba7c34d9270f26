import pytest

from symtile.group import GroupContext, Subset
from symtile.oracle import exhaustive_tables


@pytest.fixture(scope="session")
def z4():
    return GroupContext(2, 2)


@pytest.fixture(scope="session")
def z9():
    return GroupContext(3, 2)


@pytest.fixture(scope="session")
def p2_tables(z4):
    """Tile/spectral status of all 65,536 subsets of Z_4 x Z_4 (built once)."""
    return exhaustive_tables(z4)


def pts(ctx, *elements):
    return Subset.from_elements(ctx, elements)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
