import pytest
from hypothesis import strategies as st

from mers.lattice import make

MODULI = (1, 2, 4, 8)

ACCEPTANCE_LINES: list[str] = []


@st.composite
def residue_sets(draw, moduli=MODULI, nonempty=False):
    ma = draw(st.sampled_from(moduli))
    mb = draw(st.sampled_from(moduli))
    cells = [(x, y) for x in range(ma) for y in range(mb)]
    chosen = draw(st.lists(st.sampled_from(cells), min_size=1 if nonempty else 0, unique=True))
    return make((ma, mb), chosen)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def catalogs():
    from mers.catalog import catalog

    return {r: catalog(r) for r in (1, 2, 3)}
