from pathlib import Path

import pytest

from wincert.model import parse_tournament

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str):
    return parse_tournament(FIXTURES.joinpath(name).read_text())


@pytest.fixture
def u4():
    """Unit-weight 4-candidate tournament: a>b, a>d, b>c, b>d, c>a, c>d."""
    return load_fixture("u4.trn").as_complete()


@pytest.fixture
def u4c():
    """u4 with the a/c pair flipped, making a a Condorcet winner."""
    t = load_fixture("u4.trn")
    matrix = [list(row) for row in t.weights]
    matrix[0][2], matrix[2][0] = 1, 0
    return t.replace_weights(matrix).as_complete()


@pytest.fixture
def w5a():
    """5-voter tournament where a has maximin score 3 and sweeps d."""
    return load_fixture("w5a.trn").as_complete()


@pytest.fixture
def w5b():
    """5-voter tournament with Borda scores 9, 8, 7, 6."""
    return load_fixture("w5b.trn").as_complete()
