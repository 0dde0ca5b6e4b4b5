import pytest

from helpers import BURBACH, PAULY, entry_position
from selfmate import GadgetKind, parse_xfen


@pytest.fixture
def pauly():
    return parse_xfen(PAULY)


@pytest.fixture
def burbach():
    return parse_xfen(BURBACH)


@pytest.fixture
def selfmate_entry():
    return entry_position(GadgetKind.SELFMATE)
