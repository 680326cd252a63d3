from typing import Optional

import pytest
from hypothesis import strategies as st

from src.finite_field import make_field
from src.groups import GroupDescriptor, materialize
from src.permutation import Permutation
from src.settings import get_settings


@st.composite
def perms(draw, min_n: int = 1, max_n: int = 10, n: Optional[int] = None):
    size = n if n is not None else draw(st.integers(min_value=min_n, max_value=max_n))
    return Permutation(draw(st.permutations(list(range(size)))))


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def gf4():
    return make_field(2, 2)


@pytest.fixture
def gf8():
    return make_field(2, 3)


@pytest.fixture
def agl8():
    return materialize(GroupDescriptor.agl1(8))
