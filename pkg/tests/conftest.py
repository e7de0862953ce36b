import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from flagcode.flags import UpperTriangular, packed_size
from flagcode.gf import FieldSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(2, 2), FieldSpec(2, 3), FieldSpec(3, 2)]


@st.composite
def fields(draw):
    return draw(st.sampled_from(SMALL_FIELDS))


@st.composite
def upper_triangular(draw, spec, n):
    entries = draw(st.lists(st.integers(0, spec.q - 1), min_size=packed_size(n), max_size=packed_size(n)))
    return UpperTriangular(spec, n, tuple(entries))


@st.composite
def field_and_pair(draw, max_n=4):
    spec = draw(fields())
    n = draw(st.integers(1, max_n))
    return spec, n, draw(upper_triangular(spec, n)), draw(upper_triangular(spec, n))


@pytest.fixture
def rng():
    return random.Random(20261016)
