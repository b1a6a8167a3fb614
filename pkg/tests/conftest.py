import random

import pytest
from hypothesis import strategies as st

from weakpb.distrib import WeakDistribution
from weakpb.scalar import ExactScalar

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=50)
exact_scalars = st.builds(ExactScalar, rationals, rationals)
nonzero_ints = st.integers(min_value=1, max_value=2000)


@st.composite
def radical_scalars(draw):
    return ExactScalar(draw(rationals), draw(rationals), draw(nonzero_ints))


@st.composite
def class_members(draw, max_order=50, max_terms=6):
    keys = st.integers(min_value=0, max_value=max_order)
    poly = draw(st.dictionaries(keys, exact_scalars, max_size=max_terms))
    delta = draw(st.dictionaries(keys, exact_scalars, max_size=max_terms))
    return WeakDistribution(poly, delta)


@pytest.fixture
def rng():
    return random.Random(12345)
