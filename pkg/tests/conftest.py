import math

import pytest
from hypothesis import strategies as st

from chaplygin_riemann.state import ModelParams, PrimitiveState

LIGHT_SPEEDS = (0.5, 1.0, 3.0)


@st.composite
def admissible_states(draw, c=1.0):
    n = draw(st.floats(0.01, 50.0))
    rho_c = draw(st.floats(1.01, 50.0))
    beta = draw(st.floats(-0.99, 0.99))
    return PrimitiveState(n, rho_c / c, beta * c)


@st.composite
def states_with_c(draw):
    c = draw(st.sampled_from(LIGHT_SPEEDS))
    return draw(admissible_states(c)), ModelParams(c)


@pytest.fixture
def unit():
    return ModelParams(1.0)


@pytest.fixture
def classical_case():
    return PrimitiveState(1.0, 2.0, 0.5), PrimitiveState(1.0, 2.0, 0.0)


@pytest.fixture
def delta_case():
    return PrimitiveState(1.0, 2.0, 0.8), PrimitiveState(1.0, 2.0, -0.8)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


ROOT3 = math.sqrt(3.0)
