import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from poolrisk import LatticeDistribution, Utility

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile("default")


@st.composite
def lattice_laws(draw, max_len=8, min_len=1, origin=None, step=None):
    """Random lattice laws with strictly positive end points."""
    size = draw(st.integers(min_len, max_len))
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=size, max_size=size))
    weights[0] = max(weights[0], 0.05)
    weights[-1] = max(weights[-1], 0.05)
    probs = np.array(weights) / sum(weights)
    o = draw(st.floats(-3.0, 3.0)) if origin is None else origin
    s = draw(st.sampled_from([0.25, 0.5, 1.0])) if step is None else step
    return LatticeDistribution(o, s, probs)


utilities = st.one_of(
    st.floats(0.1, 4.0).map(Utility.exponential),
    st.floats(0.2, 5.0).filter(lambda c: abs(c - 1) > 0.05).map(Utility.power),
    st.just(Utility.log()),
)


@pytest.fixture
def bernoulli():
    return LatticeDistribution(0.0, 1.0, [0.5, 0.5])


@pytest.fixture
def fair_coin():
    return LatticeDistribution.from_atoms([-1.0, 1.0], [0.5, 0.5])


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
