import numpy as np
import pytest

from choquet import MoebiusMasses, StateSpace, belief_function, core_vertices, from_moebius

# Worked example used throughout: three states, masses 0.1 / 0.5 / 0.4 on
# {1}, {2,3}, and the full event. Hand zeta transform:
#   v({1})=0.1  v({2})=0  v({3})=0  v({1,2})=0.1  v({1,3})=0.1  v({2,3})=0.5  v(Omega)=1
M_EXAMPLE_VALUES = {
    "": 0.0,
    "1": 0.1,
    "2": 0.0,
    "3": 0.0,
    "1|2": 0.1,
    "1|3": 0.1,
    "2|3": 0.5,
    "1|2|3": 1.0,
}


@pytest.fixture(scope="session")
def space3():
    return StateSpace(("1", "2", "3"))


@pytest.fixture(scope="session")
def m_example(space3):
    masses = MoebiusMasses(
        space3,
        {
            space3.mask_of(["1"]): 0.1,
            space3.mask_of(["2", "3"]): 0.5,
            space3.full_mask: 0.4,
        },
    )
    return from_moebius(masses)


def _seeded_corpus():
    caps = []
    for i in range(80):
        caps.append(belief_function(3, np.random.default_rng(3000 + i)))
    for i in range(80):
        caps.append(belief_function(4, np.random.default_rng(4000 + i)))
    for i in range(40):
        caps.append(belief_function(5, np.random.default_rng(5000 + i)))
    return caps


@pytest.fixture(scope="session")
def corpus():
    """200 seeded random convex capacities (n in 3..5) with their cores."""
    return [(cap, core_vertices(cap)) for cap in _seeded_corpus()]
