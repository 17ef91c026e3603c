import random

import pytest

from rank1flow import (
    asym49_schedule,
    flat_schedule,
    staircase34_schedule,
    symmetrize,
    thm44_schedule,
)


@pytest.fixture()
def rng():
    return random.Random(0)


@pytest.fixture(scope="session")
def flat2():
    return flat_schedule(2)


@pytest.fixture(scope="session")
def flat3():
    return flat_schedule(3)


@pytest.fixture(scope="session")
def small_staircase():
    return staircase34_schedule(staircase_stages=(2, 3), base=4, r_cap=16)


@pytest.fixture(scope="session")
def small_asym():
    return asym49_schedule(r_cap=16)


@pytest.fixture(scope="session")
def small_thm44():
    return thm44_schedule(s_values=(2,), q_max=1, k_max=1, r_cap=6)


@pytest.fixture(scope="session")
def sym_flat3():
    return symmetrize(flat_schedule(3))
