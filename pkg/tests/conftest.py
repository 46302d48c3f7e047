import itertools

import numpy as np
import pytest

from normmaps.groups import perm_from_cycles, symmetric_group
from normmaps.suite import SUITE_DATA, suite_case


def brute_closure(gens, degree):
    """Independent permutation closure: repeated products until stable."""
    ident = tuple(range(degree))
    seen = {ident}
    while True:
        new = {tuple(a[b[x]] for x in range(degree)) for a in seen for b in gens} - seen
        if not new:
            return seen
        seen |= new


def cyc(cycles, degree):
    return perm_from_cycles(cycles, degree)


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(scope="session")
def s3_c2(s3):
    h = s3.generated_subgroup([s3.element_of_perm(cyc([[1, 2]], 3))])
    return s3, h


@pytest.fixture(scope="session")
def suite():
    return {name: suite_case(name) for name in SUITE_DATA}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def all_pairs(n):
    return itertools.product(range(n), repeat=2)
