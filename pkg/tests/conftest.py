from fractions import Fraction

import pytest

from gradval.fields import Rationals, RationalFunctionField, SimpleExtension
from gradval.fixtures import fixtures
from gradval.graded import GradedField
from gradval.grading import Lattice


@pytest.fixture(scope="session")
def ws():
    return fixtures()


@pytest.fixture(scope="session")
def Q():
    return Rationals()


@pytest.fixture(scope="session")
def K():
    return SimpleExtension.kummer(2, -1, "i")


@pytest.fixture(scope="session")
def Qx(Q):
    return RationalFunctionField(Q, "x")


@pytest.fixture(scope="session")
def Z():
    return Lattice.standard(1)


@pytest.fixture(scope="session")
def KB(K, Z):
    return GradedField(K, Z)


@pytest.fixture(scope="session")
def QZ(Q, Z):
    return GradedField(Q, Z)


def fr(x):
    return Fraction(x)
