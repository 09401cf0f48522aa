"""
Shared fixtures: exponent suites of the reference models
"""

import pytest

from calculations.exponents import ExponentSuite
from data import fixtures


@pytest.fixture(scope='session')
def brownian_suite():
    return ExponentSuite(fixtures.brownian())


@pytest.fixture(scope='session')
def stable_suite():
    return ExponentSuite(fixtures.stable(1.5))


@pytest.fixture(scope='session')
def tempered_suite():
    return ExponentSuite(fixtures.tempered(1.5, 1.0))


@pytest.fixture(scope='session')
def mixture_suite():
    return ExponentSuite(fixtures.mixture())


@pytest.fixture(scope='session')
def boundary_suite():
    return ExponentSuite(fixtures.stable_boundary())


@pytest.fixture(scope='session')
def truncated_suite():
    """Bounded-variation truncated model, built without validation"""
    return ExponentSuite(fixtures.truncated(0.5, 1.0), validate=False)


@pytest.fixture(scope='session')
def custom_suite():
    return ExponentSuite(fixtures.custom_stable(1.5))
