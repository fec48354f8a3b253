"""Shared fixtures: parsed units for the corpus under tests/fixtures."""

import pytest

from fixtureutil import FIXTURES, parse_fixture


@pytest.fixture(scope="session")
def example_unit():
    return parse_fixture("example.sol")


@pytest.fixture(scope="session")
def erc20_unit():
    return parse_fixture("erc20.sol")


@pytest.fixture(scope="session")
def vault_unit():
    return parse_fixture("vault.sol")


@pytest.fixture(scope="session")
def corpus_units(example_unit, erc20_unit, vault_unit):
    return [example_unit, erc20_unit, vault_unit]


@pytest.fixture
def fixtures_dir():
    return FIXTURES
