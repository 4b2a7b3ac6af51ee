"""Shared fixtures."""

import pytest

from app.application.services.catalog_service import CatalogService
from app.core.config import reset_settings

# a two-object normal category: 0 is a retract of 1
TWO_OBJECT_CATEGORY = """\
objects 2
labels A B
order
1 1
0 1
hom 0 0: 1
hom 0 1: 1
hom 1 0: 1
hom 1 1: 2
id 1 (1,1,0)
incl 0 1 (0,1,0)
c (0,1,0)(1,0,0)=(0,0,0)
c (1,0,0)(0,1,0)=(1,1,1)
c (1,1,1)(1,1,1)=(1,1,1)
c (0,1,0)(1,1,1)=(0,1,0)
c (1,1,1)(1,0,0)=(1,0,0)
"""


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from default settings."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def named():
    return CatalogService.named_semigroups()


@pytest.fixture
def t2():
    return CatalogService.build("T2")


@pytest.fixture
def t3():
    return CatalogService.build("T3")


@pytest.fixture
def i2():
    return CatalogService.build("I2")


@pytest.fixture
def p2():
    return CatalogService.build("P2")


@pytest.fixture
def two_object_text():
    return TWO_OBJECT_CATEGORY
