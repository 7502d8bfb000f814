import pytest

from cubic_hecke.characters import FamilyMember


@pytest.fixture(scope="session")
def f10():
    return FamilyMember.of(10)
