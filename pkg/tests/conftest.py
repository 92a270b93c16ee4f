import pytest

from grmbot.modules.gf import field_for_order


@pytest.fixture
def f3():
    return field_for_order(3)


@pytest.fixture
def f4():
    return field_for_order(4)


@pytest.fixture
def f5():
    return field_for_order(5)


@pytest.fixture
def f9():
    return field_for_order(9)


@pytest.fixture(autouse=True)
def _clear_budgets(monkeypatch):
    monkeypatch.delenv("GRMW_BUDGET", raising=False)
    monkeypatch.delenv("GRMW_POINTS_BUDGET", raising=False)
