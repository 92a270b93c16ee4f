import importlib

import pytest

from grmbot import Grmbot
from grmbot.modules.gf import field_for_order
from grmbot.modules.spectrum import exhaustive_spectrum
from grmbot.utils.engine import Cache, ComponentLoader, get_connector, run_tasks
from grmbot.utils.errors import OutOfRangeB


def test_fields_manager_aliases():
    cache = Cache("No field opened")
    f3, f5 = field_for_order(3), field_for_order(5)
    assert cache.fields.register(f3, "small") == 1
    assert cache.fields.register(f5, "big") == 2
    assert cache.fields.get() is f5
    assert cache.fields.switch("small") is f3
    assert cache.fields.get("big") is f5
    cache.fields.clear("small")
    with pytest.raises(RuntimeError, match="No field opened"):
        cache.fields.get()
    with pytest.raises(ValueError):
        cache.fields.get("small")


def test_results_manager_paths():
    cache = Cache()
    cache.results.register("record", {"w3": {"value": 7}, "rows": [1, 2]})
    assert cache.results.get("record.w3.value") == 7
    assert cache.results.get("record.rows.1") == 2
    assert "record" in cache.results
    with pytest.raises(KeyError):
        cache.results.get("record.w4")
    cache.empty_cache()
    assert len(cache) == 0


def test_results_are_copies():
    cache = Cache()
    value = {"rows": [1]}
    cache.results.register("r", value)
    value["rows"].append(2)
    assert cache.results.get("r") == {"rows": [1]}


def test_get_connector():
    assert get_connector("local").__class__.__name__ == "Local"
    assert get_connector("Pool").__class__.__name__ == "Pool"
    with pytest.raises(ImportError):
        get_connector("cluster")


def test_run_tasks_keeps_order():
    tasks = [(1, 2), (3, 4), (5, 6)]
    assert run_tasks(sum, tasks) == [3, 7, 11]
    assert run_tasks(sum, tasks, workers=2) == [3, 7, 11]


def test_local_connector_wraps_failures():
    with pytest.raises(RuntimeError, match="Task 1 failed"):
        run_tasks(int, ["1", "x"])


def test_pool_spectrum_matches_local():
    local = exhaustive_spectrum(3, 2, 2, shards=4)
    pooled = exhaustive_spectrum(3, 2, 2, shards=4, workers=2)
    assert pooled == local
    assert pooled.representatives == local.representatives


def test_discover_components():
    facade = importlib.import_module("grmbot.Grmbot")
    modules = ComponentLoader.discover_all_components(facade.__file__, "modules")
    assert {"gf", "polyring", "grm", "arrangements", "constructors",
            "spectrum", "verification"} <= set(modules)
    plugins = ComponentLoader.discover_all_components(facade.__file__, "plugins")
    assert {"data", "store"} <= set(plugins)


@pytest.fixture
def bot():
    return Grmbot()


def test_facade_weights(bot):
    record = bot.call_components("modules.grm.weights", 4, 2, 3)
    assert record["w3"]["value"] == 7
    assert record["w1"] == 4


def test_facade_field_keywords(bot):
    bot.open_field("f9", 9)
    bot.open_field("f4", "4", "1,1,1")
    assert bot.call_components("modules.gf.info")["q"] == 4
    bot.switch_field("f9")
    tag = bot.call_components("modules.constructors.classify_lines",
                              [1, 0, 0], [1, 0, 1], [0, 1, 0], [0, 1, 1])
    assert tag == "D_4"
    bot.close_all_fields()
    with pytest.raises(RuntimeError):
        bot.call_components("modules.gf.elements")


def test_facade_keeps_domain_errors(bot):
    with pytest.raises(OutOfRangeB):
        bot.call_components("modules.grm.c_b", 5, 7)
    with pytest.raises(RuntimeError, match="not found"):
        bot.call_components("modules.nothing.here")
    with pytest.raises(RuntimeError):
        bot.call_components("weights")


def test_facade_results(bot):
    bot.add_result("answer", bot.call_components("modules.grm.weights", 3, 2, 2))
    assert bot.get_result("answer.w3.value") == 5
    bot.remove_result("answer")
    with pytest.raises(KeyError):
        bot.get_result("answer")
