import json

import pytest

from grmbot import Grmbot
from grmbot.modules.constructors import construct
from grmbot.modules.polyring import weight
from grmbot.plugins.data import load_any, load_grid, load_polynomial
from grmbot.plugins.store import ReportStore

REPORT = {
    "suite": "oracles",
    "claims": [
        {"id": "lines:q=4,b=2", "provenance": "lem:c2", "expected": [8, 7],
         "measured": [8, 7], "pass": True},
        {"id": "planes:q=7:third-class", "provenance": "thm:w33", "expected": "general",
         "measured": "pencil", "pass": False},
    ],
    "elapsed_ms": 42,
}


def test_load_grid_formats(tmp_path):
    csv_file = tmp_path / "grid.csv"
    csv_file.write_text("q,m,r,note\n3,2,2,desk\n4,2,3,\n")
    assert load_grid(str(csv_file)) == [{"q": 3, "m": 2, "r": 2}, {"q": 4, "m": 2, "r": 3}]

    json_file = tmp_path / "grid.json"
    json_file.write_text(json.dumps([{"q": 5, "m": 2, "r": 3}]))
    assert load_grid(str(json_file)) == [{"q": 5, "m": 2, "r": 3}]

    yaml_file = tmp_path / "grid.yml"
    yaml_file.write_text("grid:\n  - q: 7\n    m: 3\n    r: 3\n")
    assert load_grid(str(yaml_file)) == [{"q": 7, "m": 3, "r": 3}]


def test_load_grid_rejects_bad_rows(tmp_path):
    missing = tmp_path / "missing.csv"
    missing.write_text("q,m\n3,2\n")
    with pytest.raises(ValueError, match="misses r"):
        load_grid(str(missing))
    wrong = tmp_path / "wrong.yaml"
    wrong.write_text("- {q: three, m: 2, r: 2}\n")
    with pytest.raises(ValueError, match="non-integer"):
        load_grid(str(wrong))
    with pytest.raises(FileNotFoundError):
        load_grid(str(tmp_path / "absent.csv"))


def test_load_any_bad_json(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(RuntimeError):
        load_any(str(broken))


def test_load_polynomial_from_manifest(tmp_path):
    manifest = construct("third", 4, 3, 1, 3)
    path = tmp_path / "word.json"
    path.write_text(json.dumps(manifest))
    assert weight(load_polynomial(str(path))) == 7


def test_data_keywords_register_results(tmp_path):
    grid = tmp_path / "grid.yaml"
    grid.write_text("- {q: 3, m: 2, r: 2}\n")
    bot = Grmbot(["plugins.data"])
    assert bot.plugins.data.grid(str(grid), key="cells") == "Imported"
    assert bot.get_result("cells.0.q") == 3
    assert bot.plugins.data.grid(str(grid)) == [{"q": 3, "m": 2, "r": 2}]


def test_store_round_trip(tmp_path):
    store = ReportStore(str(tmp_path / "results.db"))
    try:
        campaign_id = store.save("nightly", REPORT)
        assert store.load(campaign_id) == REPORT
        row = store.list_campaigns()[0]
        assert (row["name"], row["suite"], row["passed"]) == ("nightly", "oracles", False)
        with pytest.raises(KeyError):
            store.load(campaign_id + 1)
    finally:
        store.close()


def test_store_campaign_listing(tmp_path):
    db = str(tmp_path / "results.db")
    bot = Grmbot(["plugins.store"])
    bot.plugins.store.save_report(db, "nightly", REPORT)
    bot.plugins.store.save_report(db, "weekly", REPORT)
    bot.plugins.store.save_report(db, "nightly", {"suite": "quadratic", "claims": []})
    reports = bot.plugins.store.load_campaigns(db, "nightly")
    assert [r["suite"] for r in reports] == ["oracles", "quadratic"]
    assert reports[1]["claims"] == []
