import pytest

from grmbot.modules.gf import field_for_order
from grmbot.modules.spectrum import (
    classify_planes,
    exhaustive_spectrum,
    line_union_oracle,
    monomial_basis,
    plane_union_oracle,
)
from grmbot.utils.errors import BudgetExceeded, OutOfRangeR, SizeBudgetExceeded
from grmbot.utils.helper import Hex


def test_monomial_basis():
    basis = monomial_basis(3, 2, 2)
    assert basis == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert len(monomial_basis(4, 2, 3)) == 10


@pytest.mark.parametrize("q, m, r, first_three", [
    (3, 2, 2, [3, 4, 5]),
    (3, 3, 2, [9, 12, 15]),
    (4, 2, 3, [4, 6, 7]),
    pytest.param(5, 2, 3, [10, 12, 13], marks=pytest.mark.slow),
])
def test_desk_spectra(q, m, r, first_three):
    assert exhaustive_spectrum(q, m, r).nonzero_weights(3) == first_three


def test_spectrum_counts_every_codeword():
    result = exhaustive_spectrum(3, 2, 2)
    assert result.enumerated == 3**6
    assert sum(count for _, count in result.distinct_weights) == 3**6
    assert result.count_of(0) == 1
    assert result.representatives[0] == (0,) * 9


def test_spectrum_representatives_have_their_weight():
    result = exhaustive_spectrum(3, 2, 2)
    for w, rep in result.representatives.items():
        assert sum(1 for v in rep if v) == w


def test_spectrum_is_shard_independent():
    single = exhaustive_spectrum(3, 3, 2)
    for shards in (2, 5, 16):
        sharded = exhaustive_spectrum(3, 3, 2, shards=shards)
        assert sharded == single
        assert sharded.representatives == single.representatives


def test_spectrum_weight_cap():
    result = exhaustive_spectrum(3, 2, 2, weight_cap=4)
    assert max(result.weights()) <= 4
    tallied = sum(count for _, count in result.distinct_weights)
    assert tallied + result.above_cap == 3**6
    assert result.above_cap > 0


def test_spectrum_max_distinct():
    result = exhaustive_spectrum(3, 2, 2, max_distinct=2)
    assert result.nonzero_weights() == [3, 4]
    assert result.weights()[0] == 0


def test_spectrum_json_and_csv():
    result = exhaustive_spectrum(3, 2, 2)
    data = result.to_json()
    assert (data["q"], data["m"], data["r"]) == (3, 2, 2)
    assert data["weights"][1]["weight"] == 3
    row = result.csv_rows()[1]
    assert row[0] == 3
    assert Hex.unpack(row[2], 3) == list(result.representatives[3])


def test_spectrum_over_explicit_field():
    f4 = field_for_order(4, [1, 1, 1])
    assert exhaustive_spectrum(4, 2, 3, field=f4).nonzero_weights(3) == [4, 6, 7]


def test_spectrum_budget_and_range():
    with pytest.raises(BudgetExceeded):
        exhaustive_spectrum(3, 2, 2, budget=100)
    with pytest.raises(OutOfRangeR):
        exhaustive_spectrum(3, 2, 5)


def test_spectrum_budget_from_environment(monkeypatch):
    monkeypatch.setenv("GRMW_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        exhaustive_spectrum(3, 2, 2)


def test_spectrum_points_budget(monkeypatch):
    monkeypatch.setenv("GRMW_POINTS_BUDGET", "8")
    with pytest.raises(SizeBudgetExceeded):
        exhaustive_spectrum(3, 2, 1)


@pytest.mark.parametrize("q, b, top", [
    (4, 2, [8, 7]),
    (7, 3, [21, 19, 18]),
    (9, 4, [36, 33, 32]),
    pytest.param(13, 5, [65, 61, 59], marks=pytest.mark.slow),
])
def test_line_union_oracle(q, b, top):
    assert line_union_oracle(q, b).sizes()[:len(top)] == top


def test_line_union_classes():
    result = line_union_oracle(7, 3)
    assert result.classes[21] == "A_3"
    assert result.classes[18] == "G_3"
    assert len(result.witnesses[18]) == 3


def test_line_union_pinning_keeps_sizes():
    pinned = line_union_oracle(5, 3)
    free = line_union_oracle(5, 3, fix_first_line=False)
    assert pinned.sizes() == free.sizes()
    assert pinned.searched == 406
    assert free.searched == 4060


def test_line_union_budget():
    with pytest.raises(BudgetExceeded):
        line_union_oracle(7, 3, budget=10)
    with pytest.raises(ValueError):
        line_union_oracle(3, 20)


def test_plane_union_oracle_q5():
    assert plane_union_oracle(5).sizes()[:4] == [75, 65, 61, 60]


def test_plane_union_oracle_q7():
    result = plane_union_oracle(7)
    assert result.sizes()[:4] == [147, 133, 127, 126]
    assert result.classes[127] == "general"
    assert result.classes[147] == "parallel"
    assert result.to_json()["sizes"][0]["size"] == 147


def test_classify_planes(f5):
    assert classify_planes(f5, [(1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 0, 2)]) == "parallel"
    assert classify_planes(f5, [(1, 0, 0, 0), (1, 0, 0, 1), (0, 1, 0, 0)]) == "two-parallel"
    assert classify_planes(f5, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]) == "general"
    assert classify_planes(f5, [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]) == "pencil"
    assert classify_planes(f5, [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 1)]) == "prism"
