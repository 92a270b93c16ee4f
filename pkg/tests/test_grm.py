import pytest

from grmbot.modules import grm
from grmbot.modules.gf import field_for_order
from grmbot.modules.grm import (
    PROVENANCE,
    Status,
    answer_record,
    branch_tag,
    cb_value,
    decompose_r,
    min_weight,
    quadratic_weight,
    second_weight,
    theorem3_bound,
    theorem3_branch,
    third_weight,
    weight_answers,
)
from grmbot.modules.polyring import ReducedPoly
from grmbot.utils.errors import (
    BranchRangeViolation,
    EvenCharacteristic,
    NotQuadratic,
    OutOfRangeB,
    OutOfRangeR,
    UncoveredCase,
    UnsupportedField,
)


def third(q, m, r):
    return third_weight(decompose_r(q, m, r))


def test_decompose_r():
    params = decompose_r(4, 2, 3)
    assert (params.a, params.b, params.t, params.s) == (0, 3, 1, 0)
    params = decompose_r(5, 3, 9)
    assert (params.a, params.b, params.t, params.s) == (2, 1, 2, 1)


def test_decompose_r_rejects_bad_input():
    with pytest.raises(OutOfRangeR):
        decompose_r(3, 2, 0)
    with pytest.raises(OutOfRangeR):
        decompose_r(3, 2, 5)
    with pytest.raises(UnsupportedField):
        decompose_r(2, 3, 1)


@pytest.mark.parametrize("q, m, r, expected", [
    (3, 2, 2, [3, 4, 5]),
    (3, 3, 2, [9, 12, 15]),
    (4, 2, 3, [4, 6, 7]),
    (5, 2, 3, [10, 12, 13]),
])
def test_first_three_weights_of_desk_codes(q, m, r, expected):
    params = decompose_r(q, m, r)
    measured = [min_weight(params).value, second_weight(params).value, third_weight(params).value]
    assert measured == expected


def test_third_weight_c3_is_exact():
    answer = third(4, 2, 3)
    assert answer.value == 7
    assert answer.status is Status.EXACT
    assert answer.provenance == "lem:c3"


def test_main_branch_is_bound_only():
    answer = third(5, 2, 4)
    assert (answer.value, answer.status, answer.provenance) == (9, Status.BOUND_ONLY, "thm:3hyp")


def test_three_hyperplane_cube():
    answer = third(7, 4, 3)
    assert (answer.value, answer.provenance) == (1512, "thm:w33")
    assert answer.notes == ()
    small = third(5, 3, 3)
    assert small.value == 64
    assert small.notes


def test_c4_lifts_with_inequality_note():
    answer = third(9, 3, 12)
    assert (answer.value, answer.provenance) == (49, "thm:w3")
    assert grm.INEQUALITY_NOTE in answer.notes


def test_quadric_third_weight():
    assert third(3, 2, 2).value == 5
    assert third(3, 2, 2).provenance == "lem:c2"
    assert third(5, 3, 2).value == 19 * 5


def test_out_of_range_is_undefined():
    answer = third(5, 2, 1)
    assert (answer.value, answer.status, answer.provenance) == (None, Status.UNDEFINED, "range")
    assert third(5, 2, 7).status is Status.UNDEFINED


def test_univariate():
    params = decompose_r(7, 1, 3)
    assert second_weight(params).value == 5
    answer = third_weight(params)
    assert (answer.value, answer.provenance) == (6, "univariate")


def test_adjacency_promotes_lifted_c3():
    answer = third(4, 3, 6)
    assert (answer.value, answer.status, answer.provenance) == (7, Status.EXACT, "lem:c3+adj")


def test_cb_values():
    assert cb_value(9, 4).value == 49
    assert cb_value(13, 5).value == 110
    assert cb_value(17, 6).value == 195
    assert cb_value(3, 2).value == 5
    bound = cb_value(5, 4)
    assert (bound.value, bound.status) == (9, Status.BOUND_ONLY)
    with pytest.raises(OutOfRangeB):
        cb_value(5, 5)
    with pytest.raises(OutOfRangeB):
        cb_value(5, 1)


def test_second_weight_uncovered():
    with pytest.raises(UncoveredCase):
        second_weight(decompose_r(4, 2, 6))


def test_branch_table():
    assert theorem3_branch(5, 2, 0, 4) == "main"
    assert theorem3_branch(3, 3, 1, 1) == "b1q3"
    assert theorem3_branch(5, 3, 0, 3) == "cube"
    assert theorem3_bound("b1q4", 4, 4, 1, 1) == 18 * 4
    assert branch_tag("main") == "thm:3hyp"
    assert branch_tag("line") == "thm:3hyp:line"
    with pytest.raises(BranchRangeViolation):
        theorem3_bound("main", 3, 3, 0, 4)
    with pytest.raises(BranchRangeViolation):
        theorem3_bound("nope", 5, 3, 0, 4)


def test_weights_increase_where_exact():
    for q in (3, 4, 5, 7, 9):
        for m in range(2, 5):
            for r in range(2, m * (q - 1) - 1):
                params = decompose_r(q, m, r)
                w3 = third_weight(params)
                if w3.exact and w3.provenance != "univariate":
                    assert min_weight(params).value < second_weight(params).value < w3.value


def test_every_emitted_tag_is_documented():
    for q in (3, 4, 5, 7, 8, 9, 11, 13, 16, 17):
        for m in range(1, 5):
            for r in range(1, m * (q - 1) + 1):
                for answer in weight_answers(q, m, r).values():
                    assert answer.provenance in PROVENANCE


def test_answer_record_layout():
    record = answer_record(4, 2, 3)
    assert list(record) == ["q", "m", "r", "a", "b", "t", "s", "w1", "w2", "w3"]
    assert record["w1"] == 4 and record["w2"] == 6
    assert record["w3"] == {"value": 7, "status": "Exact", "provenance": "lem:c3"}


def test_quadratic_weights():
    f5 = field_for_order(5)
    x1, x2 = ReducedPoly.variable(f5, 2, 0), ReducedPoly.variable(f5, 2, 1)
    one = ReducedPoly.constant(f5, 2, 1)
    classification, value = quadratic_weight(x1 * x2)
    assert value == 16
    assert (classification.r0, classification.w0) == (2, 2)
    assert quadratic_weight(x1 * x2 + one)[1] == 21
    assert quadratic_weight(x1 * x1 + x2 * x2.scale(2))[1] == x1.field.q ** 2 - 1

    f3 = field_for_order(3)
    y1 = ReducedPoly.variable(f3, 2, 0)
    assert quadratic_weight(y1 * y1)[1] == 6
    assert quadratic_weight(ReducedPoly.zero(f3, 2))[1] == 0
    assert quadratic_weight(ReducedPoly.constant(f3, 2, 2))[1] == 9


def test_quadratic_weight_rejects():
    f3 = field_for_order(3)
    x1, x2 = ReducedPoly.variable(f3, 2, 0), ReducedPoly.variable(f3, 2, 1)
    with pytest.raises(NotQuadratic):
        quadratic_weight(x1 * x1 * x2)
    f4 = field_for_order(4)
    with pytest.raises(EvenCharacteristic):
        quadratic_weight(ReducedPoly.variable(f4, 2, 0))
