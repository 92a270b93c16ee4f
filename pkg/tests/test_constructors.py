import pytest

from grmbot.modules.constructors import (
    Line2,
    all_lines,
    build_arrangement_poly,
    build_theorem3_witness,
    build_third_weight,
    build_third_weight_2var,
    classify_line_configuration,
    construct,
    family_in_range,
    first_irreducible_quadratic,
    lift_two_variable,
)
from grmbot.modules.gf import field_for_order
from grmbot.modules.polyring import degree, from_json, weight
from grmbot.utils.errors import (
    BranchRangeViolation,
    DuplicateLine,
    FullBlock,
    NotExactCase,
    ParamSideCondition,
    RepeatedShift,
)


def test_arrangement_poly_weight_is_complement_of_union():
    f = build_arrangement_poly(5, 2, [(0, [0, 1]), (1, [0])])
    assert weight(f) == 25 - 13
    assert degree(f) == 3


def test_arrangement_poly_accepts_coefficient_forms():
    f = build_arrangement_poly(5, 2, [([1, 1], [0]), ([1, 4], [0])])
    assert weight(f) == 25 - 9


def test_arrangement_poly_rejects_bad_blocks():
    with pytest.raises(RepeatedShift):
        build_arrangement_poly(5, 2, [(0, [1, 1])])
    with pytest.raises(FullBlock):
        build_arrangement_poly(3, 2, [(0, [0, 1, 2])])


@pytest.mark.parametrize("branch, q, m, a, b, claimed", [
    ("main", 5, 3, 0, 4, 45),
    ("line", 4, 2, 0, 2, 12),
    ("cube", 5, 3, 0, 3, 64),
    ("b1", 5, 2, 1, 1, 6),
    ("b1q3", 3, 3, 1, 1, 9),
    ("b1q4", 4, 3, 1, 1, 18),
    ("b1top", 4, 2, 1, 1, 6),
    ("b2q3", 3, 4, 1, 2, 16),
])
def test_theorem3_witness_meets_its_bound(branch, q, m, a, b, claimed):
    f, bound = build_theorem3_witness(q, m, a, b, branch)
    assert bound == claimed
    assert weight(f) == claimed
    assert degree(f) <= a * (q - 1) + b


def test_theorem3_witness_outside_branch():
    with pytest.raises(BranchRangeViolation):
        build_theorem3_witness(5, 3, 0, 4, "cube")
    with pytest.raises(BranchRangeViolation):
        build_theorem3_witness(5, 3, 0, 4, "nope")


@pytest.mark.parametrize("q, m, a, b, expected", [
    (7, 5, 2, 3, 216),
    (4, 3, 1, 3, 7),
    (3, 2, 0, 2, 5),
    (5, 3, 1, 2, 19),
    (5, 2, 0, 3, 13),
])
def test_third_weight_word(q, m, a, b, expected):
    f = build_third_weight(q, m, a, b)
    assert weight(f) == expected
    assert degree(f) <= a * (q - 1) + b


def test_third_weight_word_needs_exact_answer():
    with pytest.raises(NotExactCase):
        build_third_weight(5, 2, 0, 4)


def test_first_irreducible_quadratic(f5):
    beta, gamma = first_irreducible_quadratic(f5)
    assert all((t * t + beta * t + gamma) % 5 for t in range(5))


@pytest.mark.parametrize("q, b, family, expected", [
    (7, 2, "circle", 41),
    (5, 3, "triangle", 13),
    (9, 4, "D", 49),
    (9, 4, "E", 49),
    (9, 4, "F", 49),
    (13, 5, "D", 110),
    (13, 5, "quad", 110),
])
def test_two_variable_families(q, b, family, expected):
    f = build_third_weight_2var(q, b, family)
    assert weight(f) == expected
    assert degree(f) <= b


def test_family_ranges():
    assert family_in_range(9, 4, "D")
    assert not family_in_range(7, 4, "D")
    assert not family_in_range(3, 3, "triangle")
    assert family_in_range(16, 6, "F")
    assert not family_in_range(16, 7, "F")
    with pytest.raises(ParamSideCondition):
        build_third_weight_2var(7, 4, "D")
    with pytest.raises(ParamSideCondition):
        build_third_weight_2var(9, 4, "hexagon")


def test_family_side_conditions():
    with pytest.raises(ParamSideCondition):
        build_third_weight_2var(9, 4, "D", {"shifts": [0, 0]})
    with pytest.raises(ParamSideCondition):
        build_third_weight_2var(5, 3, "triangle", {"c": 0})
    with pytest.raises(ParamSideCondition):
        build_third_weight_2var(9, 4, "F", {"directions": [(1, 0), (2, 0), (0, 1)]})


def test_lift_scales_weight():
    g = build_third_weight_2var(5, 3, "triangle")
    assert weight(lift_two_variable(5, 4, 1, g)) == 13 * 5


def test_construct_third_manifest():
    manifest = construct("third", 7, 5, 2, 3)
    assert manifest["family"] == "third"
    assert manifest["params"] == {"q": 7, "m": 5, "a": 2, "b": 3}
    assert manifest["claimed_weight"] == manifest["measured_weight"] == 216
    assert manifest["provenance"] == "thm:w33"
    assert manifest["notes"]
    assert weight(from_json(manifest["polynomial"])) == 216


def test_construct_theorem3_records_branch():
    manifest = construct("theorem3", 5, 3, 0, 4)
    assert manifest["params"]["branch"] == "main"
    assert manifest["provenance"] == "thm:3hyp"
    assert manifest["measured_weight"] == 45


def test_construct_lifted_family():
    manifest = construct("D", 9, 3, 0, 4)
    assert manifest["claimed_weight"] == manifest["measured_weight"] == 49 * 9
    assert manifest["provenance"] == "thm:c4"


def test_construct_rejects_bad_requests():
    with pytest.raises(ParamSideCondition):
        construct("D", 9, 3, 2, 4)
    with pytest.raises(ParamSideCondition):
        construct("hexagon", 9, 3, 0, 4)
    with pytest.raises(BranchRangeViolation):
        construct("theorem3", 3, 2, 0, 1)


def test_line_normalisation(f5):
    line = Line2.of(f5, 2, 4, 1)
    assert (line.a, line.b, line.c) == (1, 2, 3)
    assert Line2.of(f5, 0, 3, 3) == Line2.of(f5, 0, 1, 1)
    assert Line2.from_points(f5, (0, 0), (1, 1)) == Line2.of(f5, 1, 4, 0)
    with pytest.raises(ValueError):
        Line2.of(f5, 0, 0, 1)


def test_line_geometry(f5):
    x0, y0 = Line2.of(f5, 1, 0, 0), Line2.of(f5, 0, 1, 0)
    assert x0.meet(y0) == (0, 0)
    assert x0.meet(Line2.of(f5, 1, 0, 2)) is None
    assert x0.parallel(Line2.of(f5, 1, 0, 3))
    assert Line2.of(f5, 1, 1, 2).contains((1, 1))
    assert int(x0.mask().sum()) == 5


def test_all_lines(f4, f5):
    assert len(all_lines(f4)) == 20
    assert len(set(all_lines(f5))) == 30


def _lines(field, *triples):
    return [Line2.of(field, *t) for t in triples]


def test_classify_basic_configurations(f5):
    assert classify_line_configuration(_lines(f5, (1, 0, 0), (1, 0, 1), (1, 0, 2))) == "A_3"
    assert classify_line_configuration(_lines(f5, (1, 0, 0), (1, 0, 1), (0, 1, 0))) == "B_3"
    assert classify_line_configuration(_lines(f5, (1, 0, 0), (0, 1, 0), (1, 1, 1))) == "G_3"


def test_classify_concurrent_lines():
    f7 = field_for_order(7)
    assert classify_line_configuration(_lines(f7, (1, 0, 0), (0, 1, 0), (1, 1, 0))) == "C_3"


def test_classify_four_lines(f5, f9):
    square = _lines(f9, (1, 0, 0), (1, 0, 1), (0, 1, 0), (0, 1, 1))
    assert classify_line_configuration(square) == "D_4"
    corner = _lines(f5, (1, 0, 0), (1, 0, 1), (0, 1, 0), (1, 1, 0))
    assert classify_line_configuration(corner) == "E_4"


def test_classify_pencil_with_parallel(f5):
    lines = _lines(f5, (1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0), (0, 1, 1))
    assert classify_line_configuration(lines) == "F_5"


def test_classify_rejects_bad_input(f5):
    with pytest.raises(DuplicateLine):
        classify_line_configuration(_lines(f5, (1, 0, 0), (2, 0, 0), (0, 1, 0)))
    with pytest.raises(ValueError):
        classify_line_configuration(_lines(f5, (1, 0, 0), (0, 1, 0)))
