import numpy as np
import pytest

from grmbot.modules.gf import field_for_order
from grmbot.modules.polyring import (
    NEG_INF,
    AffineMap,
    ReducedPoly,
    compose_affine,
    degree,
    evaluate,
    factor_hyperplane,
    from_json,
    from_truth_table,
    linear_form,
    point_coordinates,
    poly_arith,
    reduce,
    reduce_exponent,
    restrict,
    to_json,
    truth_table,
    weight,
)
from grmbot.utils.errors import (
    DoesNotVanish,
    FieldMismatch,
    SingleVariable,
    SingularMatrix,
    SizeBudgetExceeded,
    UnsupportedField,
    VariableCountMismatch,
)


def variables(field, m):
    return [ReducedPoly.variable(field, m, i) for i in range(m)]


def test_reduce_exponent():
    assert reduce_exponent(0, 5) == 0
    assert reduce_exponent(4, 5) == 4
    assert reduce_exponent(5, 5) == 1
    assert reduce_exponent(9, 5) == 1
    assert reduce_exponent(4, 3) == 2


def test_reduce_combines_and_drops_zero_terms(f3):
    f = reduce(f3, 2, [((3, 0), 1), ((1, 0), 2), ((0, 4), 1), ((0, 2), 1)])
    # x1^3 + 2 x1 = 0 and x2^4 + x2^2 = 2 x2^2
    assert f.terms == (((0, 2), 2),)


def test_reduce_is_idempotent(f5):
    raw = [((7, 2), 3), ((0, 11), 4), ((3, 3), 1), ((7, 2), 2)]
    f = reduce(f5, 2, raw)
    assert reduce(f5, 2, f.terms) == f


def test_canonical_equality(f3):
    x1, _ = variables(f3, 2)
    one = ReducedPoly.constant(f3, 2, 1)
    expanded = reduce(f3, 2, [((2, 0), 1), ((1, 0), 2), ((0, 0), 1)])
    assert (x1 + one) ** 2 == expanded


def test_x_to_the_q_is_x(f4):
    x1, x2 = variables(f4, 2)
    assert x1 ** 4 == x1
    assert (x1 * x2) ** 3 != x1 * x2
    assert (x1 * x2) ** 4 == x1 * x2


def test_degree(f3):
    x1, x2 = variables(f3, 2)
    assert degree(ReducedPoly.zero(f3, 2)) == NEG_INF
    assert degree(ReducedPoly.constant(f3, 2, 2)) == 0
    assert (x1 * x1 * x2).degree() == 3
    assert (x1 * x1 * x2).degree_in(0) == 2


def test_truth_table_point_order(f3):
    x1, x2 = variables(f3, 2)
    assert truth_table(x1).tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    assert truth_table(x2).tolist() == [0, 1, 2, 0, 1, 2, 0, 1, 2]
    assert point_coordinates(3, 2).shape == (2, 9)


def test_evaluate_matches_truth_table(f4):
    x1, x2 = variables(f4, 2)
    f = x1 * x1 * x2 + x2.scale(3) + ReducedPoly.constant(f4, 2, 2)
    table = truth_table(f)
    for index, (a, b) in enumerate(point_coordinates(4, 2).T):
        assert evaluate(f, (int(a), int(b))) == table[index]


def test_weights_of_simple_functions(f5):
    x1, x2 = variables(f5, 2)
    assert weight(ReducedPoly.zero(f5, 2)) == 0
    assert weight(x1) == 20
    assert weight(x1 * x2) == 16
    indicator = ReducedPoly.constant(f5, 2, 1) - x1 ** 4
    assert weight(indicator) == 5


def test_truth_table_budget(f3):
    x1, _ = variables(f3, 2)
    with pytest.raises(SizeBudgetExceeded):
        truth_table(x1, budget=8)


def test_truth_table_budget_from_environment(f3, monkeypatch):
    monkeypatch.setenv("GRMW_POINTS_BUDGET", "4")
    with pytest.raises(SizeBudgetExceeded):
        weight(ReducedPoly.variable(f3, 2, 0))


def test_from_truth_table_inverts_truth_table(f4):
    rng = np.random.default_rng(7)
    values = rng.integers(0, 4, size=16)
    f = from_truth_table(f4, 2, values)
    assert truth_table(f).tolist() == values.tolist()
    assert max(f.degree_in(0), f.degree_in(1)) <= 3


def test_restrict(f3):
    x1, x2 = variables(f3, 2)
    f = x1 * x2 + x2
    assert restrict(f, 2).is_zero()
    assert restrict(f, 1) == ReducedPoly.variable(f3, 1, 0).scale(2)
    with pytest.raises(SingleVariable):
        restrict(ReducedPoly.variable(f3, 1, 0), 0)


def test_factor_hyperplane(f5):
    x1, x2 = variables(f5, 2)
    g = x2 * x2 + x1
    f = (x1 - ReducedPoly.constant(f5, 2, 3)) * g
    assert factor_hyperplane(f, 3) == g
    with pytest.raises(DoesNotVanish):
        factor_hyperplane(x2, 0)


def test_affine_composition_preserves_weight(f5):
    x1, x2 = variables(f5, 2)
    f = x1 * x2 + x1 ** 2 + ReducedPoly.constant(f5, 2, 1)
    rng = np.random.default_rng(11)
    for _ in range(10):
        T = AffineMap.random(f5, 2, rng)
        assert weight(compose_affine(f, T)) == weight(f)


def test_compose_with_translation(f5):
    x1, _ = variables(f5, 2)
    moved = compose_affine(x1, AffineMap.translation(2, [2, 0]))
    assert moved == x1 + ReducedPoly.constant(f5, 2, 2)


def test_singular_affine_map_rejected(f3):
    x1, _ = variables(f3, 2)
    with pytest.raises(SingularMatrix):
        compose_affine(x1, AffineMap(((1, 1), (1, 1)), (0, 0)))


def test_mixed_fields_rejected(f3, f5):
    with pytest.raises(FieldMismatch):
        ReducedPoly.variable(f3, 2, 0) + ReducedPoly.variable(f5, 2, 0)
    with pytest.raises(FieldMismatch):
        ReducedPoly.variable(f3, 2, 0) * ReducedPoly.variable(f3, 3, 0)


def test_variable_count_checked(f3):
    with pytest.raises(VariableCountMismatch):
        reduce(f3, 2, [((1, 0, 0), 1)])
    with pytest.raises(VariableCountMismatch):
        linear_form(f3, 2, [1, 1, 1])


def test_binary_field_unsupported():
    with pytest.raises(UnsupportedField):
        ReducedPoly.zero(field_for_order(2), 2)


def test_linear_form(f5):
    f = linear_form(f5, 2, [1, 2], 3)
    assert f.degree() == 1
    assert weight(f) == 20


def test_poly_arith(f3):
    x1, x2 = variables(f3, 2)
    assert poly_arith("add", x1, x2, x1) == x1.scale(2) + x2
    assert poly_arith("mul", x1, x2) == x1 * x2
    assert poly_arith("scale", x1, 2) == -x1


def test_json_layout(f9):
    x1, x2 = variables(f9, 2)
    f = x1 * x2.scale(5) + ReducedPoly.constant(f9, 2, 7)
    data = to_json(f)
    assert data["p"] == 3 and data["e"] == 2
    assert data["modulus"] == [1, 0, 1]
    assert data["terms"][0] == {"exps": [0, 0], "coeff": 7}
    assert from_json(data) == f


def test_json_rejects_zero_coefficient():
    data = {"p": 3, "e": 1, "m": 1, "terms": [{"exps": [1], "coeff": 0}]}
    with pytest.raises(ValueError):
        from_json(data)
