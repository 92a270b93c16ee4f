"""
Codeword Constructors Module

This module builds explicit codewords realising the weight formulas:

- products of parallel hyperplane blocks, whose weight is q^m - N(type);
- the witness of every upper-bound branch of grm;
- two-variable words of weight c_b (circle, triangle, and the D, E, F and
  quadrilateral line families);
- lifts of those words behind prod(1 - x_i^(q-1)), realising the exact third
  weights.

It also classifies configurations of lines in the affine plane.
"""
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

from robot.api import logger

from grmbot.modules.arrangements import validate_blocks
from grmbot.modules.gf import FieldSpec, field_for_order
from grmbot.modules.grm import (
    branch_tag,
    cb_value,
    decompose_r,
    theorem3_bound,
    theorem3_branch,
    third_weight,
)
from grmbot.modules.polyring import (
    ReducedPoly,
    linear_form,
    reduce,
    to_json,
    truth_table,
    weight,
)
from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import (
    BranchRangeViolation,
    ClosedFormMismatch,
    DuplicateLine,
    NotExactCase,
    ParamSideCondition,
)

PRODUCT_INDEX_NOTE = "prefix is prod(1-x_i^(q-1)) over i=1..a"

FAMILIES = ("circle", "triangle", "D", "E", "F", "quad")


def _field(q: int, field: Optional[FieldSpec]) -> FieldSpec:
    if field is None:
        return field_for_order(q)
    if field.q != q:
        raise ValueError(f"field has order {field.q}, expected {q}")
    return field


def _one(field: FieldSpec, m: int) -> ReducedPoly:
    return ReducedPoly.constant(field, m, 1)


def _shifted(field: FieldSpec, m: int, i: int, u: int) -> ReducedPoly:
    """x_i - u, variables counted from 0."""
    return ReducedPoly.variable(field, m, i) - ReducedPoly.constant(field, m, u)


def _prefix(field: FieldSpec, m: int, count: int) -> ReducedPoly:
    """prod_{i<count} (1 - x_i^(q-1)): the indicator of x_0 = ... = x_{count-1} = 0."""
    result = _one(field, m)
    for i in range(count):
        result = result * (_one(field, m) - ReducedPoly.variable(field, m, i) ** (field.q - 1))
    return result


def _avoiding(field: FieldSpec, m: int, i: int, shifts: Sequence[int]) -> ReducedPoly:
    result = _one(field, m)
    for u in shifts:
        result = result * _shifted(field, m, i, u)
    return result


def _first(field: FieldSpec, count: int, start: int = 0) -> List[int]:
    return field.elements()[start:start + count]


def build_arrangement_poly(q: int, m: int, blocks, field: Optional[FieldSpec] = None) -> ReducedPoly:
    """
    prod_i prod_j (f_i(x) - u_ij) over blocks of parallel hyperplanes.

    Args:
        q: Field order.
        m: Number of variables.
        blocks: List of (form, shifts). A form is a variable index or a list
            of m coefficients.
        field: Field to use, defaults to the default field of order q.

    Raises:
        DependentForms: If the forms are not independent.
        RepeatedShift: If a block repeats a shift.
        FullBlock: If a block uses every element of F_q.
    """
    field = _field(q, field)
    expanded = []
    for form, shifts in blocks:
        if isinstance(form, int):
            form = [int(j == form) for j in range(m)]
        expanded.append((form, shifts))
    result = _one(field, m)
    for form, shifts in validate_blocks(field, m, expanded):
        for u in shifts:
            result = result * linear_form(field, m, form, field.neg(u))
    return result


def build_theorem3_witness(q: int, m: int, a: int, b: int, branch: Optional[str] = None,
                           field: Optional[FieldSpec] = None) -> Tuple[ReducedPoly, int]:
    """
    Witness codeword for an upper-bound branch and the claimed weight.

    Shifts are the first distinct elements of F_q in canonical order.

    Raises:
        BranchRangeViolation: If the branch does not cover (q, m, a, b).
    """
    if branch is None:
        branch = theorem3_branch(q, m, a, b)
        if branch is None:
            raise BranchRangeViolation(f"no branch covers q={q}, m={m}, a={a}, b={b}")
    claimed = theorem3_bound(branch, q, m, a, b)
    field = _field(q, field)
    zero, one = 0, 1

    if branch == "b1q3":
        f = _prefix(field, m, a)
    elif branch == "b1q4":
        f = (_prefix(field, m, a - 1)
             * _avoiding(field, m, a - 1, [zero, one])
             * _shifted(field, m, a, zero)
             * _shifted(field, m, a + 1, zero))
    elif branch == "b1top":
        f = (_prefix(field, m, m - 2)
             * _avoiding(field, m, m - 2, _first(field, q - 2))
             * _shifted(field, m, m - 1, zero))
    elif branch == "b1":
        f = (_prefix(field, m, a - 1)
             * _avoiding(field, m, a - 1, _first(field, q - 2))
             * _avoiding(field, m, a, [zero, one]))
    elif branch == "main":
        f = (_prefix(field, m, a)
             * _avoiding(field, m, a, _first(field, b - 2))
             * _avoiding(field, m, a + 1, [zero, one]))
    elif branch == "line":
        f = _prefix(field, m, a) * _avoiding(field, m, a, _first(field, b - 1))
    elif branch == "cube":
        f = _prefix(field, m, a)
        for i in range(a, a + 3):
            f = f * _shifted(field, m, i, zero)
    elif branch == "b2q3":
        f = _prefix(field, m, a - 1)
        for i in range(a - 1, a + 3):
            f = f * _shifted(field, m, i, zero)
    else:
        raise BranchRangeViolation(f"unknown branch '{branch}'")
    return f, claimed


def first_irreducible_quadratic(field: FieldSpec) -> Tuple[int, int]:
    """(beta, gamma) with t^2 + beta t + gamma irreducible, first in code order."""
    for beta in field.elements():
        for gamma in field.elements():
            if not any(
                field.add(field.add(field.mul(t, t), field.mul(beta, t)), gamma) == 0
                for t in field.elements()
            ):
                return beta, gamma
    raise ValueError(f"no irreducible quadratic over F_{field.q}")


def _line(field: FieldSpec, direction: Sequence[int], constant: int = 0) -> ReducedPoly:
    return linear_form(field, 2, list(direction), constant)


def _default_directions(field: FieldSpec, count: int) -> List[Tuple[int, int]]:
    directions = [(1, 0), (0, 1)] + [(1, j) for j in field.elements()[1:]]
    if count > len(directions):
        raise ParamSideCondition(f"F_{field.q} has only {len(directions)} directions")
    return directions[:count]


def _check_directions(field: FieldSpec, directions: Sequence[Sequence[int]]) -> None:
    for i, (a1, b1) in enumerate(directions):
        if (a1, b1) == (0, 0):
            raise ParamSideCondition("direction (0, 0) does not define a line")
        for a2, b2 in directions[i + 1:]:
            if field.sub(field.mul(a1, b2), field.mul(a2, b1)) == 0:
                raise ParamSideCondition(
                    f"directions ({a1},{b1}) and ({a2},{b2}) are proportional"
                )


def _check_distinct(values: Sequence[int], what: str) -> None:
    if len(set(values)) != len(values):
        raise ParamSideCondition(f"{what} must be distinct, got {list(values)}")


def family_in_range(q: int, b: int, family: str) -> bool:
    """Whether the family is a c_b word at (q, b)."""
    if family == "circle":
        return b == 2
    if family == "triangle":
        return b == 3 and q >= 4
    if family == "quad":
        return b == 5 and q >= 13
    if family in ("D", "E", "F"):
        if b == 4:
            return q >= 9
        if b == 5:
            return q >= 13
        return b >= 6 and q >= 16 and 3 * b < q + 4
    return False


def build_third_weight_2var(q: int, b: int, family: str, params: Optional[dict] = None,
                            field: Optional[FieldSpec] = None) -> ReducedPoly:
    """
    Two-variable word of weight c_b from one of the named families.

    Args:
        q: Field order.
        b: Degree.
        family: circle, triangle, D, E, F or quad.
        params: Optional overrides of the free parameters (see the family
            builders); defaults are the first admissible elements.

    Raises:
        ParamSideCondition: If (q, b) is outside the family's range, a side
            condition fails, or the measured weight is not c_b.
    """
    if family not in FAMILIES:
        raise ParamSideCondition(f"unknown family '{family}', expected one of {FAMILIES}")
    if not family_in_range(q, b, family):
        raise ParamSideCondition(f"family {family} does not give c_{b} at q={q}")
    field = _field(q, field)
    params = dict(params or {})
    f = _FAMILY_BUILDERS[family](field, b, params)

    expected = cb_value(q, b).value
    measured = weight(f)
    if measured != expected:
        raise ParamSideCondition(
            f"family {family} with {params} has weight {measured}, c_{b}={expected}"
        )
    return f


def _circle(field, b, params):
    beta, gamma = first_irreducible_quadratic(field)
    beta = params.get("beta", beta)
    gamma = params.get("gamma", gamma)
    x, y = ReducedPoly.variable(field, 2, 0), ReducedPoly.variable(field, 2, 1)
    return (x * x - (x * y).scale(beta) + (y * y).scale(gamma)
            - ReducedPoly.constant(field, 2, 1))


def _triangle(field, b, params):
    c = params.get("c", 1)
    if c == 0:
        raise ParamSideCondition("third line must avoid the origin")
    return _line(field, (1, 0)) * _line(field, (0, 1)) * _line(field, (1, 1), field.neg(c))


def _family_d(field, b, params):
    shifts = params.get("shifts", _first(field, b - 2))
    c, d = params.get("c", 0), params.get("d", 1)
    _check_distinct(shifts, "vertical shifts")
    if len(shifts) != b - 2 or c == d:
        raise ParamSideCondition("D needs b-2 distinct shifts and c != d")
    return _avoiding(field, 2, 0, shifts) * _shifted(field, 2, 1, c) * _shifted(field, 2, 1, d)


def _family_f(field, b, params):
    directions = params.get("directions", _default_directions(field, b - 1))
    e = params.get("e", 1)
    _check_directions(field, directions)
    if len(directions) != b - 1 or e == 0:
        raise ParamSideCondition("F needs b-1 directions and e != 0")
    f = _line(field, directions[0], e)
    for direction in directions:
        f = f * _line(field, direction)
    return f


def _family_e(field, b, params):
    directions = params.get("directions", _default_directions(field, 3))
    shifts = params.get("shifts", _first(field, b - 3, start=1))
    _check_directions(field, directions)
    _check_distinct(shifts, "parallel shifts")
    if len(directions) != 3 or len(shifts) != b - 3 or 0 in shifts:
        raise ParamSideCondition("E needs 3 directions and b-3 distinct nonzero shifts")
    f = _one(field, 2)
    for direction in directions:
        f = f * _line(field, direction)
    for e in shifts:
        f = f * _line(field, directions[0], e)
    return f


def _quad(field, b, params):
    a_, b_ = params.get("a", 0), params.get("b", 1)
    c_, d_ = params.get("c", 0), params.get("d", 1)
    if a_ == b_ or c_ == d_:
        raise ParamSideCondition("quadrilateral needs a != b and c != d")
    diagonal = linear_form(
        field, 2, [field.sub(d_, c_), field.sub(a_, b_)],
        field.sub(field.mul(b_, c_), field.mul(a_, d_)),
    )
    return (_shifted(field, 2, 0, a_) * _shifted(field, 2, 0, b_)
            * _shifted(field, 2, 1, c_) * _shifted(field, 2, 1, d_) * diagonal)


_FAMILY_BUILDERS = {
    "circle": _circle,
    "triangle": _triangle,
    "D": _family_d,
    "E": _family_e,
    "F": _family_f,
    "quad": _quad,
}


def embed(g: ReducedPoly, m: int, offset: int) -> ReducedPoly:
    """Rename the variables of g to x_offset, x_offset+1, ... inside m variables."""
    if offset + g.m > m:
        raise ValueError(f"{g.m} variables at offset {offset} do not fit in {m}")
    pad = m - offset - g.m
    return reduce(g.field, m, [((0,) * offset + exps + (0,) * pad, c) for exps, c in g.terms])


def lift_two_variable(q: int, m: int, a: int, g: ReducedPoly) -> ReducedPoly:
    """prod_{i<=a}(1 - x_i^(q-1)) * g(x_{a+1}, x_{a+2}); the weight scales by q^(m-a-2)."""
    if g.m != 2 or g.field.q != q:
        raise ValueError("expected a two-variable polynomial over F_q")
    return _prefix(g.field, m, a) * embed(g, m, a)


def _default_family(b: int) -> str:
    return {2: "circle", 3: "triangle"}.get(b, "D")


def build_third_weight(q: int, m: int, a: int, b: int,
                       field: Optional[FieldSpec] = None) -> ReducedPoly:
    """
    Codeword of R_q(a(q-1)+b, m) of weight exactly W_3.

    Raises:
        NotExactCase: If the third weight is not known exactly.
        ClosedFormMismatch: If the built word does not have weight W_3.
    """
    params = decompose_r(q, m, a * (q - 1) + b)
    answer = third_weight(params)
    if not answer.exact:
        raise NotExactCase(
            f"third weight of R_{q}({params.r},{m}) is {answer.status.value} [{answer.provenance}]"
        )
    field = _field(q, field)
    if m == 1:
        f = _avoiding(field, 1, 0, _first(field, params.r - 2))
    elif params.b == 3 and m - params.a >= 3:
        f = _prefix(field, m, params.a)
        for i in range(params.a, params.a + 3):
            f = f * ReducedPoly.variable(field, m, i)
    else:
        g = build_third_weight_2var(q, params.b, _default_family(params.b), field=field)
        f = lift_two_variable(q, m, params.a, g)
    measured = weight(f)
    if measured != answer.value:
        raise ClosedFormMismatch(f"built word weighs {measured}, W_3 is {answer.value}")
    logger.debug(f"Third-weight word for R_{q}({params.r},{m}) [{answer.provenance}]")
    return f


CONSTRUCT_FAMILIES = ("third", "theorem3") + FAMILIES


def construct(family: str, q: int, m: int, a: int, b: int, branch: Optional[str] = None,
              field: Optional[FieldSpec] = None) -> dict:
    """
    Build a codeword of R_q(a(q-1)+b, m) and return its witness manifest.

    Args:
        family: "third" for the exact third-weight word, "theorem3" for an
            upper-bound branch witness, or a two-variable family lifted
            behind the first a variables.
        branch: Branch id for "theorem3"; the first covering branch by default.

    Raises:
        ParamSideCondition: If the family is unknown or out of range.
        NotExactCase: For "third" when W_3 is not known exactly.
        BranchRangeViolation: For "theorem3" outside the branch ranges.
    """
    params = {"q": q, "m": m, "a": a, "b": b}
    if family == "third":
        f = build_third_weight(q, m, a, b, field=field)
        answer = third_weight(decompose_r(q, m, a * (q - 1) + b))
        manifest = witness_manifest(family, params, answer.value, f, answer.provenance)
        manifest["notes"] = [PRODUCT_INDEX_NOTE]
        return manifest
    if family == "theorem3":
        branch = branch or theorem3_branch(q, m, a, b)
        if branch is None:
            raise BranchRangeViolation(f"no branch covers q={q}, m={m}, a={a}, b={b}")
        f, claimed = build_theorem3_witness(q, m, a, b, branch, field=field)
        params["branch"] = branch
        return witness_manifest(family, params, claimed, f, branch_tag(branch))
    if family not in FAMILIES:
        raise ParamSideCondition(
            f"unknown family '{family}', expected one of {CONSTRUCT_FAMILIES}"
        )
    if m - a < 2:
        raise ParamSideCondition(f"a two-variable family needs m - a >= 2, got m={m}, a={a}")
    claimed = cb_value(q, b)
    g = build_third_weight_2var(q, b, family, field=field)
    f = lift_two_variable(q, m, a, g)
    return witness_manifest(family, params, claimed.value * q ** (m - a - 2), f,
                            claimed.provenance)


def witness_manifest(family: str, params: dict, claimed: int, f: ReducedPoly,
                     provenance: str) -> dict:
    """The JSON manifest of a built codeword, with its measured weight."""
    return {
        "family": family,
        "params": params,
        "claimed_weight": claimed,
        "measured_weight": weight(f),
        "provenance": provenance,
        "polynomial": to_json(f),
    }


# Lines in the affine plane


@dataclass(frozen=True)
class Line2:
    """The line a*x + b*y = c, normalised so the leading nonzero of (a, b) is 1."""

    a: int
    b: int
    c: int
    field: FieldSpec = dc_field(compare=False, repr=False)

    @classmethod
    def of(cls, field: FieldSpec, a: int, b: int, c: int) -> "Line2":
        if a == 0 and b == 0:
            raise ValueError("(a, b) = (0, 0) does not define a line")
        scale = field.inv(a if a else b)
        return cls(field.mul(a, scale), field.mul(b, scale), field.mul(c, scale), field)

    @classmethod
    def from_points(cls, field: FieldSpec, p1: Sequence[int], p2: Sequence[int]) -> "Line2":
        dx, dy = field.sub(p2[0], p1[0]), field.sub(p2[1], p1[1])
        if dx == 0 and dy == 0:
            raise ValueError("two distinct points are needed")
        a, b = dy, field.neg(dx)
        c = field.add(field.mul(a, p1[0]), field.mul(b, p1[1]))
        return cls.of(field, a, b, c)

    def parallel(self, other: "Line2") -> bool:
        return (self.a, self.b) == (other.a, other.b)

    def contains(self, point: Sequence[int]) -> bool:
        f = self.field
        return f.add(f.mul(self.a, point[0]), f.mul(self.b, point[1])) == self.c

    def meet(self, other: "Line2") -> Optional[Tuple[int, int]]:
        """Intersection point, or None for parallel lines."""
        f = self.field
        det = f.sub(f.mul(self.a, other.b), f.mul(other.a, self.b))
        if det == 0:
            return None
        inv = f.inv(det)
        x = f.mul(f.sub(f.mul(self.c, other.b), f.mul(other.c, self.b)), inv)
        y = f.mul(f.sub(f.mul(self.a, other.c), f.mul(other.a, self.c)), inv)
        return x, y

    def polynomial(self) -> ReducedPoly:
        return linear_form(self.field, 2, [self.a, self.b], self.field.neg(self.c))

    def mask(self):
        """Boolean incidence vector over the points of F_q^2."""
        return truth_table(self.polynomial()) == 0


def all_lines(field: FieldSpec) -> List[Line2]:
    """Every line of F_q^2 in canonical order: (a, b) normalised, then c."""
    directions = [(0, 1)] + [(1, b) for b in field.elements()]
    return [Line2(a, b, c, field) for a, b in directions for c in field.elements()]


def _parallel_classes(lines: Sequence[Line2]) -> List[List[Line2]]:
    classes = {}
    for line in lines:
        classes.setdefault((line.a, line.b), []).append(line)
    return sorted(classes.values(), key=len, reverse=True)


def _concurrent(lines: Sequence[Line2]) -> bool:
    point = None
    for i, first in enumerate(lines):
        for second in lines[i + 1:]:
            meet = first.meet(second)
            if meet is None:
                return False
            point = point or meet
    return point is not None and all(line.contains(point) for line in lines)


def classify_line_configuration(lines: Sequence[Line2]) -> str:
    """
    Configuration tag A_b ... G_b of b distinct lines, first match in order A..G.

    Raises:
        DuplicateLine: If two lines coincide.
    """
    lines = list(lines)
    b = len(lines)
    if b < 3:
        raise ValueError(f"at least 3 lines are needed, got {b}")
    if len(set(lines)) != b:
        raise DuplicateLine("line configuration contains a repeated line")

    classes = _parallel_classes(lines)
    largest = classes[0]
    if len(largest) == b:
        return f"A_{b}"
    if len(largest) == b - 1:
        return f"B_{b}"
    if _concurrent(lines):
        return f"C_{b}"
    if b >= 4:
        if len(largest) == b - 2:
            others = [line for line in lines if line not in largest]
            first, second = others
            if first.parallel(second):
                return f"D_{b}"
            meet = first.meet(second)
            if any(line.contains(meet) for line in largest):
                return f"E_{b}"
        for i, candidate in enumerate(lines):
            rest = lines[:i] + lines[i + 1:]
            if _concurrent(rest) and any(candidate.parallel(line) for line in rest):
                return f"F_{b}"
    return f"G_{b}"


class Constructors(ComponentBase):
    """Codeword construction keywords."""

    def theorem3_witness(self, q: int, m: int, a: int, b: int, branch: str = None) -> dict:
        """
        Build the witness of an upper-bound branch and measure it.

        Returns:
            The witness manifest.
        """
        return construct("theorem3", int(q), int(m), int(a), int(b), branch)

    def third_weight_word(self, q: int, m: int, a: int, b: int) -> dict:
        return construct("third", int(q), int(m), int(a), int(b))

    def two_variable_word(self, q: int, b: int, family: str) -> dict:
        f = build_third_weight_2var(int(q), int(b), family)
        claimed = cb_value(int(q), int(b))
        return witness_manifest(family, {"q": int(q), "b": int(b)}, claimed.value, f,
                                claimed.provenance)

    def classify_lines(self, *lines) -> str:
        """
        Classify lines given as [a, b, c] triples over the current field.

        Example:
            | ${tag}= | Classify Lines | [1, 0, 0] | [1, 0, 1] | [0, 1, 0] | [0, 1, 1] |
        """
        field = self.field()
        return classify_line_configuration([Line2.of(field, *map(int, l)) for l in lines])
