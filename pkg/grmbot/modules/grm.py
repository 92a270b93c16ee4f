"""
Weight Formula Engine Module

This module computes the first three weights of the generalized Reed-Muller
code R_q(r, m) from closed forms. Every answer is a WeightAnswer carrying its
status (Exact, BoundOnly or Undefined) and a short provenance tag; PROVENANCE
maps each tag to the statement it relies on.

It also classifies quadratic polynomials over odd-characteristic fields by
rank and type of their homogenized form, which yields their weight without
enumerating the points.
"""
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from robot.api import logger
from sympy import factorint

from grmbot.modules.gf import FieldSpec
from grmbot.modules.polyring import ReducedPoly
from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import (
    BranchRangeViolation,
    EvenCharacteristic,
    NonPrimeP,
    NotQuadratic,
    OutOfRangeB,
    OutOfRangeR,
    UncoveredCase,
    UnsupportedField,
)

PROVENANCE = {
    "intro:min": "minimum weight (q-b)q^(m-a-1) of R_q(a(q-1)+b, m)",
    "app:second": "second weight from the second-largest hyperplane arrangement",
    "univariate": "R_q(r,1) contains every weight from q-r to q",
    "lem:c2": "third weight (q^2-q-1)q^(m-2) of R_q(2,m) from the quadratic classification",
    "lem:c3": "c_3 = q^2-3q+3 for q>=4: three pairwise meeting, non-concurrent lines",
    "lem:c2+adj": "lifted c_2 word of weight W_2+1 leaves no room below it",
    "lem:c3+adj": "lifted c_3 word of weight W_2+1 leaves no room below it",
    "thm:c4": "c_4 = (q-2)^2 for q>=9",
    "thm:c5": "c_5 = (q-3)(q-2) for q>=13",
    "thm:cb": "c_b = (q-b+2)(q-2) for q>=16 and 6<=b<(q+4)/3",
    "thm:w3": "W_3 = c_b q^(m-a-2) for q>=5, a<=m-2, 2<=b<=q-2 with c_b<(q-b+1)q",
    "thm:w3+lem:c3": "W_3 = c_3 for b=3, m-a=2, q>=5",
    "thm:w33": "W_3 = (q-1)^3 q^(m-a-3) for q>=5, b=3, m-a>=3",
    "thm:3hyp": "upper bound (q-2)(q-b+2)q^(m-a-2) for q>=5, 4<=b<=q/2+2",
    "thm:3hyp:b1q3": "upper bound 3^(m-a) for q=3, b=1",
    "thm:3hyp:b1q4": "upper bound 18*4^(m-a-2) for q=4, b=1",
    "thm:3hyp:b1top": "upper bound 2(q-1) for q in {3,4}, b=1, a=m-1",
    "thm:3hyp:b1": "upper bound 2(q-2)q^(m-a-1) for q>=5, b=1",
    "thm:3hyp:line": "upper bound (q-b+1)q^(m-a-1) from b-1 parallel hyperplanes",
    "thm:3hyp:cube": "upper bound (q-1)^3 q^(m-a-3) for b=3, a<=m-3",
    "thm:3hyp:b2q3": "upper bound 16*3^(m-a-3) for q=3, b=2",
    "lem:quad": "weight of a quadratic from the ranks and types of its forms",
    "range": "r outside 2 <= r <= m(q-1)-2 leaves no third weight to report",
    "uncovered": "no known statement covers these parameters",
}

INEQUALITY_NOTE = "exactness used c_b<(q-b+1)q"


class Status(str, Enum):
    EXACT = "Exact"
    BOUND_ONLY = "BoundOnly"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class CodeParams:
    q: int
    m: int
    r: int
    a: int
    b: int
    t: int
    s: int


@dataclass(frozen=True)
class WeightAnswer:
    value: Optional[int]
    status: Status
    provenance: str
    notes: Tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        return self.status is Status.EXACT

    def to_json(self) -> dict:
        record = {
            "value": self.value,
            "status": self.status.value,
            "provenance": self.provenance,
        }
        if self.notes:
            record["notes"] = list(self.notes)
        return record


def _exact(value: int, tag: str, *notes: str) -> WeightAnswer:
    return WeightAnswer(int(value), Status.EXACT, tag, tuple(notes))


def _bound(value: int, tag: str, *notes: str) -> WeightAnswer:
    return WeightAnswer(int(value), Status.BOUND_ONLY, tag, tuple(notes))


def _undefined(tag: str) -> WeightAnswer:
    return WeightAnswer(None, Status.UNDEFINED, tag)


def check_order(q: int) -> None:
    """Reject q = 2 and anything that is not a prime power."""
    if q == 2:
        raise UnsupportedField("only q >= 3 is supported")
    if q < 2 or len(factorint(q)) != 1:
        raise NonPrimeP(f"{q} is not a prime power")


def decompose_r(q: int, m: int, r: int) -> CodeParams:
    """
    Split r as a(q-1)+b (1<=b<=q-1) and as t(q-1)+s (0<=s<=q-2).

    Raises:
        UnsupportedField: If q = 2.
        OutOfRangeR: If r is outside 1..m(q-1) or m < 1.
    """
    q, m, r = int(q), int(m), int(r)
    check_order(q)
    if m < 1:
        raise OutOfRangeR(f"m must be at least 1, got {m}")
    if not 1 <= r <= m * (q - 1):
        raise OutOfRangeR(f"r must lie in 1..{m * (q - 1)}, got {r}")
    a, b = divmod(r - 1, q - 1)
    b += 1
    t, s = divmod(r, q - 1)
    return CodeParams(q, m, r, a, b, t, s)


def min_weight(params: CodeParams) -> WeightAnswer:
    q, m, a, b = params.q, params.m, params.a, params.b
    return _exact((q - b) * q ** (m - a - 1), "intro:min")


def second_weight(params: CodeParams) -> WeightAnswer:
    """
    Second weight q^m - N(second configuration).

    Raises:
        UncoveredCase: If (q, t, s) lies outside every known range.
    """
    q, m, r, t, s = params.q, params.m, params.r, params.t, params.s
    if m == 1:
        return _exact(q - r + 1, "univariate")
    if q >= 4:
        if 2 <= s <= q - 2 and t <= m - 2:
            return _exact((q - s + 1) * (q - 1) * q ** (m - t - 2), "app:second")
        if s == 1 and t <= m - 1:
            return _exact(q ** (m - t), "app:second")
        if s == 0 and 1 <= t <= m - 1:
            return _exact(2 * (q - 1) * q ** (m - t - 1), "app:second")
    else:
        if s == 0 and 1 <= t <= m - 1:
            return _exact(4 * 3 ** (m - t - 1), "app:second")
        if s == 1 and 1 <= t <= m - 2:
            return _exact(8 * 3 ** (m - t - 2), "app:second")
        if s == 1 and t == m - 1:
            return _exact(3, "app:second")
    raise UncoveredCase(f"no second-weight statement for q={q}, m={m}, r={r}")


def cb_value(q: int, b: int) -> WeightAnswer:
    """
    c_b, the third weight of R_q(b, 2).

    Raises:
        OutOfRangeB: Unless q >= 3 and 2 <= b <= q-1.
    """
    q, b = int(q), int(b)
    if q < 3 or not 2 <= b <= q - 1:
        raise OutOfRangeB(f"b must lie in 2..{q - 1} for q={q}, got {b}")
    if b == 2:
        return _exact(q * q - q - 1, "lem:c2")
    if b == 3 and q >= 4:
        return _exact(q * q - 3 * q + 3, "lem:c3")
    if b == 4 and q >= 9:
        return _exact((q - 2) ** 2, "thm:c4")
    if b == 5 and q >= 13:
        return _exact((q - 3) * (q - 2), "thm:c5")
    if b >= 6 and q >= 16 and 3 * b < q + 4:
        return _exact((q - b + 2) * (q - 2), "thm:cb")
    branch = theorem3_branch(q, 2, 0, b)
    if branch is None:
        return _undefined("uncovered")
    return _bound(theorem3_bound(branch, q, 2, 0, b), branch_tag(branch))


@dataclass(frozen=True)
class Branch:
    """One upper-bound statement: its range and its value."""

    name: str
    covers: Callable[[int, int, int, int], bool]
    value: Callable[[int, int, int, int], int] = dc_field(repr=False)


def _line_range(q, m, a, b):
    return (
        (q >= 7 and a <= m - 2 and (q + 1) // 2 + 2 <= b <= q - 1)
        or (q >= 4 and a <= m - 2 and b == 2)
        or (q >= 4 and a == m - 2 and b == 3)
        or (q == 3 and b == 2 and a in (0, m - 2))
    )


THEOREM3_BRANCHES: List[Branch] = [
    Branch("b1q3",
           lambda q, m, a, b: b == 1 and q == 3 and m >= 3 and 1 <= a <= m - 2,
           lambda q, m, a, b: 3 ** (m - a)),
    Branch("b1q4",
           lambda q, m, a, b: b == 1 and q == 4 and m >= 3 and 1 <= a <= m - 2,
           lambda q, m, a, b: 18 * 4 ** (m - a - 2)),
    Branch("b1top",
           lambda q, m, a, b: b == 1 and q in (3, 4) and a == m - 1 and a >= 1,
           lambda q, m, a, b: 2 * (q - 1)),
    Branch("b1",
           lambda q, m, a, b: b == 1 and q >= 5 and 1 <= a <= m - 1,
           lambda q, m, a, b: 2 * (q - 2) * q ** (m - a - 1)),
    Branch("main",
           lambda q, m, a, b: q >= 5 and 0 <= a <= m - 2 and 4 <= b <= q // 2 + 2,
           lambda q, m, a, b: (q - 2) * (q - b + 2) * q ** (m - a - 2)),
    Branch("line",
           lambda q, m, a, b: a >= 0 and _line_range(q, m, a, b),
           lambda q, m, a, b: (q - b + 1) * q ** (m - a - 1)),
    Branch("cube",
           lambda q, m, a, b: b == 3 and q >= 4 and m >= 3 and 0 <= a <= m - 3,
           lambda q, m, a, b: (q - 1) ** 3 * q ** (m - a - 3)),
    Branch("b2q3",
           lambda q, m, a, b: b == 2 and q == 3 and m >= 4 and 1 <= a <= m - 3,
           lambda q, m, a, b: 16 * 3 ** (m - a - 3)),
]

_BRANCHES_BY_NAME = {branch.name: branch for branch in THEOREM3_BRANCHES}


def branch_tag(name: str) -> str:
    return "thm:3hyp" if name == "main" else f"thm:3hyp:{name}"


def theorem3_branch(q: int, m: int, a: int, b: int) -> Optional[str]:
    """Name of the first upper-bound branch covering (q, m, a, b), if any."""
    for branch in THEOREM3_BRANCHES:
        if branch.covers(q, m, a, b):
            return branch.name
    return None


def theorem3_bound(name: str, q: int, m: int, a: int, b: int) -> int:
    """
    Value of the named upper-bound branch.

    Raises:
        BranchRangeViolation: If the branch does not cover (q, m, a, b).
    """
    if name not in _BRANCHES_BY_NAME:
        raise BranchRangeViolation(f"unknown branch '{name}'")
    branch = _BRANCHES_BY_NAME[name]
    if not branch.covers(q, m, a, b):
        raise BranchRangeViolation(
            f"branch '{name}' does not cover q={q}, m={m}, a={a}, b={b}"
        )
    return branch.value(q, m, a, b)


def _lifted_adjacent(params: CodeParams) -> Optional[WeightAnswer]:
    """Exact W_3 when a lifted c_2/c_3 word weighs exactly W_2 + 1."""
    q, m, a, b = params.q, params.m, params.a, params.b
    if b not in (2, 3) or not 1 <= a <= m - 2:
        return None
    cb = cb_value(q, b)
    if not cb.exact:
        return None
    try:
        w2 = second_weight(params).value
    except UncoveredCase:
        return None
    lifted = cb.value * q ** (m - a - 2)
    if lifted == w2 + 1:
        return _exact(lifted, f"lem:c{b}+adj")
    return None


def third_weight(params: CodeParams) -> WeightAnswer:
    """
    Third weight by the first matching rule.

    Exact answers come from the known theorems; otherwise the matching upper
    bound is returned as BoundOnly, or Undefined when nothing applies.
    """
    q, m, r, a, b = params.q, params.m, params.r, params.a, params.b
    if r < 2 or r > m * (q - 1) - 2:
        return _undefined("range")
    if m == 1:
        return _exact(q - r + 2, "univariate")
    if b == 2 and a == 0:
        return _exact((q * q - q - 1) * q ** (m - 2), "lem:c2")
    if b == 2 and 1 <= a <= m - 2 and q >= 5:
        return _exact((q * q - q - 1) * q ** (m - a - 2), "thm:w3", INEQUALITY_NOTE)
    if b == 3 and m - a >= 3 and q >= 5:
        notes = () if q >= 7 else ("supporting codeword classification is stated for q>=7",)
        return _exact((q - 1) ** 3 * q ** (m - a - 3), "thm:w33", *notes)
    if b == 3 and m - a == 2:
        if a == 0 and q >= 4:
            return _exact(q * q - 3 * q + 3, "lem:c3")
        if a >= 1 and q >= 5:
            return _exact(q * q - 3 * q + 3, "thm:w3+lem:c3", INEQUALITY_NOTE)
    if 4 <= b <= q - 2 and a <= m - 2 and q >= 5:
        cb = cb_value(q, b)
        if cb.exact and cb.value < (q - b + 1) * q:
            return _exact(cb.value * q ** (m - a - 2), "thm:w3",
                          INEQUALITY_NOTE, f"c_b from {cb.provenance}")
    adjacent = _lifted_adjacent(params)
    if adjacent is not None:
        return adjacent
    branch = theorem3_branch(q, m, a, b)
    if branch is not None:
        return _bound(theorem3_bound(branch, q, m, a, b), branch_tag(branch))
    return _undefined("uncovered")


def weight_answers(q: int, m: int, r: int) -> Dict[str, WeightAnswer]:
    """W_1, W_2 and W_3 of R_q(r, m); an uncovered W_2 is Undefined."""
    params = decompose_r(q, m, r)
    try:
        w2 = second_weight(params)
    except UncoveredCase:
        w2 = _undefined("uncovered")
    return {"w1": min_weight(params), "w2": w2, "w3": third_weight(params)}


def answer_record(q: int, m: int, r: int) -> dict:
    """The JSON answer record for W_1, W_2 and W_3 of R_q(r, m)."""
    params = decompose_r(q, m, r)
    answers = weight_answers(q, m, r)
    w3 = answers["w3"]
    logger.info(f"R_{q}({r},{m}): W_3 {w3.status.value} {w3.value} [{w3.provenance}]")
    return {
        "q": params.q,
        "m": params.m,
        "r": params.r,
        "a": params.a,
        "b": params.b,
        "t": params.t,
        "s": params.s,
        "w1": answers["w1"].value,
        "w2": answers["w2"].value,
        "w3": w3.to_json(),
    }


# Quadratic classification


@dataclass(frozen=True)
class QuadraticClassification:
    r0: int
    w0: int
    R: int
    w: int


def _diagonalise(field: FieldSpec, matrix: List[List[int]]) -> Tuple[int, int]:
    """Rank and discriminant (product of the diagonal) of a symmetric matrix."""
    n = len(matrix)
    M = [list(row) for row in matrix]
    remaining = list(range(n))
    disc, rank = 1, 0
    while remaining:
        k = next((i for i in remaining if M[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in remaining for j in remaining
                         if i < j and M[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for col in range(n):
                M[i][col] = field.add(M[i][col], M[j][col])
            for row in range(n):
                M[row][i] = field.add(M[row][i], M[row][j])
            k = i
        d = M[k][k]
        disc = field.mul(disc, d)
        rank += 1
        remaining.remove(k)
        d_inv = field.inv(d)
        for l in remaining:
            if M[l][k]:
                c = field.mul(M[l][k], d_inv)
                for col in range(n):
                    M[l][col] = field.sub(M[l][col], field.mul(c, M[k][col]))
                for row in range(n):
                    M[row][l] = field.sub(M[row][l], field.mul(c, M[row][k]))
    return rank, disc


def _type_marker(field: FieldSpec, rank: int, disc: int) -> int:
    if rank % 2:
        return 1
    signed = field.neg(disc) if (rank // 2) % 2 else disc
    return 2 if field.is_square(signed) else 0


def quadratic_weight(f: ReducedPoly) -> Tuple[QuadraticClassification, int]:
    """
    Classify a polynomial of degree <= 2 and return its weight.

    Raises:
        NotQuadratic: If deg f > 2.
        EvenCharacteristic: If q is even.
    """
    field, m, q = f.field, f.m, f.field.q
    if f.degree() > 2:
        raise NotQuadratic(f"degree {f.degree()} polynomial is not quadratic")
    if field.p == 2:
        raise EvenCharacteristic("quadratic classification needs odd characteristic")

    half = field.inv(2)
    size = m + 1
    B = [[0] * size for _ in range(size)]
    for exps, coeff in f.terms:
        support = [i for i, e in enumerate(exps) if e]
        if not support:
            B[m][m] = coeff
        elif len(support) == 1 and exps[support[0]] == 1:
            i = support[0]
            B[i][m] = B[m][i] = field.mul(coeff, half)
        elif len(support) == 1:
            i = support[0]
            B[i][i] = coeff
        else:
            i, j = support
            B[i][j] = B[j][i] = field.mul(coeff, half)

    r0, disc0 = _diagonalise(field, [row[:m] for row in B[:m]])
    R, disc = _diagonalise(field, B)
    w0 = _type_marker(field, r0, disc0)
    w = _type_marker(field, R, disc)

    value = (q - 1) * q ** (m - 1)
    if r0 % 2 == 0:
        value += (w0 - 1) * q ** (m - r0 // 2 - 1)
    if R % 2 == 0:
        value -= (w - 1) * q ** (m - R // 2)
    return QuadraticClassification(r0, w0, R, w), value


class Grm(ComponentBase):
    """Weight formula keywords."""

    def weights(self, q: int, m: int, r: int) -> dict:
        """
        Return the W_1/W_2/W_3 answer record of R_q(r, m).

        Args:
            q: Field order.
            m: Number of variables.
            r: Degree bound.

        Returns:
            Dictionary with the decompositions and the three weights.
        """
        return answer_record(int(q), int(m), int(r))

    def third_weight_of(self, q: int, m: int, r: int) -> dict:
        return third_weight(decompose_r(int(q), int(m), int(r))).to_json()

    def c_b(self, q: int, b: int) -> dict:
        return cb_value(int(q), int(b)).to_json()

    def quadratic_weight_of(self, poly) -> dict:
        """Classification and weight of a quadratic ReducedPoly."""
        classification, value = quadratic_weight(poly)
        return {
            "r0": classification.r0,
            "w0": classification.w0,
            "R": classification.R,
            "w": classification.w,
            "weight": value,
        }
