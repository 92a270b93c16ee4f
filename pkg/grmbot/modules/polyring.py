"""
Reduced Polynomial Ring Module

This module implements the algebra of functions F_q^m -> F_q through their
reduced polynomial representatives (every exponent at most q-1). Reduction is
eager: every constructor and operation returns a canonical ReducedPoly, so
equality of polynomials is equality of functions.

Truth tables list values at all points of F_q^m in lexicographic order under
the canonical element enumeration, last coordinate varying fastest. They are
computed with numpy through the field lookup tables.
"""
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from grmbot.modules.gf import FieldSpec, determinant, field_make, inverse
from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import (
    DoesNotVanish,
    FieldMismatch,
    SingleVariable,
    SingularMatrix,
    UnsupportedField,
    VariableCountMismatch,
)
from grmbot.utils.helper import Budget

Exps = Tuple[int, ...]
NEG_INF = float("-inf")

RawTerms = Union[Mapping[Sequence[int], int], Iterable[Tuple[Sequence[int], int]]]


def reduce_exponent(v: int, q: int) -> int:
    """x^v as a function equals x^v' with v' <= q-1 (x^q = x)."""
    if v < q:
        return v
    return (v - 1) % (q - 1) + 1


def _check_ring(field: FieldSpec, m: int) -> None:
    if field.q < 3:
        raise UnsupportedField(f"q must be at least 3, got {field.q}")
    if m < 1:
        raise VariableCountMismatch(f"need at least one variable, got m={m}")


@dataclass(frozen=True)
class ReducedPoly:
    """Canonical polynomial: sorted (exps, coeff) pairs, no zero coefficients."""

    field: FieldSpec
    m: int
    terms: Tuple[Tuple[Exps, int], ...]

    # construction helpers

    @classmethod
    def zero(cls, field: FieldSpec, m: int) -> "ReducedPoly":
        _check_ring(field, m)
        return cls(field, m, ())

    @classmethod
    def constant(cls, field: FieldSpec, m: int, c: int) -> "ReducedPoly":
        return reduce(field, m, [((0,) * m, c)])

    @classmethod
    def variable(cls, field: FieldSpec, m: int, i: int) -> "ReducedPoly":
        """The coordinate function x_{i+1} (i is zero-based)."""
        if not 0 <= i < m:
            raise VariableCountMismatch(f"variable index {i} out of range for m={m}")
        exps = tuple(1 if j == i else 0 for j in range(m))
        return reduce(field, m, [(exps, 1)])

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(exps) for exps, _ in self.terms)

    def degree_in(self, i: int):
        if not self.terms:
            return NEG_INF
        return max(exps[i] for exps, _ in self.terms)

    # algebra

    def _compatible(self, other: "ReducedPoly") -> None:
        if not isinstance(other, ReducedPoly):
            raise TypeError(f"expected ReducedPoly, got {type(other).__name__}")
        if self.field != other.field or self.m != other.m:
            raise FieldMismatch(
                f"cannot combine polynomials over F_{self.field.q}^{self.m} "
                f"and F_{other.field.q}^{other.m}"
            )

    def __add__(self, other: "ReducedPoly") -> "ReducedPoly":
        self._compatible(other)
        return reduce(self.field, self.m, list(self.terms) + list(other.terms))

    def __neg__(self) -> "ReducedPoly":
        return self.scale(self.field.neg(1))

    def __sub__(self, other: "ReducedPoly") -> "ReducedPoly":
        return self + (-other)

    def __mul__(self, other: "ReducedPoly") -> "ReducedPoly":
        self._compatible(other)
        field, q = self.field, self.field.q
        out: Dict[Exps, int] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                exps = tuple(reduce_exponent(x + y, q) for x, y in zip(ea, eb))
                out[exps] = field.add(out.get(exps, 0), field.mul(ca, cb))
        return reduce(field, self.m, out)

    def __pow__(self, n: int) -> "ReducedPoly":
        result = ReducedPoly.constant(self.field, self.m, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> "ReducedPoly":
        field = self.field
        return reduce(field, self.m, [(exps, field.mul(c, coeff)) for exps, coeff in self.terms])

    # evaluation

    def evaluate(self, point: Sequence[int]) -> int:
        return evaluate(self, point)

    def truth_table(self, budget: Optional[int] = None) -> np.ndarray:
        return truth_table(self, budget)

    def weight(self, budget: Optional[int] = None) -> int:
        return weight(self, budget)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.terms:
            factors = [f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                       for i, e in enumerate(exps) if e]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts)


def reduce(field: FieldSpec, m: int, raw: RawTerms) -> ReducedPoly:
    """
    Bring a raw term collection into reduced canonical form.

    Args:
        field: The coefficient field.
        m: Number of variables.
        raw: Mapping or iterable of (exponents, coefficient) pairs. Exponents
            may exceed q-1 and monomials may repeat; coefficients are
            element codes.

    Returns:
        The ReducedPoly with exponents reduced and like terms combined.

    Raises:
        VariableCountMismatch: If an exponent vector does not have length m.
        UnsupportedField: If q < 3.
    """
    _check_ring(field, m)
    pairs = raw.items() if isinstance(raw, Mapping) else raw
    q = field.q
    acc: Dict[Exps, int] = {}
    for exps, coeff in pairs:
        if len(exps) != m:
            raise VariableCountMismatch(
                f"monomial {tuple(exps)} does not have {m} exponents"
            )
        if any(int(v) < 0 for v in exps):
            raise ValueError(f"negative exponent in {tuple(exps)}")
        key = tuple(reduce_exponent(int(v), q) for v in exps)
        acc[key] = field.add(acc.get(key, 0), int(coeff))
    terms = tuple(sorted((k, c) for k, c in acc.items() if c))
    return ReducedPoly(field, m, terms)


def degree(f: ReducedPoly):
    return f.degree()


def evaluate(f: ReducedPoly, point: Sequence[int]) -> int:
    if len(point) != f.m:
        raise VariableCountMismatch(f"point has {len(point)} coordinates, expected {f.m}")
    field = f.field
    total = 0
    for exps, coeff in f.terms:
        value = coeff
        for x, e in zip(point, exps):
            if e:
                value = field.mul(value, field.pow(x, e))
        total = field.add(total, value)
    return total


@lru_cache(maxsize=64)
def point_coordinates(q: int, m: int) -> np.ndarray:
    """Array of shape (m, q^m): coordinates of every point in canonical order."""
    coords = np.indices((q,) * m).reshape(m, -1)
    dtype = np.uint8 if q <= 256 else np.uint16
    coords = coords.astype(dtype)
    coords.setflags(write=False)
    return coords


@lru_cache(maxsize=64)
def _power_table(field: FieldSpec) -> np.ndarray:
    table = field.power_table()
    table.setflags(write=False)
    return table


def monomial_table(field: FieldSpec, m: int, exps: Sequence[int]) -> np.ndarray:
    """Truth table of the monomial with the given exponents."""
    coords = point_coordinates(field.q, m)
    powers = _power_table(field)
    values = np.ones(coords.shape[1], dtype=field.mul_table.dtype)
    for i, e in enumerate(exps):
        if e:
            values = field.mul_table[values, powers[coords[i], e]]
    return values


def truth_table(f: ReducedPoly, budget: Optional[int] = None) -> np.ndarray:
    """
    Values of f at every point of F_q^m in canonical point order.

    Raises:
        SizeBudgetExceeded: If q^m exceeds the points budget.
    """
    field, m = f.field, f.m
    _check_ring(field, m)
    n_points = field.q**m
    Budget.check_points(n_points, budget)
    if not field.has_tables:
        points = itertools.product(range(field.q), repeat=m)
        return np.array([evaluate(f, pt) for pt in points], dtype=np.uint16)

    acc = np.zeros(n_points, dtype=field.add_table.dtype)
    for exps, coeff in f.terms:
        values = monomial_table(field, m, exps)
        if coeff != 1:
            values = field.mul_table[coeff, values]
        acc = field.add_table[acc, values]
    return acc


def weight(f: ReducedPoly, budget: Optional[int] = None) -> int:
    if f.is_zero():
        return 0
    return int(np.count_nonzero(truth_table(f, budget)))


@lru_cache(maxsize=32)
def _inverse_vandermonde(field: FieldSpec) -> np.ndarray:
    powers = _power_table(field)
    inv = np.array(inverse(field, powers.tolist()), dtype=field.mul_table.dtype)
    inv.setflags(write=False)
    return inv


def from_truth_table(field: FieldSpec, m: int, values: Sequence[int]) -> ReducedPoly:
    """
    The unique reduced polynomial with the given truth table.

    Coefficients come from applying the inverse Vandermonde matrix of the
    canonical element order along each coordinate axis.
    """
    _check_ring(field, m)
    field.require_tables()
    q = field.q
    arr = np.asarray(values, dtype=field.add_table.dtype)
    if arr.size != q**m:
        raise VariableCountMismatch(f"expected {q**m} values, got {arr.size}")
    arr = arr.reshape((q,) * m)
    vinv = _inverse_vandermonde(field)
    for axis in range(m):
        moved = np.moveaxis(arr, axis, -1)
        flat = moved.reshape(-1, q)
        out = np.zeros_like(flat)
        for j in range(q):
            contrib = field.mul_table[flat[:, j][:, None], vinv[None, :, j]]
            out = field.add_table[out, contrib]
        arr = np.moveaxis(out.reshape(moved.shape), -1, axis)
    nonzero = np.argwhere(arr)
    terms = [(tuple(int(v) for v in idx), int(arr[tuple(idx)])) for idx in nonzero]
    return reduce(field, m, terms)


def restrict(f: ReducedPoly, lam: int) -> ReducedPoly:
    """Substitute x_1 = lam; the result lives in the m-1 remaining variables."""
    if f.m < 2:
        raise SingleVariable("restriction needs at least two variables")
    field = f.field
    terms = [
        (exps[1:], field.mul(coeff, field.pow(lam, exps[0])))
        for exps, coeff in f.terms
    ]
    return reduce(field, f.m - 1, terms)


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix.x + shift over F_q."""

    matrix: Tuple[Tuple[int, ...], ...]
    shift: Tuple[int, ...]

    @classmethod
    def identity(cls, m: int) -> "AffineMap":
        return cls(tuple(tuple(int(i == j) for j in range(m)) for i in range(m)), (0,) * m)

    @classmethod
    def translation(cls, m: int, shift: Sequence[int]) -> "AffineMap":
        return cls(cls.identity(m).matrix, tuple(int(s) for s in shift))

    @classmethod
    def random(cls, field: FieldSpec, m: int, rng: np.random.Generator) -> "AffineMap":
        while True:
            matrix = tuple(tuple(int(x) for x in row)
                           for row in rng.integers(0, field.q, size=(m, m)))
            if determinant(field, matrix):
                shift = tuple(int(x) for x in rng.integers(0, field.q, size=m))
                return cls(matrix, shift)

    def apply_points(self, field: FieldSpec, coords: np.ndarray) -> np.ndarray:
        """Image of a (m, N) coordinate array."""
        m = len(self.shift)
        out = np.empty_like(coords)
        for i in range(m):
            acc = np.full(coords.shape[1], self.shift[i], dtype=coords.dtype)
            for j in range(m):
                if self.matrix[i][j]:
                    acc = field.add_table[acc, field.mul_table[self.matrix[i][j], coords[j]]]
            out[i] = acc
        return out


def point_index(q: int, coords: np.ndarray) -> np.ndarray:
    """Canonical index of each point of a (m, N) coordinate array."""
    index = np.zeros(coords.shape[1], dtype=np.int64)
    for row in coords:
        index = index * q + row
    return index


def compose_affine(f: ReducedPoly, T: AffineMap) -> ReducedPoly:
    """
    Return reduce(f o T).

    Raises:
        SingularMatrix: If the linear part of T is not invertible.
        VariableCountMismatch: If T does not act on F_q^m.
    """
    field, m = f.field, f.m
    if len(T.shift) != m or len(T.matrix) != m:
        raise VariableCountMismatch(f"affine map does not act on F_q^{m}")
    if determinant(field, T.matrix) == 0:
        raise SingularMatrix("affine map has a singular linear part")
    if f.is_zero():
        return f
    values = truth_table(f)
    image = T.apply_points(field, point_coordinates(field.q, m))
    return from_truth_table(field, m, values[point_index(field.q, image)])


def factor_hyperplane(f: ReducedPoly, w: int) -> ReducedPoly:
    """
    Peel the factor (x_1 - w) from a polynomial vanishing on x_1 = w.

    Returns:
        g with f = (x_1 - w) g after reduction.

    Raises:
        DoesNotVanish: If f is not identically zero on the hyperplane.
    """
    field, m = f.field, f.m
    if m == 1:
        vanishes = evaluate(f, (w,)) == 0
    else:
        vanishes = restrict(f, w).is_zero()
    if not vanishes:
        raise DoesNotVanish(f"polynomial does not vanish on x_1 = {w}")
    shift = [0] * m
    shift[0] = w
    moved = compose_affine(f, AffineMap.translation(m, shift))
    lowered = reduce(field, m, [((exps[0] - 1,) + exps[1:], c) for exps, c in moved.terms])
    shift[0] = field.neg(w)
    return compose_affine(lowered, AffineMap.translation(m, shift))


def poly_arith(op: str, *operands) -> ReducedPoly:
    """add, mul (any number of polynomials) or scale (polynomial, element)."""
    if op == "scale":
        poly, c = operands
        return poly.scale(int(c))
    if op not in ("add", "mul") or not operands:
        raise ValueError(f"Unknown polynomial operation '{op}'")
    result = operands[0]
    for other in operands[1:]:
        result = result + other if op == "add" else result * other
    return result


def linear_form(field: FieldSpec, m: int, coefficients: Sequence[int], constant: int = 0) -> ReducedPoly:
    """sum_i c_i x_i + constant."""
    if len(coefficients) != m:
        raise VariableCountMismatch(f"expected {m} coefficients, got {len(coefficients)}")
    terms = [(tuple(int(i == j) for j in range(m)), c) for i, c in enumerate(coefficients)]
    terms.append(((0,) * m, constant))
    return reduce(field, m, terms)


def to_json(f: ReducedPoly) -> dict:
    field = f.field
    return {
        "p": field.p,
        "e": field.e,
        "modulus": list(field.modulus),
        "m": f.m,
        "terms": [{"exps": list(exps), "coeff": coeff} for exps, coeff in f.terms],
    }


def from_json(data: Union[str, dict]) -> ReducedPoly:
    if isinstance(data, str):
        data = json.loads(data)
    field = field_make(data["p"], data["e"], data.get("modulus"))
    q = field.q
    terms = []
    for term in data["terms"]:
        coeff = int(term["coeff"])
        if not 1 <= coeff < q:
            raise ValueError(f"coefficient {coeff} outside [1, {q})")
        terms.append((tuple(term["exps"]), coeff))
    return reduce(field, int(data["m"]), terms)


class Polyring(ComponentBase):
    """Polynomial keywords over the current field."""

    def polynomial(self, terms: list, m: int, alias: str = None) -> ReducedPoly:
        """
        Build a reduced polynomial from [[exps, coeff], ...].

        Args:
            terms: List of (exponent list, coefficient code) pairs.
            m: Number of variables.
            alias: Field alias, defaults to the current field.

        Returns:
            The reduced polynomial.
        """
        return reduce(self.field(alias), int(m), [(tuple(e), int(c)) for e, c in terms])

    def weight_of(self, poly) -> int:
        """Hamming weight of a ReducedPoly or of its JSON form."""
        if not isinstance(poly, ReducedPoly):
            poly = from_json(poly)
        return weight(poly)

    def degree_of(self, poly):
        if not isinstance(poly, ReducedPoly):
            poly = from_json(poly)
        return degree(poly)

    def truth_table_of(self, poly) -> List[int]:
        if not isinstance(poly, ReducedPoly):
            poly = from_json(poly)
        return [int(v) for v in truth_table(poly)]
