"""
Finite Field Module

This module provides exact arithmetic in F_q for q = p^e. Elements are integer
codes in [0, q): the base-p digits of a code are the coefficients (constant
term first) of the element in the power basis of the field modulus. The code
order 0, 1, ..., q-1 is the canonical element enumeration used for default
parameters and truth-table point order everywhere in grmbot.

For q <= 256 the addition, negation, multiplication and inverse tables are
precomputed with numpy at construction time; the enumeration kernels are
table-lookup bound. Larger fields (up to 2^16) fall back to digit-vector
polynomial arithmetic for scalar operations.
"""
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from robot.api import logger
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import (
    DegreeMismatch,
    DivisionByZero,
    NonPrimeP,
    ReducibleModulus,
    SingularMatrix,
    UnsupportedField,
)

FElem = int

MAX_ORDER = 2**16
TABLE_LIMIT = 256

# Constant term first.
DEFAULT_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 1, 1),
    27: (1, 2, 0, 1),
}


class FieldSpec:
    """
    A finite field F_q with an explicit modulus.

    Instances are immutable and compare equal when p, e and the modulus
    agree. They pickle by parameters, so worker processes rebuild (and cache)
    their own tables.
    """

    def __init__(self, p: int, e: int, modulus: Tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(modulus)
        self._weights = p ** np.arange(e, dtype=np.int64)
        self.has_tables = self.q <= TABLE_LIMIT
        if self.has_tables:
            self._build_tables()

    def _build_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        codes = np.arange(q, dtype=np.int64)
        digits = (codes[:, None] // self._weights[None, :]) % p

        add_digits = (digits[:, None, :] + digits[None, :, :]) % p
        neg_digits = (-digits) % p

        # shifted[j][a] holds the digits of a * x^j reduced mod the modulus
        low = np.array(self.modulus[:e], dtype=np.int64)
        shifted = [digits]
        for _ in range(1, e):
            prev = shifted[-1]
            top = prev[:, e - 1]
            nxt = np.zeros_like(prev)
            nxt[:, 1:] = prev[:, :-1]
            nxt = (nxt - top[:, None] * low[None, :]) % p
            shifted.append(nxt)
        stacked = np.stack(shifted)
        mul_digits = np.einsum("bj,jak->abk", digits, stacked) % p

        dtype = np.uint8 if q <= 256 else np.uint16
        self.add_table = (add_digits @ self._weights).astype(dtype)
        self.neg_table = (neg_digits @ self._weights).astype(dtype)
        self.mul_table = (mul_digits @ self._weights).astype(dtype)
        self.sub_table = self.add_table[:, self.neg_table]
        inv = np.zeros(q, dtype=dtype)
        inv[1:] = np.argmax(self.mul_table[1:] == 1, axis=1)
        self.inv_table = inv
        self.digits = digits
        for table in (self.add_table, self.neg_table, self.mul_table,
                      self.sub_table, self.inv_table, self.digits):
            table.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (field_make, (self.p, self.e, list(self.modulus)))

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    # scalar arithmetic

    def _check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise ValueError(f"{x} is not an element code of F_{self.q}")
        return x

    def _to_digits(self, x: int) -> List[int]:
        return [(x // self.p**i) % self.p for i in range(self.e)]

    def _from_digits(self, digits: Sequence[int]) -> int:
        return sum(int(d) * self.p**i for i, d in enumerate(digits))

    def _poly_mul(self, x: int, y: int) -> int:
        p, e = self.p, self.e
        a, b = self._to_digits(x), self._to_digits(y)
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for deg in range(2 * e - 2, e - 1, -1):
            coeff = prod[deg]
            if coeff:
                for i in range(e):
                    prod[deg - e + i] = (prod[deg - e + i] - coeff * self.modulus[i]) % p
                prod[deg] = 0
        return self._from_digits(prod[:e])

    def add(self, x: FElem, y: FElem) -> FElem:
        x, y = self._check(x), self._check(y)
        if self.has_tables:
            return int(self.add_table[x, y])
        a, b = self._to_digits(x), self._to_digits(y)
        return self._from_digits([(u + v) % self.p for u, v in zip(a, b)])

    def neg(self, x: FElem) -> FElem:
        x = self._check(x)
        if self.has_tables:
            return int(self.neg_table[x])
        return self._from_digits([(-u) % self.p for u in self._to_digits(x)])

    def sub(self, x: FElem, y: FElem) -> FElem:
        return self.add(x, self.neg(y))

    def mul(self, x: FElem, y: FElem) -> FElem:
        x, y = self._check(x), self._check(y)
        if self.has_tables:
            return int(self.mul_table[x, y])
        return self._poly_mul(x, y)

    def pow(self, x: FElem, n: int) -> FElem:
        x, n = self._check(x), int(n)
        if n < 0:
            return self.pow(self.inv(x), -n)
        result, base = 1, x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, x: FElem) -> FElem:
        x = self._check(x)
        if x == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        if self.has_tables:
            return int(self.inv_table[x])
        return self.pow(x, self.q - 2)

    def div(self, x: FElem, y: FElem) -> FElem:
        return self.mul(x, self.inv(y))

    def is_square(self, x: FElem) -> bool:
        x = self._check(x)
        if x == 0 or self.p == 2:
            return True
        return self.pow(x, (self.q - 1) // 2) == 1

    def elements(self) -> List[FElem]:
        return list(range(self.q))

    def require_tables(self) -> None:
        if not self.has_tables:
            raise UnsupportedField(
                f"vectorised operations need q <= {TABLE_LIMIT}, got {self.q}"
            )

    def power_table(self) -> np.ndarray:
        """Array t with t[x, k] = x^k for 0 <= k <= q-1 (and 0^0 = 1)."""
        self.require_tables()
        table = np.zeros((self.q, self.q), dtype=self.mul_table.dtype)
        table[:, 0] = 1
        for k in range(1, self.q):
            table[:, k] = self.mul_table[table[:, k - 1], np.arange(self.q)]
        return table


def _poly_value_mod_p(coeffs: Sequence[int], x: int, p: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = (value * x + c) % p
    return value


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    if any(_poly_value_mod_p(coeffs, x, p) == 0 for x in range(p)):
        return False
    return bool(gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ))


def default_modulus(p: int, e: int) -> Tuple[int, ...]:
    """
    The documented default modulus for F_{p^e}.

    Orders in DEFAULT_MODULI use the table; any other order uses the first
    monic irreducible polynomial by increasing code of its lower coefficients.
    """
    q = p**e
    if e == 1:
        return (0, 1)
    if q in DEFAULT_MODULI:
        return DEFAULT_MODULI[q]
    for code in range(p**e):
        lower = [(code // p**i) % p for i in range(e)]
        candidate = tuple(lower) + (1,)
        if _is_irreducible(candidate, p):
            return candidate
    raise ReducibleModulus(f"no irreducible polynomial of degree {e} over F_{p}")


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: Tuple[int, ...]) -> FieldSpec:
    logger.debug(f"Building F_{p**e} with modulus {list(modulus)}")
    return FieldSpec(p, e, modulus)


def field_make(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Build (or fetch from cache) a validated field.

    Args:
        p: Prime characteristic.
        e: Extension degree, at least 1.
        modulus: Coefficients of a monic degree-e polynomial, constant term
            first. Ignored when e = 1; defaults to default_modulus(p, e).

    Returns:
        The FieldSpec for F_{p^e}.

    Raises:
        NonPrimeP: If p is not prime.
        DegreeMismatch: If e < 1 or the modulus does not have degree e or is
            not monic.
        ReducibleModulus: If the modulus has a root or fails irreducibility.
        UnsupportedField: If p^e exceeds 2^16.
    """
    p, e = int(p), int(e)
    if not isprime(p):
        raise NonPrimeP(f"{p} is not prime")
    if e < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_ORDER:
        raise UnsupportedField(f"fields larger than {MAX_ORDER} are not supported")
    if e == 1:
        return _cached_field(p, 1, (0, 1))
    if modulus is None:
        return _cached_field(p, e, default_modulus(p, e))

    coeffs = tuple(int(c) for c in modulus)
    if len(coeffs) != e + 1:
        raise DegreeMismatch(
            f"modulus must have {e + 1} coefficients for degree {e}, got {len(coeffs)}"
        )
    if any(not 0 <= c < p for c in coeffs):
        raise DegreeMismatch(f"modulus coefficients must lie in [0, {p})")
    if coeffs[-1] != 1:
        raise DegreeMismatch("modulus must be monic")
    if not _is_irreducible(coeffs, p):
        raise ReducibleModulus(f"{list(coeffs)} is reducible over F_{p}")
    return _cached_field(p, e, coeffs)


def field_for_order(q: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """Build F_q from its order; q must be a prime power."""
    q = int(q)
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise NonPrimeP(f"{q} is not a prime power")
    (p, e), = factors.items()
    return field_make(p, e, modulus)


def field_arith(spec: FieldSpec, op: str, *args) -> FElem:
    """Apply one of add, sub, mul, neg, inv, pow to element codes."""
    operations = {
        "add": spec.add,
        "sub": spec.sub,
        "mul": spec.mul,
        "neg": spec.neg,
        "inv": spec.inv,
        "pow": spec.pow,
        "div": spec.div,
    }
    if op not in operations:
        raise ValueError(f"Unknown field operation '{op}'")
    return operations[op](*args)


def elements(spec: FieldSpec) -> List[FElem]:
    return spec.elements()


# Linear algebra over F_q on lists of element codes.


def _echelon(spec: FieldSpec, rows: Sequence[Sequence[int]]):
    matrix = [[int(x) for x in row] for row in rows]
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    pivots = []
    swaps = 0
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if matrix[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
            swaps += 1
        inv = spec.inv(matrix[r][c])
        for i in range(r + 1, n_rows):
            if matrix[i][c]:
                factor = spec.mul(matrix[i][c], inv)
                matrix[i] = [
                    spec.sub(x, spec.mul(factor, y)) for x, y in zip(matrix[i], matrix[r])
                ]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return matrix, pivots, swaps


def rank(spec: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return len(_echelon(spec, rows)[1])


def determinant(spec: FieldSpec, matrix: Sequence[Sequence[int]]) -> FElem:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    reduced, pivots, swaps = _echelon(spec, matrix)
    if len(pivots) < n:
        return 0
    det = 1
    for i in range(n):
        det = spec.mul(det, reduced[i][i])
    return spec.neg(det) if swaps % 2 else det


def inverse(spec: FieldSpec, matrix: Sequence[Sequence[int]]) -> List[List[FElem]]:
    """Gauss-Jordan inverse; raises SingularMatrix when not invertible."""
    n = len(matrix)
    work = [[int(x) for x in row] + [1 if i == j else 0 for j in range(n)]
            for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if work[i][c]), None)
        if pivot is None:
            raise SingularMatrix("matrix is not invertible")
        work[c], work[pivot] = work[pivot], work[c]
        inv = spec.inv(work[c][c])
        work[c] = [spec.mul(inv, x) for x in work[c]]
        for i in range(n):
            if i != c and work[i][c]:
                factor = work[i][c]
                work[i] = [spec.sub(x, spec.mul(factor, y)) for x, y in zip(work[i], work[c])]
    return [row[n:] for row in work]


class Gf(ComponentBase):
    """Field arithmetic keywords on the current (or an aliased) field."""

    def arith(self, op: str, *args, alias: str = None) -> int:
        """
        Apply a field operation to element codes.

        Args:
            op: One of add, sub, mul, neg, inv, pow, div.
            *args: Element codes (and the exponent for pow).
            alias: Field alias, defaults to the current field.

        Returns:
            The resulting element code.
        """
        spec = self.field(alias)
        return field_arith(spec, op, *(int(a) for a in args))

    def elements(self, alias: str = None) -> list:
        """Return the canonical element enumeration of the field."""
        return elements(self.field(alias))

    def info(self, alias: str = None) -> dict:
        """Return p, e, q and the modulus of the field."""
        spec = self.field(alias)
        return {"p": spec.p, "e": spec.e, "q": spec.q, "modulus": list(spec.modulus)}
