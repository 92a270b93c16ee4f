"""
Exhaustive Oracles Module

This module computes ground truth by brute force:

- exhaustive_spectrum visits every codeword of R_q(r, m) and tallies weights,
  keeping the lexicographically smallest truth table for each weight;
- line_union_oracle and plane_union_oracle search all sets of distinct lines
  in F_q^2 (planes in F_q^3) and tally the sizes of their unions.

The spectrum kernel splits the coefficient vector into an outer odometer and
an inner block. The inner block is a precomputed table of all truth tables
over its positions; each outer step updates one base truth table by adding
delta * (monomial table) and combines it with the whole inner block by table
lookup. Outer ranges are independent shards run through the connectors.
"""
import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from robot.api import logger

from grmbot.modules.constructors import Line2, all_lines, classify_line_configuration
from grmbot.modules.gf import FieldSpec, field_for_order, rank
from grmbot.modules.polyring import monomial_table, point_coordinates
from grmbot.utils.engine import ComponentBase, run_tasks
from grmbot.utils.errors import OutOfRangeR
from grmbot.utils.helper import Budget, Hex

INNER_BLOCK_BYTES = 2**20


def monomial_basis(q: int, m: int, r: int) -> List[Tuple[int, ...]]:
    """Exponent vectors with entries <= q-1 and total <= r, in lexicographic order."""
    return [
        exps for exps in itertools.product(range(q), repeat=m) if sum(exps) <= r
    ]


@dataclass(frozen=True)
class _Kernel:
    n_outer: int
    scaled: np.ndarray
    inner: np.ndarray


@lru_cache(maxsize=8)
def _kernel(field: FieldSpec, m: int, r: int) -> _Kernel:
    q = field.q
    monomials = monomial_basis(q, m, r)
    tables = np.stack([monomial_table(field, m, exps) for exps in monomials])
    n_points = tables.shape[1]

    inner_len = 0
    while inner_len < len(monomials) and q ** (inner_len + 1) * n_points <= INNER_BLOCK_BYTES:
        inner_len += 1
    n_outer = len(monomials) - inner_len

    # scaled[k, c] = c * (truth table of monomial k)
    scaled = field.mul_table[np.arange(q)[None, :, None], tables[:, None, :]]
    inner = np.zeros((1, n_points), dtype=field.add_table.dtype)
    for k in range(n_outer, len(monomials)):
        inner = field.add_table[inner[:, None, :], scaled[k][None, :, :]].reshape(-1, n_points)
    logger.debug(
        f"Spectrum kernel q={q}, m={m}, r={r}: {len(monomials)} monomials, "
        f"{n_outer} outer, block of {inner.shape[0]}"
    )
    return _Kernel(n_outer, scaled[:n_outer].copy(), inner)


def _lexmin_row(rows: np.ndarray) -> np.ndarray:
    """Lexicographically smallest row, by successive column filtering."""
    candidates = np.arange(rows.shape[0])
    for col in range(rows.shape[1]):
        column = rows[candidates, col]
        candidates = candidates[column == column.min()]
        if len(candidates) == 1:
            break
    return rows[candidates[0]]


def _spectrum_shard(task) -> Tuple[Dict[int, int], Dict[int, tuple], int, int]:
    """Tally one contiguous range of the outer odometer."""
    field, m, r, start, stop, cap = task
    q = field.q
    kernel = _kernel(field, m, r)
    add = field.add_table
    n_points = kernel.inner.shape[1]

    digits = []
    rest = start
    for _ in range(kernel.n_outer):
        rest, digit = divmod(rest, q)
        digits.append(digit)
    digits.reverse()
    base = np.zeros(n_points, dtype=add.dtype)
    for k, c in enumerate(digits):
        if c:
            base = add[base, kernel.scaled[k, c]]

    counts = np.zeros(n_points + 1, dtype=np.int64)
    reps: Dict[int, tuple] = {}
    for index in range(start, stop):
        block = add[base[None, :], kernel.inner]
        weights = np.count_nonzero(block, axis=1)
        counts += np.bincount(weights, minlength=n_points + 1)
        for w in np.unique(weights):
            if cap is not None and w > cap:
                continue
            candidate = tuple(int(v) for v in _lexmin_row(block[weights == w]))
            if int(w) not in reps or candidate < reps[int(w)]:
                reps[int(w)] = candidate
        if index + 1 < stop:
            k = kernel.n_outer - 1
            while True:
                old = digits[k]
                new = (old + 1) % q
                digits[k] = new
                base = add[base, kernel.scaled[k, field.sub(new, old)]]
                if new:
                    break
                k -= 1

    above_cap = 0
    if cap is not None:
        above_cap = int(counts[cap + 1:].sum())
        counts = counts[:cap + 1]
    tallies = {int(w): int(c) for w, c in enumerate(counts) if c}
    visited = (stop - start) * kernel.inner.shape[0]
    logger.debug(f"Shard [{start}, {stop}) visited {visited} codewords")
    return tallies, reps, above_cap, visited


@dataclass(frozen=True)
class SpectrumResult:
    """Weights found by exhaustive enumeration, ascending, with lexmin representatives."""

    q: int
    m: int
    r: int
    distinct_weights: Tuple[Tuple[int, int], ...]
    representatives: Dict[int, tuple] = dc_field(compare=False)
    enumerated: int = 0
    above_cap: int = 0

    def weights(self) -> List[int]:
        return [w for w, _ in self.distinct_weights]

    def nonzero_weights(self, count: Optional[int] = None) -> List[int]:
        nonzero = [w for w in self.weights() if w]
        return nonzero if count is None else nonzero[:count]

    def count_of(self, w: int) -> int:
        return dict(self.distinct_weights).get(w, 0)

    def csv_rows(self) -> List[list]:
        return [
            [w, count, Hex.pack(self.representatives[w], self.q)]
            for w, count in self.distinct_weights
        ]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "r": self.r,
            "enumerated": self.enumerated,
            "above_cap": self.above_cap,
            "weights": [
                {"weight": w, "count": count,
                 "representative_hex": Hex.pack(self.representatives[w], self.q)}
                for w, count in self.distinct_weights
            ],
        }


def _shard_ranges(total: int, shards: int) -> List[Tuple[int, int]]:
    shards = max(1, min(int(shards), total))
    bounds = [total * i // shards for i in range(shards + 1)]
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def exhaustive_spectrum(q: int, m: int, r: int, max_distinct: Optional[int] = None,
                        weight_cap: Optional[int] = None, shards: int = 1, workers: int = 1,
                        budget: Optional[int] = None,
                        field: Optional[FieldSpec] = None) -> SpectrumResult:
    """
    Enumerate every codeword of R_q(r, m) and tally its weight.

    Args:
        q: Field order.
        m: Number of variables.
        r: Degree bound, 0 <= r <= m(q-1).
        max_distinct: Report only the smallest K nonzero weights.
        weight_cap: Tally weights above the cap only in above_cap.
        shards: Number of contiguous outer ranges.
        workers: Processes used to run the shards.
        budget: Codeword budget, overriding GRMW_BUDGET.
        field: Field to use, defaults to the default field of order q.

    Returns:
        The SpectrumResult, identical for any shard or worker count.

    Raises:
        BudgetExceeded: If q^(number of monomials) exceeds the budget.
        SizeBudgetExceeded: If q^m exceeds the points budget.
    """
    field = field or field_for_order(q)
    if m < 1 or not 0 <= r <= m * (q - 1):
        raise OutOfRangeR(f"r must lie in 0..{m * (q - 1)}, got {r}")
    n_monomials = len(monomial_basis(q, m, r))
    Budget.check_codewords(q**n_monomials, budget, what=f"R_{q}({r},{m}) enumeration")
    Budget.check_points(q**m)
    field.require_tables()

    kernel = _kernel(field, m, r)
    tasks = [
        (field, m, r, lo, hi, weight_cap)
        for lo, hi in _shard_ranges(q**kernel.n_outer, shards)
    ]
    logger.info(f"Enumerating R_{q}({r},{m}): {q**n_monomials} codewords in {len(tasks)} shards")

    counts: Dict[int, int] = {}
    reps: Dict[int, tuple] = {}
    above_cap = enumerated = 0
    for tallies, shard_reps, shard_above, visited in run_tasks(_spectrum_shard, tasks, workers):
        for w, c in tallies.items():
            counts[w] = counts.get(w, 0) + c
        for w, rep in shard_reps.items():
            if w not in reps or rep < reps[w]:
                reps[w] = rep
        above_cap += shard_above
        enumerated += visited

    weights = sorted(counts)
    if max_distinct is not None:
        nonzero = [w for w in weights if w][:max_distinct]
        weights = [w for w in weights if w == 0] + nonzero
    distinct = tuple((w, counts[w]) for w in weights)
    return SpectrumResult(q, m, r, distinct, {w: reps[w] for w in weights},
                          enumerated, above_cap)


# Union oracles


@dataclass(frozen=True)
class UnionSearchResult:
    """Distinct union sizes, descending, with multiplicities and one witness each."""

    q: int
    count: int
    top_sizes: Tuple[Tuple[int, int], ...]
    witnesses: Dict[int, tuple] = dc_field(compare=False)
    classes: Dict[int, str] = dc_field(compare=False, default_factory=dict)
    searched: int = 0

    def sizes(self) -> List[int]:
        return [size for size, _ in self.top_sizes]

    def nth_largest(self, n: int) -> Optional[int]:
        sizes = self.sizes()
        return sizes[n - 1] if len(sizes) >= n else None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "count": self.count,
            "searched": self.searched,
            "sizes": [
                {"size": size, "multiplicity": mult, "class": self.classes.get(size)}
                for size, mult in self.top_sizes
            ],
        }


def _union_search(incidence: np.ndarray, count: int, fix_first: bool,
                  budget: Optional[int], what: str):
    """
    Tally union sizes of all count-subsets of the rows of a 0/1 incidence matrix.

    The last member of each subset is handled for every candidate at once
    with one matrix-vector product against the uncovered points.
    """
    n = incidence.shape[0]
    if not 1 <= count <= n:
        raise ValueError(f"cannot choose {count} of {n} objects")
    total = math.comb(n - 1, count - 1) if fix_first else math.comb(n, count)
    Budget.check_codewords(total, budget, what=what)

    as_int = incidence.astype(np.int32)
    n_points = incidence.shape[1]
    tally = np.zeros(n_points + 1, dtype=np.int64)
    witnesses: Dict[int, tuple] = {}

    if fix_first:
        if count == 1:
            prefixes = iter([()])
        else:
            prefixes = ((0,) + combo for combo in itertools.combinations(range(1, n), count - 2))
    else:
        prefixes = itertools.combinations(range(n), count - 1)

    for prefix in prefixes:
        if fix_first and count == 1:
            candidates_start, candidates_stop = 0, 1
        else:
            candidates_start, candidates_stop = (prefix[-1] + 1 if prefix else 0), n
        if candidates_start >= candidates_stop:
            continue
        covered = incidence[list(prefix)].any(axis=0) if prefix else np.zeros(n_points, bool)
        sizes = int(covered.sum()) + as_int[candidates_start:candidates_stop] @ (~covered).astype(np.int32)
        batch = np.bincount(sizes, minlength=n_points + 1)
        tally += batch
        for size in np.flatnonzero(batch):
            if int(size) not in witnesses:
                last = candidates_start + int(np.argmax(sizes == size))
                witnesses[int(size)] = tuple(prefix) + (last,)

    top = tuple((int(size), int(tally[size])) for size in np.flatnonzero(tally)[::-1])
    return top, witnesses, total


@lru_cache(maxsize=16)
def _line_incidence(field: FieldSpec) -> Tuple[Tuple[Line2, ...], np.ndarray]:
    lines = tuple(all_lines(field))
    incidence = np.stack([line.mask() for line in lines])
    incidence.setflags(write=False)
    return lines, incidence


def line_union_oracle(q: int, b: int, fix_first_line: bool = True, budget: Optional[int] = None,
                      field: Optional[FieldSpec] = None) -> UnionSearchResult:
    """
    Union sizes of all sets of b distinct lines in F_q^2.

    With fix_first_line the first line is pinned to y = 0; the set of
    distinct sizes is unchanged and multiplicities count the pinned search.

    Raises:
        BudgetExceeded: If the search space exceeds the budget.
    """
    field = field or field_for_order(q)
    lines, incidence = _line_incidence(field)
    top, witnesses, searched = _union_search(
        incidence, b, fix_first_line, budget, f"{b}-line search over F_{q}"
    )
    classes = {}
    if b >= 3:
        classes = {
            size: classify_line_configuration([lines[i] for i in members])
            for size, members in witnesses.items()
        }
    logger.info(f"Line oracle q={q}, b={b}: {len(top)} distinct union sizes")
    return UnionSearchResult(q, b, top, witnesses, classes, searched)


@lru_cache(maxsize=8)
def _plane_incidence(field: FieldSpec):
    """Planes a.x = c of F_q^3, normals normalised, x_1 = 0 first."""
    q = field.q
    els = field.elements()
    normals = ([(1, b, c) for b in els for c in els]
               + [(0, 1, c) for c in els]
               + [(0, 0, 1)])
    coords = point_coordinates(q, 3)
    mul, add = field.mul_table, field.add_table
    planes, rows = [], []
    for normal in normals:
        values = add[add[mul[normal[0], coords[0]], mul[normal[1], coords[1]]],
                     mul[normal[2], coords[2]]]
        for c in els:
            planes.append(normal + (c,))
            rows.append(values == c)
    incidence = np.stack(rows)
    incidence.setflags(write=False)
    return tuple(planes), incidence


def classify_planes(field: FieldSpec, planes: Sequence[Sequence[int]]) -> str:
    """parallel, two-parallel, pencil, prism or general, for three distinct planes."""
    normals = [tuple(plane[:3]) for plane in planes]
    distinct_normals = len(set(normals))
    if distinct_normals == 1:
        return "parallel"
    if distinct_normals == 2:
        return "two-parallel"
    if rank(field, normals) == 3:
        return "general"
    return "pencil" if rank(field, [tuple(p) for p in planes]) == 2 else "prism"


def plane_union_oracle(q: int, count: int = 3, budget: Optional[int] = None,
                       field: Optional[FieldSpec] = None) -> UnionSearchResult:
    """
    Union sizes of all sets of distinct planes in F_q^3, first plane x_1 = 0.

    Raises:
        BudgetExceeded: If the search space exceeds the budget.
    """
    field = field or field_for_order(q)
    planes, incidence = _plane_incidence(field)
    top, witnesses, searched = _union_search(
        incidence, count, True, budget, f"{count}-plane search over F_{q}"
    )
    classes = {}
    if count == 3:
        classes = {
            size: classify_planes(field, [planes[i] for i in members])
            for size, members in witnesses.items()
        }
    logger.info(f"Plane oracle q={q}, count={count}: {len(top)} distinct union sizes")
    return UnionSearchResult(q, count, top, witnesses, classes, searched)


SPECTRUM_HEADER = ["weight", "count", "representative_hex"]


class Spectrum(ComponentBase):
    """Exhaustive oracle keywords."""

    def spectrum(self, q: int, m: int, r: int, shards: int = 1, cap: int = None,
                 max_distinct: int = None) -> dict:
        """
        Return the exhaustive spectrum of R_q(r, m) as JSON.

        Example:
            | ${spectrum}= | Spectrum | 3 | 2 | 2 |
        """
        result = exhaustive_spectrum(
            int(q), int(m), int(r),
            max_distinct=None if max_distinct is None else int(max_distinct),
            weight_cap=None if cap is None else int(cap),
            shards=int(shards),
        )
        return result.to_json()

    def first_weights(self, q: int, m: int, r: int, count: int = 3) -> list:
        return exhaustive_spectrum(int(q), int(m), int(r)).nonzero_weights(int(count))

    def line_union_sizes(self, q: int, b: int, fix_first_line: bool = True) -> list:
        return line_union_oracle(int(q), int(b), fix_first_line).sizes()

    def plane_union_sizes(self, q: int, count: int = 3) -> list:
        return plane_union_oracle(int(q), int(count)).sizes()
