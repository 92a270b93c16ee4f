"""
Hyperplane Arrangements Module

This module counts the points covered by block hyperplane arrangements: k
blocks of parallel hyperplanes in independent directions, d_i hyperplanes in
block i. Only the block-size multiset matters, and

    N = q^m - q^(m-k) * prod(q - d_i).

On top of that formula it provides the named configuration catalog with the
closed form of every entry, the selection of the third-largest value N'_3,
and a brute-force enumerator over all types of total size at most d. The
enumerator checks the selections independently.
"""
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from robot.api import logger

from grmbot.modules.gf import FieldSpec, rank
from grmbot.modules.polyring import linear_form, truth_table
from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import (
    BlockTooBig,
    ClosedFormMismatch,
    DependentForms,
    FullBlock,
    OutOfRangeR,
    RepeatedShift,
    TooManyBlocks,
    UncoveredCase,
)
from grmbot.utils.helper import Budget

OTHER = "Other"


@dataclass(frozen=True)
class ArrangementType:
    """Block-size multiset, stored in descending order without zero blocks."""

    sizes: Tuple[int, ...]

    @classmethod
    def of(cls, sizes: Sequence[int]) -> "ArrangementType":
        return cls(tuple(sorted((int(d) for d in sizes if d), reverse=True)))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def __str__(self) -> str:
        return f"({self.k},[{','.join(map(str, self.sizes))}])"


def n_points(q: int, m: int, arrangement) -> int:
    """
    Number of points on the union of an arrangement of the given type.

    Raises:
        TooManyBlocks: If k > m.
        BlockTooBig: If a block has more than q-1 hyperplanes.
    """
    if not isinstance(arrangement, ArrangementType):
        if any(int(d) < 0 for d in arrangement):
            raise BlockTooBig(f"negative block size in {list(arrangement)}")
        arrangement = ArrangementType.of(arrangement)
    if arrangement.k > m:
        raise TooManyBlocks(f"{arrangement.k} blocks do not fit in dimension {m}")
    if any(d > q - 1 for d in arrangement.sizes):
        raise BlockTooBig(f"block sizes {arrangement.sizes} exceed q-1={q - 1}")
    return q**m - q ** (m - arrangement.k) * math.prod(q - d for d in arrangement.sizes)


@dataclass(frozen=True)
class ConfigDefinition:
    name: str
    valid: Callable[[int, int, int, int], bool]
    sizes: Callable[[int, int, int, int], List[int]]
    closed_form: Callable[[int, int, int, int], int]


def _full(q, count):
    return [q - 1] * count


CONFIGURATIONS: List[ConfigDefinition] = [
    ConfigDefinition(
        "Tmax",
        lambda q, m, t, s: True,
        lambda q, m, t, s: _full(q, t) + [s],
        lambda q, m, t, s: 1 if t == m else (q - s) * q ** (m - t - 1),
    ),
    ConfigDefinition(
        "T1",
        lambda q, m, t, s: 1 <= t <= m - 1 and 0 <= s <= q - 3,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2, s + 1],
        lambda q, m, t, s: 2 * (q - s - 1) * q ** (m - t - 1),
    ),
    ConfigDefinition(
        "T2",
        lambda q, m, t, s: 1 <= t <= m - 2 and 1 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2, s, 1],
        lambda q, m, t, s: 2 * (q - s) * (q - 1) * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T3",
        lambda q, m, t, s: 0 <= t <= m - 2 and 2 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t) + [s - 1, 1],
        lambda q, m, t, s: (q - s + 1) * (q - 1) * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T4",
        lambda q, m, t, s: 0 <= t <= m - 1,
        lambda q, m, t, s: _full(q, t),
        lambda q, m, t, s: q ** (m - t),
    ),
    ConfigDefinition(
        "T1a",
        lambda q, m, t, s: s == 0 and 1 <= t <= m - 1,
        lambda q, m, t, s: _full(q, t - 1) + [q - 3, 2],
        lambda q, m, t, s: 3 * (q - 2) * q ** (m - t - 1),
    ),
    ConfigDefinition(
        "T1b",
        lambda q, m, t, s: s == 0 and 1 <= t <= m - 2,
        lambda q, m, t, s: _full(q, t - 1) + [q - 3, 1, 1],
        lambda q, m, t, s: 3 * (q - 1) ** 2 * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T1c",
        lambda q, m, t, s: s == 0 and 2 <= t <= m - 1,
        lambda q, m, t, s: _full(q, t - 2) + [q - 2, q - 2, 2],
        lambda q, m, t, s: 4 * (q - 2) * q ** (m - t - 1),
    ),
    ConfigDefinition(
        "T1d",
        lambda q, m, t, s: s == 0 and 2 <= t <= m - 2,
        lambda q, m, t, s: _full(q, t - 2) + [q - 2, q - 2, 1, 1],
        lambda q, m, t, s: 4 * (q - 1) ** 2 * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T1e",
        lambda q, m, t, s: s == 0 and 1 <= t <= m - 1,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2],
        lambda q, m, t, s: 2 * q ** (m - t),
    ),
    ConfigDefinition(
        "T2a",
        lambda q, m, t, s: q == 3 and s == 1 and 2 <= t <= m - 3,
        lambda q, m, t, s: _full(q, t - 2) + [1] * 5,
        lambda q, m, t, s: 32 * 3 ** (m - t - 3),
    ),
    ConfigDefinition(
        "T3a",
        lambda q, m, t, s: 0 <= t <= m - 3 and 3 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t) + [1, 1, s - 2],
        lambda q, m, t, s: (q - 1) ** 2 * (q - s + 2) * q ** (m - t - 3),
    ),
    ConfigDefinition(
        "T3b",
        lambda q, m, t, s: 1 <= t <= m - 2 and 2 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2, s - 1, 2],
        lambda q, m, t, s: 2 * (q - 2) * (q - s + 1) * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T3c",
        lambda q, m, t, s: 1 <= t <= m - 3 and 2 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2, 1, 1, s - 1],
        lambda q, m, t, s: 2 * (q - 1) ** 2 * (q - s + 1) * q ** (m - t - 3),
    ),
    ConfigDefinition(
        "T3d",
        lambda q, m, t, s: 0 <= t <= m - 2 and 4 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t) + [s - 2, 2],
        lambda q, m, t, s: (q - 2) * (q - s + 2) * q ** (m - t - 2),
    ),
    ConfigDefinition(
        "T3e",
        lambda q, m, t, s: 0 <= t <= m - 2 and 2 <= s <= q - 2,
        lambda q, m, t, s: _full(q, t) + [s - 1],
        lambda q, m, t, s: (q - s + 1) * q ** (m - t - 1),
    ),
    ConfigDefinition(
        "T4a",
        lambda q, m, t, s: s == 1 and 1 <= t <= m - 1,
        lambda q, m, t, s: _full(q, t - 1) + [q - 2, 1],
        lambda q, m, t, s: 2 * (q - 1) * q ** (m - t - 1),
    ),
]


@dataclass(frozen=True)
class CatalogEntry:
    """One arrangement type with every configuration name it realises."""

    tags: Tuple[str, ...]
    arrangement: ArrangementType
    n: int

    @property
    def tag(self) -> str:
        return self.tags[0]


def split_d(q: int, m: int, d: int) -> Tuple[int, int]:
    """d = t(q-1) + s with 0 <= s <= q-2."""
    if not 1 <= d <= m * (q - 1):
        raise OutOfRangeR(f"d must lie in 1..{m * (q - 1)}, got {d}")
    return divmod(d, q - 1)


def named_catalog(q: int, m: int, d: int) -> List[CatalogEntry]:
    """
    Every named configuration valid at (q, m, d), merged by type.

    Each entry's N is computed with n_points and compared with its closed
    form. Entries come in descending N, then catalog order.

    Raises:
        ClosedFormMismatch: If a closed form disagrees with n_points.
    """
    t, s = split_d(q, m, d)
    merged: Dict[ArrangementType, List[str]] = {}
    values: Dict[ArrangementType, int] = {}
    for config in CONFIGURATIONS:
        if not config.valid(q, m, t, s):
            continue
        arrangement = ArrangementType.of(config.sizes(q, m, t, s))
        n = n_points(q, m, arrangement)
        expected = q**m - config.closed_form(q, m, t, s)
        if n != expected:
            raise ClosedFormMismatch(
                f"{config.name} at q={q}, m={m}, d={d}: N={n}, closed form gives {expected}"
            )
        merged.setdefault(arrangement, []).append(config.name)
        values[arrangement] = n
    entries = [CatalogEntry(tuple(names), arr, values[arr]) for arr, names in merged.items()]
    entries.sort(key=lambda entry: -entry.n)
    return entries


def find_configuration(q: int, m: int, d: int, name: str) -> Optional[CatalogEntry]:
    for entry in named_catalog(q, m, d):
        if name in entry.tags:
            return entry
    return None


def _second_name(q: int, m: int, t: int, s: int) -> Optional[str]:
    if q >= 4:
        return {0: "T1", 1: "T4"}.get(s, "T3")
    if s == 0:
        return "T1"
    if s == 1:
        return "T2" if t <= m - 2 else "T4"
    return None


def second_configuration(q: int, m: int, d: int) -> CatalogEntry:
    """
    The configuration whose N is the second-largest value on L_d.

    Raises:
        UncoveredCase: Outside the known ranges.
    """
    t, s = split_d(q, m, d)
    name = _second_name(q, m, t, s)
    entry = find_configuration(q, m, d, name) if name else None
    if entry is None:
        raise UncoveredCase(f"no second configuration for q={q}, m={m}, d={d}")
    return entry


@dataclass(frozen=True)
class N3Result:
    n: int
    winner: str
    arrangement: ArrangementType
    ties: Tuple[str, ...] = ()


def _n3_name(q: int, m: int, t: int, s: int) -> Optional[str]:
    if s == 0:
        if not 1 <= t <= m - 1:
            return None
        if q >= 7:
            return "T1e"
        if q == 4 and t == m - 1:
            return "T1e"
        if q == 3 and t in (1, m - 1):
            return "T1e"
        if q == 4:
            return "T1b"
        if q == 5:
            return "T1a"
        if q == 3 and 2 <= t <= m - 2:
            return "T1d"
        return None
    if s == 1:
        if q == 3 and 1 <= t <= m - 2:
            return "T4"
        if q == 3 and t == m - 1:
            return "T4a"
        if q >= 5 and 1 <= t <= m - 1:
            return "T1"
        if q == 4 and 1 <= t <= m - 2:
            return "T2"
        if q == 4 and t == m - 1:
            return "T4a"
        return None
    if t > m - 2:
        return None
    if q >= 7 and 4 <= s <= q // 2 + 2:
        return "T3d"
    if q >= 8 and s >= (q + 1) // 2 + 2:
        return "T3e"
    if s == 2:
        return "T3e"
    if q >= 5 and s == 3:
        return "T3e" if t == m - 2 else "T3a"
    return None


def n3_prime(q: int, m: int, d: int) -> N3Result:
    """
    The selected configuration for the third-largest N on L_d.

    Ties list every other catalog name with the same N.

    Raises:
        UncoveredCase: If no selection rule covers (q, t, s).
    """
    t, s = split_d(q, m, d)
    name = _n3_name(q, m, t, s)
    catalog = named_catalog(q, m, d)
    winner = next((entry for entry in catalog if name in entry.tags), None) if name else None
    if winner is None:
        raise UncoveredCase(f"no third configuration for q={q}, m={m}, d={d}")
    ties = tuple(
        tag for entry in catalog if entry.n == winner.n for tag in entry.tags if tag != name
    )
    return N3Result(winner.n, name, winner.arrangement, ties)


@lru_cache(maxsize=128)
def _type_table(q: int, m: int):
    """All non-empty types with k <= m as parallel arrays, N descending."""
    count = math.comb(q - 1 + m, m) - 1
    Budget.check_codewords(count, what="arrangement types")
    types = [
        tuple(reversed(combo))
        for k in range(1, m + 1)
        for combo in itertools.combinations_with_replacement(range(1, q), k)
    ]
    values = [n_points(q, m, ArrangementType(sizes)) for sizes in types]
    order = sorted(range(len(types)), key=lambda i: (-values[i], types[i]))
    dtype = np.int64 if q**m < 2**62 else object
    totals = np.array([sum(types[i]) for i in order], dtype=np.int64)
    ns = np.array([values[i] for i in order], dtype=dtype)
    logger.debug(f"Arrangement table q={q}, m={m}: {len(types)} types")
    return tuple(types[i] for i in order), totals, ns


def enumerate_types(q: int, m: int, d: int) -> List[Tuple[ArrangementType, int]]:
    """All types with at most m blocks and total size at most d, N descending."""
    types, totals, ns = _type_table(q, m)
    return [
        (ArrangementType(types[i]), int(ns[i]))
        for i in np.flatnonzero(totals <= d)
    ]


def distinct_values(q: int, m: int, d: int, top: int = 3) -> List[int]:
    """The largest distinct N on L_d, the empty arrangement (N=0) included."""
    _, totals, ns = _type_table(q, m)
    values = set(ns[totals <= d].tolist())
    values.add(0)
    return sorted(values, reverse=True)[:top]


@dataclass(frozen=True)
class RankCheck:
    rank: int
    expected: Optional[int]
    measured: Optional[int]
    covered: bool

    @property
    def passed(self) -> bool:
        return not self.covered or self.expected == self.measured


@dataclass(frozen=True)
class Top3Report:
    q: int
    m: int
    d: int
    t: int
    s: int
    checks: Tuple[RankCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def covered(self) -> bool:
        return all(check.covered for check in self.checks)

    def mismatches(self) -> List[RankCheck]:
        return [check for check in self.checks if not check.passed]

    def to_json(self) -> dict:
        return {
            "q": self.q, "m": self.m, "d": self.d, "t": self.t, "s": self.s,
            "checks": [
                {"rank": c.rank, "expected": c.expected, "measured": c.measured,
                 "covered": c.covered, "pass": c.passed}
                for c in self.checks
            ],
            "pass": self.passed,
        }


def verify_top3(q: int, m: int, d: int) -> Top3Report:
    """Compare the three largest enumerated N with Tmax, the second and the N'_3 selections."""
    t, s = split_d(q, m, d)
    measured = distinct_values(q, m, d, 3)
    measured += [None] * (3 - len(measured))

    expected: List[Optional[int]] = [find_configuration(q, m, d, "Tmax").n]
    try:
        expected.append(second_configuration(q, m, d).n)
    except UncoveredCase:
        expected.append(None)
    try:
        expected.append(n3_prime(q, m, d).n)
    except UncoveredCase:
        expected.append(None)

    checks = tuple(
        RankCheck(rank + 1, expected[rank], measured[rank], expected[rank] is not None)
        for rank in range(3)
    )
    report = Top3Report(q, m, d, t, s, checks)
    if not report.passed:
        logger.info(f"Top-3 mismatch at q={q}, m={m}, d={d}: {report.to_json()}")
    return report


def validate_blocks(field: FieldSpec, m: int, blocks) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Normalise [(form coefficients, shifts), ...] and check its side conditions.

    Raises:
        TooManyBlocks: If there are more than m blocks.
        DependentForms: If the linear forms are not independent.
        RepeatedShift: If a block repeats a shift.
        FullBlock: If a block uses all q shifts.
    """
    normalised = [
        (tuple(int(c) for c in form), tuple(int(u) for u in shifts)) for form, shifts in blocks
    ]
    if len(normalised) > m:
        raise TooManyBlocks(f"{len(normalised)} blocks do not fit in dimension {m}")
    forms = [form for form, _ in normalised]
    if forms and rank(field, forms) < len(forms):
        raise DependentForms(f"linear forms {forms} are not independent")
    for form, shifts in normalised:
        if len(set(shifts)) != len(shifts):
            raise RepeatedShift(f"block {form} repeats a shift in {shifts}")
        if len(shifts) >= field.q:
            raise FullBlock(f"block {form} uses all {field.q} shifts")
    return normalised


def union_size(field: FieldSpec, m: int, blocks) -> int:
    """Count the points of F_q^m on at least one hyperplane f_i(x) = u_ij, directly."""
    covered = np.zeros(field.q**m, dtype=bool)
    for form, shifts in validate_blocks(field, m, blocks):
        values = truth_table(linear_form(field, m, form))
        covered |= np.isin(values, shifts)
    return int(covered.sum())


def _tags_for(catalog: List[CatalogEntry], n: int) -> str:
    names = [tag for entry in catalog if entry.n == n for tag in entry.tags]
    return "|".join(names) if names else OTHER


def top3_report_rows(q: int, m: int, d: int, top: int = 3) -> List[list]:
    """CSV rows q,m,d,t,s,rank,N,tags for the largest distinct enumerated N."""
    t, s = split_d(q, m, d)
    catalog = named_catalog(q, m, d)
    return [
        [q, m, d, t, s, rank, n, _tags_for(catalog, n)]
        for rank, n in enumerate(distinct_values(q, m, d, top), start=1)
    ]


def catalog_rows(q: int, m: int, d: int, top: Optional[int] = None) -> List[list]:
    """CSV rows q,m,d,t,s,rank,N,tags for the named catalog."""
    t, s = split_d(q, m, d)
    catalog = named_catalog(q, m, d)
    distinct = sorted({entry.n for entry in catalog}, reverse=True)
    if top is not None:
        distinct = distinct[:top]
    return [[q, m, d, t, s, rank, n, _tags_for(catalog, n)]
            for rank, n in enumerate(distinct, start=1)]


REPORT_HEADER = ["q", "m", "d", "t", "s", "rank", "N", "tags"]


class Arrangements(ComponentBase):
    """Hyperplane arrangement keywords."""

    def n_points_of(self, q: int, m: int, *sizes) -> int:
        return n_points(int(q), int(m), [int(d) for d in sizes])

    def catalog(self, q: int, m: int, d: int) -> list:
        """
        Return the named configurations valid at (q, m, d).

        Returns:
            List of dictionaries with the names, block sizes and N.
        """
        return [
            {"tags": list(entry.tags), "sizes": list(entry.arrangement.sizes), "N": entry.n}
            for entry in named_catalog(int(q), int(m), int(d))
        ]

    def third_configuration(self, q: int, m: int, d: int) -> dict:
        result = n3_prime(int(q), int(m), int(d))
        return {"N": result.n, "winner": result.winner, "ties": list(result.ties)}

    def top_three(self, q: int, m: int, d: int) -> list:
        return distinct_values(int(q), int(m), int(d), 3)

    def verify_top_three(self, q: int, m: int, d: int) -> dict:
        """Run verify_top3 and fail the keyword on a covered mismatch."""
        report = verify_top3(int(q), int(m), int(d))
        if not report.passed:
            raise AssertionError(f"Top-3 mismatch: {report.to_json()}")
        return report.to_json()
