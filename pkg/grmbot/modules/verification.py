"""
Verification Suites Module

This module runs the acceptance checks as named suites. Each check is a
Claim with an id, the provenance tag it verifies, the expected and measured
values, and whether they agree. Failures are data: a suite always returns a
report, and only budget errors escape.
"""
import time
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Iterator, List, Optional

import numpy as np
from robot.api import logger

from grmbot.modules import arrangements, constructors, grm, polyring, spectrum
from grmbot.modules.gf import field_for_order, rank
from grmbot.modules.polyring import AffineMap, ReducedPoly
from grmbot.utils.engine import ComponentBase
from grmbot.utils.errors import BudgetExceeded, GrmError, UncoveredCase

SUITES = (
    "formulas-vs-oracles",
    "arrangements-top3",
    "constructors",
    "quadratic",
    "oracles",
    "properties",
    "all",
)

ARRANGEMENT_ORDERS = (3, 4, 5, 7, 8, 9, 11, 13, 16, 17)
CONSTRUCTOR_ORDERS = (3, 4, 5, 7, 9)
PROPERTY_ORDERS = (3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32)
DESK_CODES = ((3, 2, 2), (3, 3, 2), (4, 2, 3), (5, 2, 3))
MAX_WITNESS_POINTS = 2 * 10**6
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Claim:
    id: str
    provenance: str
    expected: Any
    measured: Any
    passed: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "provenance": self.provenance,
            "expected": self.expected,
            "measured": self.measured,
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    claims: List[Claim] = dc_field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(claim.passed for claim in self.claims)

    def failures(self) -> List[Claim]:
        return [claim for claim in self.claims if not claim.passed]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "claims": [claim.to_json() for claim in self.claims],
            "elapsed_ms": self.elapsed_ms,
        }


def claim(claim_id: str, provenance: str, expected: Any, measure: Callable[[], Any]) -> Claim:
    """Evaluate one claim; domain errors become a failed claim."""
    try:
        measured = measure()
    except BudgetExceeded:
        raise
    except GrmError as e:
        measured = f"{type(e).__name__}: {e}"
    result = Claim(claim_id, provenance, expected, measured, measured == expected)
    if not result.passed:
        logger.info(f"Claim {claim_id} failed: expected {expected}, measured {measured}")
    return result


def _exact_three(q: int, m: int, r: int) -> List[Optional[int]]:
    params = grm.decompose_r(q, m, r)
    return [
        grm.min_weight(params).value,
        grm.second_weight(params).value,
        grm.third_weight(params).value,
    ]


def formulas_vs_oracles(workers: int = 1) -> Iterator[Claim]:
    for q, m, r in DESK_CODES:
        result = spectrum.exhaustive_spectrum(q, m, r, shards=max(1, workers), workers=workers)
        params = grm.decompose_r(q, m, r)
        expected = _exact_three(q, m, r)
        yield claim(f"spectrum:R_{q}({r},{m}):first-three",
                    grm.third_weight(params).provenance, expected,
                    lambda: result.nonzero_weights(3))


def arrangements_top3() -> Iterator[Claim]:
    for q in ARRANGEMENT_ORDERS:
        for m in range(2, 7):
            for d in range(1, m * (q - 1)):
                try:
                    arrangements.second_configuration(q, m, d)
                    winner = arrangements.n3_prime(q, m, d)
                except UncoveredCase:
                    continue
                report = arrangements.verify_top3(q, m, d)
                yield Claim(
                    f"top3:q={q},m={m},d={d}",
                    f"n3:{winner.winner}",
                    [check.expected for check in report.checks],
                    [check.measured for check in report.checks],
                    report.passed,
                )


def _witness_grid() -> Iterator[tuple]:
    for q in CONSTRUCTOR_ORDERS:
        for m in range(1, 6):
            if q**m > MAX_WITNESS_POINTS:
                continue
            for a in range(m):
                for b in range(1, q):
                    yield q, m, a, b


def constructor_conformance() -> Iterator[Claim]:
    for q, m, a, b in _witness_grid():
        branch = grm.theorem3_branch(q, m, a, b)
        if branch is not None:
            f, claimed = constructors.build_theorem3_witness(q, m, a, b, branch)
            yield claim(f"witness:{branch}:q={q},m={m},a={a},b={b}",
                        grm.branch_tag(branch), claimed, lambda: polyring.weight(f))
        r = a * (q - 1) + b
        if 2 <= r <= m * (q - 1) - 2:
            answer = grm.third_weight(grm.decompose_r(q, m, r))
            if answer.exact:
                yield claim(f"third-weight-word:q={q},m={m},a={a},b={b}", answer.provenance,
                            answer.value,
                            lambda: polyring.weight(constructors.build_third_weight(q, m, a, b)))

    families = [(q, 2, "circle") for q in CONSTRUCTOR_ORDERS]
    families += [(q, 3, "triangle") for q in (4, 5, 7, 9)]
    families += [(9, 4, family) for family in ("D", "E", "F")]
    families += [(13, 5, family) for family in ("D", "E", "F", "quad")]
    families += [(16, 6, family) for family in ("D", "E", "F")]
    for q, b, family in families:
        expected = grm.cb_value(q, b)
        yield claim(f"family:{family}:q={q},b={b}", expected.provenance, expected.value,
                    lambda: polyring.weight(constructors.build_third_weight_2var(q, b, family)))


def _batch_weights(field, m: int, monomials, coeffs: np.ndarray) -> np.ndarray:
    """Direct weights of many polynomials given as coefficient rows."""
    add, mul = field.add_table, field.mul_table
    values = np.zeros((coeffs.shape[0], field.q**m), dtype=add.dtype)
    for k, exps in enumerate(monomials):
        table = polyring.monomial_table(field, m, exps)
        values = add[values, mul[coeffs[:, k][:, None], table[None, :]]]
    return np.count_nonzero(values, axis=1)


def _classifier_mismatches(q: int, m: int, coeffs: np.ndarray) -> int:
    field = field_for_order(q)
    monomials = spectrum.monomial_basis(q, m, 2)
    direct = _batch_weights(field, m, monomials, coeffs)
    mismatches = 0
    for row, expected in zip(coeffs, direct):
        f = polyring.reduce(field, m, [(exps, int(c)) for exps, c in zip(monomials, row)])
        if grm.quadratic_weight(f)[1] != int(expected):
            mismatches += 1
    return mismatches


def _all_coefficients(q: int, n: int) -> np.ndarray:
    return np.indices((q,) * n).reshape(n, -1).T


def quadratic_classifier(seed: int = DEFAULT_SEED) -> Iterator[Claim]:
    field = field_for_order(5)
    x1, x2 = ReducedPoly.variable(field, 2, 0), ReducedPoly.variable(field, 2, 1)
    yield claim("quadratic:x1x2:q=5", "lem:quad", 16,
                lambda: grm.quadratic_weight(x1 * x2)[1])
    yield claim("quadratic:x1x2+1:q=5", "lem:quad", 21,
                lambda: grm.quadratic_weight(x1 * x2 + ReducedPoly.constant(field, 2, 1))[1])

    for q, m in ((3, 2), (3, 3)):
        n = len(spectrum.monomial_basis(q, m, 2))
        coeffs = _all_coefficients(q, n)
        yield claim(f"quadratic:exhaustive:q={q},m={m}", "lem:quad", 0,
                    lambda: _classifier_mismatches(q, m, coeffs))

    rng = np.random.default_rng(seed)
    for q, m in ((5, 2), (5, 3), (7, 2)):
        n = len(spectrum.monomial_basis(q, m, 2))
        coeffs = rng.integers(0, q, size=(10**4, n))
        yield claim(f"quadratic:random:q={q},m={m}", "lem:quad", 0,
                    lambda: _classifier_mismatches(q, m, coeffs))


def union_oracles(extended: bool = False) -> Iterator[Claim]:
    yield claim("lines:q=4,b=2", "lem:c2", [8, 7],
                lambda: spectrum.line_union_oracle(4, 2).sizes())
    yield claim("lines:q=7,b=3:third", "lem:c3", 49 - grm.cb_value(7, 3).value,
                lambda: spectrum.line_union_oracle(7, 3).nth_largest(3))
    yield claim("lines:q=5,b=3:pinned-first-line", "lem:c3",
                spectrum.line_union_oracle(5, 3, fix_first_line=False).sizes(),
                lambda: spectrum.line_union_oracle(5, 3, fix_first_line=True).sizes())
    yield claim("lines:q=9,b=4:top-three", "thm:c4", [36, 33, 81 - grm.cb_value(9, 4).value],
                lambda: spectrum.line_union_oracle(9, 4, fix_first_line=False).sizes()[:3])
    yield claim("planes:q=7:third", "thm:w33", 7**3 - 6**3,
                lambda: spectrum.plane_union_oracle(7).nth_largest(3))
    yield claim("planes:q=7:third-class", "thm:w33", "general",
                lambda: _third_class(spectrum.plane_union_oracle(7)))
    yield claim("planes:q=5:sizes", "thm:w33", [75, 65, 61, 60],
                lambda: spectrum.plane_union_oracle(5).sizes()[:4])
    if extended:
        yield claim("lines:q=13,b=5:third", "thm:c5", 169 - grm.cb_value(13, 5).value,
                    lambda: spectrum.line_union_oracle(13, 5).nth_largest(3))


def _third_class(result: spectrum.UnionSearchResult) -> Optional[str]:
    return result.classes.get(result.nth_largest(3))


def _field_axiom_failures(q: int) -> int:
    field = field_for_order(q)
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    x = np.arange(q)
    a, b, c = np.meshgrid(x, x, x, indexing="ij")
    failures = 0
    failures += int(np.count_nonzero(add[add[a, b], c] != add[a, add[b, c]]))
    failures += int(np.count_nonzero(mul[mul[a, b], c] != mul[a, mul[b, c]]))
    failures += int(np.count_nonzero(mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]))
    failures += int(np.count_nonzero(add != add.T)) + int(np.count_nonzero(mul != mul.T))
    failures += int(np.count_nonzero(add[x, neg[x]] != 0))
    failures += int(np.count_nonzero(mul[x[1:], inv[x[1:]]] != 1))
    failures += sum(1 for v in range(q) if field.pow(v, q) != v)
    return failures


def _raw_evaluate(field, terms, point) -> int:
    total = 0
    for exps, coeff in terms:
        value = coeff
        for xi, e in zip(point, exps):
            value = field.mul(value, field.pow(xi, e))
        total = field.add(total, value)
    return total


def _reduction_failures(rng: np.random.Generator) -> int:
    failures = 0
    for q, m in ((3, 2), (4, 2), (5, 2), (3, 3)):
        field = field_for_order(q)
        points = polyring.point_coordinates(q, m).T
        for _ in range(20):
            terms = [(tuple(int(v) for v in rng.integers(0, 2 * q, size=m)), int(rng.integers(1, q)))
                     for _ in range(4)]
            f = polyring.reduce(field, m, terms)
            if polyring.reduce(field, m, f.terms) != f:
                failures += 1
            table = polyring.truth_table(f)
            failures += sum(
                1 for point, value in zip(points, table)
                if _raw_evaluate(field, terms, [int(v) for v in point]) != int(value)
            )
    return failures


def _affine_weight_changes(rng: np.random.Generator) -> int:
    f = constructors.build_third_weight(3, 2, 0, 2)
    expected = polyring.weight(f)
    changes = 0
    for _ in range(100):
        T = AffineMap.random(f.field, f.m, rng)
        if polyring.weight(polyring.compose_affine(f, T)) != expected:
            changes += 1
    return changes


def _second_weight_disagreements() -> int:
    disagreements = 0
    for q in ARRANGEMENT_ORDERS:
        for m in range(1, 7):
            for r in range(1, m * (q - 1) + 1):
                params = grm.decompose_r(q, m, r)
                try:
                    w2 = grm.second_weight(params).value
                except UncoveredCase:
                    continue
                if m == 1:
                    continue
                entry = arrangements.second_configuration(q, m, r)
                if w2 != q**m - entry.n:
                    disagreements += 1
    return disagreements


def _weight_order_violations() -> int:
    violations = 0
    for q in ARRANGEMENT_ORDERS:
        for m in range(1, 7):
            for r in range(2, m * (q - 1) - 1):
                params = grm.decompose_r(q, m, r)
                w3 = grm.third_weight(params)
                if not w3.exact:
                    continue
                w1 = grm.min_weight(params).value
                try:
                    w2 = grm.second_weight(params).value
                except UncoveredCase:
                    continue
                if not w1 < w2 < w3.value:
                    violations += 1
    return violations


def _union_disagreements(rng: np.random.Generator) -> int:
    disagreements = 0
    for q, m in ((3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4)):
        field = field_for_order(q)
        for _ in range(10):
            k = int(rng.integers(1, m + 1))
            while True:
                forms = rng.integers(0, q, size=(k, m)).tolist()
                if len(forms) == 0 or rank(field, forms) == k:
                    break
            blocks = [
                (form, rng.permutation(q)[: int(rng.integers(1, q))].tolist())
                for form in forms
            ]
            sizes = [len(shifts) for _, shifts in blocks]
            expected = arrangements.n_points(q, m, sizes)
            if arrangements.union_size(field, m, blocks) != expected:
                disagreements += 1
            poly = constructors.build_arrangement_poly(q, m, blocks, field=field)
            if polyring.weight(poly) != q**m - expected:
                disagreements += 1
    return disagreements


def _unresolved_tags() -> List[str]:
    tags = set()
    for q in ARRANGEMENT_ORDERS:
        for m in range(1, 5):
            for r in range(1, m * (q - 1) + 1):
                params = grm.decompose_r(q, m, r)
                tags.add(grm.min_weight(params).provenance)
                tags.add(grm.third_weight(params).provenance)
        for b in range(2, q):
            tags.add(grm.cb_value(q, b).provenance)
    return sorted(tag for tag in tags if tag not in grm.PROVENANCE)


def properties(seed: int = DEFAULT_SEED, workers: int = 1) -> Iterator[Claim]:
    rng = np.random.default_rng(seed)
    for q in PROPERTY_ORDERS:
        yield claim(f"field-axioms:q={q}", "gf", 0, lambda: _field_axiom_failures(q))
    yield claim("reduce:idempotent-and-faithful", "polyring", 0,
                lambda: _reduction_failures(rng))
    yield claim("affine-invariance:R_3(2,2)", "lem:c2", 0, lambda: _affine_weight_changes(rng))

    reference = spectrum.exhaustive_spectrum(3, 2, 2, shards=1)
    for shards in (4, 16):
        yield claim(f"shard-independence:R_3(2,2):shards={shards}", "spectrum",
                    reference.to_json(),
                    lambda: spectrum.exhaustive_spectrum(3, 2, 2, shards=shards,
                                                         workers=workers).to_json())
    for q, m, r in ((3, 2, 2), (3, 3, 2), (4, 2, 2)):
        yield claim(f"scalar-orbits:R_{q}({r},{m})", "spectrum", 0,
                    lambda: sum(1 for w, count in spectrum.exhaustive_spectrum(q, m, r).distinct_weights
                                if w and count % (q - 1)))
    yield claim("second-weight-vs-arrangements", "app:second", 0, _second_weight_disagreements)
    yield claim("weight-order:w1<w2<w3", "grm", 0, _weight_order_violations)
    yield claim("union-size-vs-n-points", "arrangements", 0, lambda: _union_disagreements(rng))
    yield claim("provenance-tags-resolve", "grm", [], _unresolved_tags)


def run_verification_suite(suite: str, extended: bool = False, workers: int = 1,
                           seed: int = DEFAULT_SEED, timing: bool = True) -> SuiteReport:
    """
    Run a named suite and collect its claims.

    Args:
        suite: One of SUITES.
        extended: Add the long c_5 line search to the oracles.
        workers: Processes used by sharded enumerations.
        seed: Seed of every random sample.
        timing: Record elapsed_ms; when False it is 0.

    Returns:
        The SuiteReport.

    Raises:
        ValueError: If the suite is unknown.
        BudgetExceeded: If a search exceeds its budget.
    """
    if suite not in SUITES:
        raise ValueError(f"Unknown suite '{suite}', expected one of {SUITES}")
    runners = {
        "formulas-vs-oracles": lambda: formulas_vs_oracles(workers),
        "arrangements-top3": arrangements_top3,
        "constructors": constructor_conformance,
        "quadratic": lambda: quadratic_classifier(seed),
        "oracles": lambda: union_oracles(extended),
        "properties": lambda: properties(seed, workers),
    }
    selected = list(runners) if suite == "all" else [suite]

    start = time.perf_counter()
    report = SuiteReport(suite)
    for name in selected:
        logger.console(f"Running suite {name}", stream="stderr")
        report.claims.extend(runners[name]())
    if timing:
        report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    logger.info(
        f"Suite {suite}: {len(report.claims)} claims, {len(report.failures())} failed"
    )
    return report


class Verification(ComponentBase):
    """Verification suite keywords."""

    def run_suite(self, suite: str, extended: bool = False) -> dict:
        """
        Run a suite and fail the keyword if any claim fails.

        Returns:
            The suite report as a dictionary.
        """
        report = run_verification_suite(suite, extended=extended)
        if not report.passed:
            ids = ", ".join(claim.id for claim in report.failures())
            raise AssertionError(f"Suite {suite} failed: {ids}")
        return report.to_json()
