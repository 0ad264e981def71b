"""
Executable checks of the elementary height inequalities on a list of numbers.

Per number: H^d = M, M^(1/d) <= house <= M (algebraic integers), H(1/a) = H(a).
Per pair and triple: H(sum) <= 2^n prod H, H(product) <= prod H, and the
Liouville-Mignotte gap for every non-conjugate pair.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from algebra.arith import add, multiply, reciprocal
from algebra.ball import Ball, Verdict, decide, working_precision
from algebra.errors import AlgebraError
from algebra.number import AlgebraicNumber
from heights.liouville import liouville_gap
from heights.measures import height_report, weil_height
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass
class SuiteCheck:
    check_id: str
    inputs: Tuple[str, ...]
    lhs: Optional[Ball]
    rhs: Optional[Ball]
    verdict: Verdict
    # both sides overlap: the boundary case of the inequality is attained or nearly so
    tight: bool = False
    note: str = ""


@dataclass
class SuiteReport:
    checks: List[SuiteCheck] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        out = {v.value: 0 for v in Verdict}
        for check in self.checks:
            out[check.verdict.value] += 1
        return out

    @property
    def violated(self) -> List[SuiteCheck]:
        return [c for c in self.checks if c.verdict is Verdict.VIOLATED]


def _equality(check_id: str, inputs, lhs: Ball, rhs: Ball) -> SuiteCheck:
    verdict = Verdict.VERIFIED if lhs.overlaps(rhs) else Verdict.VIOLATED
    return SuiteCheck(check_id, inputs, lhs, rhs, verdict, tight=True)


def _inequality(check_id: str, inputs, sides: Callable[[int], Tuple[Ball, Ball]], precision: int) -> SuiteCheck:
    """lhs <= rhs with `sides(bits)` recomputed once at doubled precision when undecided."""
    verdict, lhs, rhs = decide(sides, "<=", precision)
    tight = verdict is not Verdict.VERIFIED and lhs.overlaps(rhs)
    return SuiteCheck(check_id, inputs, lhs, rhs, verdict, tight=tight)


def _single_checks(alpha: AlgebraicNumber, precision: int) -> List[SuiteCheck]:
    name = (str(alpha),)
    report = height_report(alpha, precision)
    checks = []
    with working_precision(precision):
        checks.append(_equality("height_measure", name, report.weil ** report.degree, report.mahler))
    if alpha.is_integer:
        def house_lower(bits: int):
            r = height_report(alpha, bits)
            return (r.mahler if r.degree == 1 else r.mahler ** Fraction(1, r.degree)), r.house

        def house_upper(bits: int):
            r = height_report(alpha, bits)
            return r.house, r.mahler

        checks.append(_inequality("house_lower", name, house_lower, precision))
        checks.append(_inequality("house_upper", name, house_upper, precision))
    if not alpha.is_zero:
        try:
            inverse = weil_height(reciprocal(alpha, precision), precision)
        except AlgebraError as e:
            logger.info(f"reciprocal skipped for {name}: {e}")
            checks.append(SuiteCheck("reciprocal", name, None, report.weil, Verdict.INCONCLUSIVE,
                                     note=f"{type(e).__name__}: {e}"))
        else:
            checks.append(_equality("reciprocal", name, inverse, report.weil))
    return checks


def _combination_checks(group: Sequence[AlgebraicNumber], precision: int) -> List[SuiteCheck]:
    names = tuple(str(a) for a in group)
    n = len(group)
    checks = []
    for check_id, combine, factor in (("sum_bound", add, 1 << n), ("product_bound", multiply, 1)):
        try:
            combined = reduce(lambda x, y: combine(x, y, precision), group)
        except AlgebraError as e:
            logger.info(f"{check_id} skipped for {names}: {e}")
            checks.append(SuiteCheck(check_id, names, None, None, Verdict.INCONCLUSIVE,
                                     note=f"{type(e).__name__}: {e}"))
            continue

        def sides(bits: int, combined=combined, factor=factor):
            bound = reduce(lambda acc, a: acc * weil_height(a, bits), group, Ball.exact(1))
            return weil_height(combined, bits), factor * bound

        checks.append(_inequality(check_id, names, sides, precision))
    return checks


def _gap_check(alpha: AlgebraicNumber, beta: AlgebraicNumber, precision: int) -> Optional[SuiteCheck]:
    if alpha.minpoly == beta.minpoly:
        return None
    gap = liouville_gap(alpha, beta, precision)
    return SuiteCheck("liouville", (str(alpha), str(beta)), gap.bound, gap.distance, gap.holds)


def inequality_suite(numbers: Sequence[AlgebraicNumber], precision: Optional[int] = None,
                     triples: bool = True) -> SuiteReport:
    if not numbers:
        raise ValueError("inequality_suite needs at least one number")
    precision = precision or get_config().precision.start_bits
    logger.info(f"=====Height inequality suite on {len(numbers)} numbers at {precision} bits=====")
    report = SuiteReport()
    for alpha in numbers:
        report.checks.extend(_single_checks(alpha, precision))
    for pair in combinations(numbers, 2):
        report.checks.extend(_combination_checks(pair, precision))
        gap = _gap_check(*pair, precision)
        if gap is not None:
            report.checks.append(gap)
    if triples:
        for triple in combinations(numbers, 3):
            report.checks.extend(_combination_checks(triple, precision))
    logger.info(f"Suite verdicts: {report.counts()}")
    return report
