"""
House, Mahler measure and absolute Weil height as real Balls.

The Weil height is computed as M(alpha)^(1/d); places are never enumerated.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from algebra.ball import Ball, ball_max, working_precision
from algebra.number import AlgebraicNumber, conjugate_enclosures
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class HeightReport:
    house: Ball
    mahler: Ball
    weil: Ball
    degree: int

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "degree": self.degree,
            "house": self.house.describe(digits),
            "mahler": self.mahler.describe(digits),
            "weil": self.weil.describe(digits),
        }


def _precision(precision: Optional[int]) -> int:
    return precision or get_config().precision.start_bits


def house(alpha: AlgebraicNumber, precision: Optional[int] = None) -> Ball:
    """max |alpha_i| over the conjugates."""
    precision = _precision(precision)
    conjugates = conjugate_enclosures(alpha, precision)
    with working_precision(precision):
        return ball_max([abs(c) for c in conjugates])


def mahler(alpha: AlgebraicNumber, precision: Optional[int] = None) -> Ball:
    """|a_d| * prod max(1, |alpha_i|); straddling conjugates contribute the hull of both branches."""
    precision = _precision(precision)
    if alpha.is_rational:
        q = alpha.as_fraction()
        return Ball.exact(max(abs(q.numerator), q.denominator))
    conjugates = conjugate_enclosures(alpha, precision)
    with working_precision(precision):
        one = Ball.exact(1)
        acc = Ball.exact(abs(alpha.minpoly.leading))
        for c in conjugates:
            acc = acc * ball_max([one, abs(c)])
        return acc


def weil_height(alpha: AlgebraicNumber, precision: Optional[int] = None) -> Ball:
    """H(alpha) = M(alpha)^(1/d); exactly max(|p|, |q|) for p/q."""
    precision = _precision(precision)
    m = mahler(alpha, precision)
    if alpha.is_rational:
        return m
    with working_precision(precision):
        return m ** Fraction(1, alpha.degree)


def height_report(alpha: AlgebraicNumber, precision: Optional[int] = None) -> HeightReport:
    precision = _precision(precision)
    report = HeightReport(
        house=house(alpha, precision),
        mahler=mahler(alpha, precision),
        weil=weil_height(alpha, precision),
        degree=alpha.degree,
    )
    logger.debug(f"Heights of {alpha}: {report.to_dict(12)}")
    return report
