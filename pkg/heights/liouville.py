"""Liouville-Mignotte separation |alpha - beta| >= (2 H(alpha) H(beta))^(-deg(alpha) deg(beta))."""

from dataclasses import dataclass
from typing import Optional

from algebra.ball import Ball, Verdict, decide
from algebra.number import AlgebraicNumber, approximate
from heights.errors import ConjugatePair
from heights.measures import weil_height
from utils.config import get_config


@dataclass(frozen=True)
class GapVerdict:
    distance: Ball
    bound: Ball
    holds: Verdict


def liouville_gap(alpha: AlgebraicNumber, beta: AlgebraicNumber,
                  precision: Optional[int] = None) -> GapVerdict:
    if alpha.minpoly == beta.minpoly:
        raise ConjugatePair(f"{alpha} and {beta} share the minimal polynomial {alpha.minpoly}",
                            operation="liouville_gap")
    exponent = alpha.degree * beta.degree

    def sides(bits: int):
        distance = abs(approximate(alpha, bits) - approximate(beta, bits))
        base = 2 * weil_height(alpha, bits) * weil_height(beta, bits)
        return 1 / base ** exponent, distance

    verdict, bound, distance = decide(sides, "<", precision or get_config().precision.start_bits)
    return GapVerdict(distance=distance, bound=bound, holds=verdict)
