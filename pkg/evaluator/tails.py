"""
Truncation error bounds.

Single product: |x - x_N| <= max{1, |x|} S with S >= sum_{n>N} |b_n/alpha_n|
and |x| <= |x_N| e^S.

Array product: every factor F_m of the limit differs from its truncated
F_m^(N) by entries on anti-diagonals beyond N, and factors with m > N
are 1 plus such entries. With L a lower bound for the |F_m^(N)| and S_N
a bound on the anti-diagonal sums beyond N, U = S_N max{1, 1/L} gives
|x - x_N| <= |x_N| (e^U - 1) <= |x_N| U e^U.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import flint

from algebra.ball import Ball, ball_max, ball_min, to_arb, working_precision
from criteria.errors import MajorantUnverified
from criteria.majorant import verify_majorant
from criteria.specs import ArraySpec, SequenceSpec
from evaluator.errors import FactorNearZero
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TailSum:
    value: Ball
    provenance: str


def tail_sum_thm1(spec: SequenceSpec, N: int, precision: int) -> TailSum:
    """Upper bound S on sum_{n > N} |b_n/alpha_n|."""
    length = spec.length
    majorant = spec.tail_majorant
    if length is not None:
        terms = range(N + 1, length + 1)
        with working_precision(precision):
            total = explicit_sum(spec, terms, precision)
        return TailSum(total, "finite" if not terms else f"explicit {N + 1}..{length}")
    if majorant is None:
        raise MajorantUnverified("no tail majorant declared for an infinite product", operation="tail_bound_thm1")
    if N >= majorant.start:
        verify_majorant(majorant, spec.probe, N, precision)
    start = max(N + 1, majorant.start)
    window = range(N + 1, start)
    with working_precision(precision):
        explicit = explicit_sum(spec, window, precision)
        log_a = -spec.term_log(start, precision) if majorant.kind == "power" else None
        tail = Ball.from_arb(majorant.tail_from(start, log_a))
        total = explicit + tail
    provenance = majorant.describe()
    if window:
        provenance = f"explicit {window[0]}..{window[-1]} + {provenance}"
    return TailSum(total, provenance)


def explicit_sum(spec: SequenceSpec, indices, precision: int) -> Ball:
    total = Ball.exact(0)
    for n in indices:
        exact = spec.term_fraction(n)
        if exact is not None:
            total = total + Ball.exact(abs(exact))
        else:
            total = total + Ball.from_arb(spec.term_log(n, precision).exp())
    return total


def tail_bound_thm1(spec: SequenceSpec, N: int, x_partial: Ball, precision: Optional[int] = None) -> Ball:
    """max{1, |x_N| e^S} S as a real Ball; 0 when nothing follows the prefix."""
    precision = precision or get_config().precision.start_bits
    return bound_from_sum(tail_sum_thm1(spec, N, precision).value, x_partial, precision)


def bound_from_sum(S: Ball, x_partial: Ball, precision: int) -> Ball:
    with working_precision(precision):
        if S.is_exact and S.real.is_zero():
            return Ball.exact(0)
        upper = Ball.from_arb(S.upper())
        scale = ball_max([Ball.exact(1), abs(x_partial) * upper.exp()])
        return Ball.from_arb((scale * upper).upper())


@dataclass(frozen=True)
class TailEstimate2d:
    bound: Ball
    antidiagonal_tail: Ball
    inner_floor: Ball
    mode_floor: Fraction
    provenance: str


def antidiagonal_tail(spec: ArraySpec, N: int, precision: int) -> TailSum:
    """Upper bound S_N on sum_{k > N} of the anti-diagonal sums sum_j |b/alpha|."""
    majorant = spec.tail_majorant
    if majorant is None:
        raise MajorantUnverified("no anti-diagonal majorant declared", operation="evaluate")
    if N >= majorant.start:
        verify_majorant(majorant, spec.probe, N, precision)
    start = max(N + 1, majorant.start)
    window = range(N + 1, start)
    with working_precision(precision):
        total = Ball.exact(0)
        for k in window:
            exact = spec.antidiagonal_fraction(k)
            if exact is not None:
                total = total + Ball.exact(exact)
            else:
                log = spec.antidiagonal_log(k, precision)
                if log is not None:
                    total = total + Ball.from_arb(log.exp())
        total = total + Ball.from_arb(majorant.tail_from(start))
    provenance = majorant.describe()
    if window:
        provenance = f"explicit {window[0]}..{window[-1]} + {provenance}"
    return TailSum(total, provenance)


def inner_floor(factors: List[Ball], precision: int) -> Ball:
    """Certified lower bound L on min_m |F_m| (1 when there are no factors)."""
    with working_precision(precision):
        if not factors:
            return Ball.exact(1)
        lows = [Ball.from_arb(abs(f).lower()) for f in factors]
        floor = ball_min(lows)
    if not floor.real > 0:
        raise FactorNearZero("an inner factor is not bounded away from 0", operation="evaluate")
    return Ball.from_arb(floor.lower())


def tail_bound_2d(spec: ArraySpec, N: int, x_partial: Ball, factors: List[Ball], mode_floor: Fraction,
                  precision: Optional[int] = None) -> TailEstimate2d:
    precision = precision or get_config().precision.start_bits
    S = antidiagonal_tail(spec, N, precision)
    L = inner_floor(factors, precision)
    with working_precision(precision):
        if L.real < to_arb(mode_floor) - flint.arb(2) ** (8 - precision):
            logger.warning(f"Inner factor floor {L.describe(8)} lies below the sign-mode floor {mode_floor}")
        upper = Ball.from_arb(S.value.upper())
        U = upper * ball_max([Ball.exact(1), 1 / L])
        bound = abs(x_partial) * U * U.exp()
        bound = Ball.from_arb(bound.upper())
    return TailEstimate2d(bound, S.value, L, mode_floor, S.provenance)
