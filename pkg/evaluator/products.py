"""
Partial products of the single and array products, plus the xi numbers
whose real parts decide whether consecutive array partial products can
coincide.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from algebra.ball import Ball, Verdict, holds, precision_ladder, working_precision
from criteria.specs import ArraySpec, SequenceSpec
from criteria.terms import Index, ratio_ball, ratio_fraction
from evaluator.errors import FactorNearZero, TermMagnitude
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


def _exact_budget() -> int:
    return get_config().criteria.exact_bits_limit


def _fits(q: Fraction) -> bool:
    return q.numerator.bit_length() + q.denominator.bit_length() <= _exact_budget()


def certify_small_term(spec: SequenceSpec, n: int, precision: int) -> None:
    """Raise TermMagnitude unless |b_n/alpha_n| < 1 is certain."""
    exact = spec.term_fraction(n)
    if exact is not None:
        if abs(exact) < 1:
            return
        raise TermMagnitude(f"|b/alpha| = {abs(exact)} >= 1", operation="partial_product", coordinates=n)
    for bits in precision_ladder(precision):
        log = spec.term_log(n, bits)
        if log < 0:
            return
        if log >= 0:
            break
    raise TermMagnitude("|b/alpha| < 1 could not be certified", operation="partial_product", coordinates=n)


def exact_partial_product(spec: SequenceSpec, N: int) -> Optional[Fraction]:
    """prod_{n<=N} (1 + b_n/alpha_n) as a Fraction while every term is a small rational."""
    acc = Fraction(1)
    for n in range(1, N + 1):
        term = spec.term_fraction(n)
        if term is None:
            return None
        acc *= 1 + term
        if not _fits(acc):
            return None
    return acc


def partial_product(spec: SequenceSpec, N: int, precision: Optional[int] = None) -> Ball:
    if N < 0:
        raise ValueError(f"N must be nonnegative, got: {N}")
    precision = precision or get_config().precision.start_bits
    for n in range(1, N + 1):
        certify_small_term(spec, n, precision)
    exact = exact_partial_product(spec, N)
    with working_precision(precision):
        if exact is not None:
            return Ball.exact(exact)
        acc = Ball.exact(1)
        for n in range(1, N + 1):
            acc = acc * (1 + ratio_ball(spec.alpha, spec.b, (n,), precision))
        return acc


def _column(N: int, m: int, upto: Optional[int] = None) -> List[Index]:
    last = N - m + 1 if upto is None else upto
    return [(n, m) for n in range(1, last + 1)]


def exact_inner_factors(spec: ArraySpec, N: int) -> Optional[List[Fraction]]:
    factors = []
    for m in range(1, N + 1):
        acc = Fraction(1)
        for idx in _column(N, m):
            term = ratio_fraction(spec.alpha, spec.b, idx)
            if term is None:
                return None
            acc += term
            if not _fits(acc):
                return None
        factors.append(acc)
    return factors


def inner_factors(spec: ArraySpec, N: int, precision: int) -> List[Ball]:
    """Balls of 1 + sum_{n <= N-m+1} b_{n,m}/alpha_{n,m} for m = 1..N."""
    exact = exact_inner_factors(spec, N)
    with working_precision(precision):
        if exact is not None:
            factors = [Ball.exact(f) for f in exact]
        else:
            factors = []
            for m in range(1, N + 1):
                acc = Ball.exact(1)
                for idx in _column(N, m):
                    acc = acc + ratio_ball(spec.alpha, spec.b, idx, precision)
                factors.append(acc)
    for m, factor in enumerate(factors, 1):
        if factor.contains_zero():
            raise FactorNearZero(f"inner factor {factor.describe(10)} contains 0",
                                 operation="partial_product_2d", coordinates=(N, m))
    return factors


def partial_product_2d(spec: ArraySpec, N: int, precision: Optional[int] = None) -> Ball:
    if N < 0:
        raise ValueError(f"N must be nonnegative, got: {N}")
    precision = precision or get_config().precision.start_bits
    exact = exact_inner_factors(spec, N)
    if exact is not None and all(f != 0 for f in exact):
        acc = Fraction(1)
        for f in exact:
            acc *= f
        if _fits(acc):
            with working_precision(precision):
                return Ball.exact(acc)
    factors = inner_factors(spec, N, precision)
    with working_precision(precision):
        acc = Ball.exact(1)
        for f in factors:
            acc = acc * f
        return acc


@dataclass(frozen=True)
class XiValue:
    value: Ball
    # sign of Re(xi) + 1/2, None while undecided at the precision cap
    sign: Optional[int]
    precision: int


def _xi_ball(spec: ArraySpec, N: int, m: int, bits: int) -> Ball:
    lead = (N - m + 1, m)
    with working_precision(bits):
        inner = Ball.exact(1)
        for idx in _column(N, m, N - m):
            inner = inner + ratio_ball(spec.alpha, spec.b, idx, bits)
        if inner.contains_zero():
            raise FactorNearZero("inner sum of xi contains 0", operation="xi_value", coordinates=(N, m))
        return spec.alpha.ball(lead, bits) / spec.b.ball(lead, bits) * inner


def xi_value(spec: ArraySpec, N: int, m: int, precision: Optional[int] = None) -> XiValue:
    """xi_{N,m} = (alpha/b)_{N-m+1,m} (1 + sum_{n <= N-m} b_{n,m}/alpha_{n,m})."""
    if not 1 <= m <= N:
        raise ValueError(f"(N, m) = ({N}, {m}) lies outside the triangle")
    precision = precision or get_config().precision.start_bits
    half = Ball.exact(Fraction(-1, 2))
    xi = None
    for bits in precision_ladder(precision):
        xi = _xi_ball(spec, N, m, bits)
        with working_precision(bits):
            shifted = xi.re
        verdict = holds(shifted, half, ">")
        if verdict is Verdict.VERIFIED:
            return XiValue(xi, 1, bits)
        if holds(shifted, half, "<") is Verdict.VERIFIED:
            return XiValue(xi, -1, bits)
        if shifted.is_exact and shifted.real == half.real:
            return XiValue(xi, 0, bits)
        logger.debug(f"Re(xi_{N},{m}) + 1/2 undecided at {bits} bits")
    return XiValue(xi, None, bits)


def pivot_identity(xi: Ball) -> Tuple[Ball, Ball]:
    """(|1 + 1/xi|^2 - 1, (1 + 2 Re xi) / |xi|^2); the two agree for every nonzero xi."""
    if xi.contains_zero():
        raise FactorNearZero("xi contains 0", operation="pivot_identity")
    w = 1 + 1 / xi
    lhs = w.re * w.re + w.im * w.im - 1
    rhs = (1 + 2 * xi.re) / (xi.re * xi.re + xi.im * xi.im)
    return lhs, rhs
