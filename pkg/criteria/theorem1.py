"""
Prefix check of the single-product criterion.

    h1  house(alpha_n) b_n <= |alpha_n| 2^((log2 |alpha_n|)^a)
    h2  |alpha_n| strictly increasing
    h3  |alpha_n| > n^(1+eps) from validity_start on
    h4  (Re(alpha_n/b_n) + 1/2) e >= 0, strict at least once
    h5  H_n strictly increasing on the last ceil(N/2) indices, carried by assertion
"""

import math
from fractions import Fraction
from typing import List, Optional

import flint

from algebra.ball import Ball, Verdict, decide, to_arb, working_precision
from criteria.certificate import Certificate, Check, CheckVerdict, IndexTally, downgrade
from criteria.errors import NonIntegerAlpha
from criteria.growth import growth_exponents, growth_logs, growth_order, increase_verdict, modulus_order
from criteria.specs import SequenceSpec
from criteria.terms import real_ratio_sign
from criteria.tower import TowerInfo, tower_info
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

CHECK_IDS = ("h1", "h2", "h3", "h4", "h5")


def validate_terms(spec, indices, operation: str) -> None:
    """Every alpha an algebraic integer and every b a positive rational integer."""
    for idx in indices:
        if not spec.alpha.is_integer(idx):
            raise NonIntegerAlpha(f"alpha at {idx} is not an algebraic integer", operation=operation,
                                  coordinates=idx)
        if spec.b.degree(idx) != 1 or not spec.b.is_integer(idx) or spec.b.sign(idx) != 1:
            raise ValueError(f"b at {idx} must be a positive integer")


def exceeds_power(gen, idx, n: int, epsilon: Fraction, precision: int, strict: bool):
    """Verdict of |gen_idx| > n^(1+eps) (>= when not strict), exact for small values."""
    value = gen.exact_value(idx)
    p, q = epsilon.numerator, epsilon.denominator
    if value is not None and value.denominator == 1 and abs(value.numerator).bit_length() * q <= \
            get_config().criteria.exact_bits_limit:
        lhs, rhs = abs(value.numerator) ** q, n ** (p + q)
        ok = lhs > rhs if strict else lhs >= rhs
        return (Verdict.VERIFIED if ok else Verdict.VIOLATED), Ball.exact(abs(value)), _power_ball(n, epsilon, precision)

    def sides(bits: int):
        return (Ball.from_arb(gen.log_abs(idx, bits)),
                Ball.from_arb((1 + to_arb(epsilon)) * flint.arb(n).log()))

    verdict, lhs, rhs = decide(sides, ">" if strict else ">=", precision)
    with working_precision(precision):
        return verdict, lhs.exp(), rhs.exp()


def _power_ball(n: int, epsilon: Fraction, precision: int) -> Ball:
    with working_precision(precision):
        return Ball.from_arb(flint.arb(n) ** (1 + to_arb(epsilon)))


def _h1(spec: SequenceSpec, N: int, precision: int) -> Check:
    tally = IndexTally("h1")
    a = to_arb(spec.a)
    for n in range(1, N + 1):
        idx = (n,)

        def sides(bits: int, idx=idx):
            la = spec.alpha.log_abs(idx, bits)
            lhs = spec.alpha.house_log(idx, bits) + spec.b.log_abs(idx, bits)
            ln2 = flint.arb.const_log2()
            l2 = la / ln2
            power = flint.arb(0) if l2.is_zero() else l2 ** a
            return Ball.from_arb(lhs), Ball.from_arb(la + ln2 * power)

        with working_precision(precision):
            la = spec.alpha.log_abs(idx, precision)
            if la < 0:
                tally.add(idx, Verdict.INCONCLUSIVE, note="log2|alpha| < 0")
                continue
        verdict, lhs, rhs = decide(sides, "<=", precision)
        tally.add(idx, verdict, lhs, rhs)
    return tally.finish(spec.asserted, "logs of both sides")


def _h2(spec: SequenceSpec, N: int, precision: int) -> Check:
    tally = IndexTally("h2")
    for n in range(1, N):
        order, lhs, rhs = modulus_order(spec.alpha, (n,), (n + 1,), precision)
        tally.add((n + 1,), increase_verdict(order), lhs, rhs)
    return tally.finish(spec.asserted, "ln|alpha_n| < ln|alpha_n+1|")


def _h3(spec: SequenceSpec, N: int, precision: int) -> Check:
    tally = IndexTally("h3")
    for n in range(1, N + 1):
        if n < spec.validity_start:
            tally.skip()
            continue
        verdict, lhs, rhs = exceeds_power(spec.alpha, (n,), n, spec.epsilon, precision, strict=True)
        tally.add((n,), verdict, lhs, rhs)
    return tally.finish(spec.asserted)


def _h4(spec: SequenceSpec, N: int, precision: int) -> Check:
    tally = IndexTally("h4")
    strict = 0
    for n in range(1, N + 1):
        sign, _ = real_ratio_sign(spec.alpha, spec.b, (n,), Fraction(-1, 2), precision)
        if sign is None:
            tally.add((n,), Verdict.INCONCLUSIVE, note="sign of Re(alpha/b) + 1/2 undecided")
            continue
        signed = sign * spec.e
        strict += signed > 0
        tally.add((n,), Verdict.VERIFIED if signed >= 0 else Verdict.VIOLATED,
                  note="" if signed >= 0 else f"e (Re(alpha/b) + 1/2) has sign {signed}")
    check = tally.finish(spec.asserted)
    check.strict_count = strict
    if check.verdict is CheckVerdict.VERIFIED and strict == 0:
        check.verdict = downgrade("h4", spec.asserted)
        check.note = "never strict on the prefix"
    return check


def surrogate_window(N: int) -> range:
    """Last ceil(N/2) indices of 1..N."""
    return range(N - math.ceil(N / 2) + 1, N + 1)


def _h5(spec: SequenceSpec, N: int, precision: int, tower: TowerInfo) -> Check:
    forms = growth_exponents(spec, N, tower)

    def logs_at(bits: int, pair):
        logs = growth_logs(spec, max(pair), bits, tower)
        return logs[pair[0] - 1], logs[pair[1] - 1]

    window = surrogate_window(N)
    tally = IndexTally("h5")
    for n in window[1:]:
        order = growth_order(forms, logs_at, n - 1, n, precision)
        tally.add((n,), increase_verdict(order))
    with working_precision(precision):
        logs = growth_logs(spec, N, precision, tower)
        lhs, rhs = Ball.from_arb(logs[window[0] - 1].exp()), Ball.from_arb(logs[-1].exp())
    check = tally.finish(spec.asserted)
    check.lhs, check.rhs = lhs, rhs
    if check.verdict is CheckVerdict.FAILED:
        form = forms[check.coordinates[0] - 1]
        if form is not None:
            check.note = f"H_{check.coordinates[0]} = {form[0]}^{form[1]} does not increase"
        return check
    check.verdict = downgrade("h5", spec.asserted)
    if not check.note:
        check.note = f"increasing on indices {window[0]}..{N}; divergence carried by assertion"
    return check


def check_theorem1(spec: SequenceSpec, N: int, precision: Optional[int] = None,
                   tower: Optional[TowerInfo] = None) -> Certificate:
    if N < 2:
        raise ValueError(f"check_theorem1 needs a prefix N >= 2, got: {N}")
    if spec.length is not None and N > spec.length:
        raise ValueError(f"prefix N = {N} exceeds the {spec.length} explicit terms")
    precision = precision or get_config().precision.start_bits
    logger.info(f"=====Checking Theorem 1 (D={spec.D}, N={N})=====")
    logger.info(f"INPUT: {spec.name or spec.alpha}")

    validate_terms(spec, [(n,) for n in range(1, N + 1)], "check_theorem1")
    tower = tower or tower_info(spec, N, precision)
    checks: List[Check] = [
        _h1(spec, N, precision),
        _h2(spec, N, precision),
        _h3(spec, N, precision),
        _h4(spec, N, precision),
        _h5(spec, N, precision, tower),
    ]
    certificate = Certificate(1, spec.D, N, checks, spec.asserted, tower, spec.name)
    for check in checks:
        logger.debug(f"{check.check_id}: {check.verdict.value} {check.note}")
    logger.info(f"OUTPUT: {certificate.conclusion.value} (failed: {certificate.failed() or 'none'})")
    return certificate
