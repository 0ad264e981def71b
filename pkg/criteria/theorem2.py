"""
Prefix check of the array criterion on the triangle n + m <= N + 1.

    g1  |alpha_{n,1}| strictly increasing, n^(1+eps) <= |alpha_{n,1}| from validity_start
    g2  sum_j |b/alpha| over anti-diagonal n <= |alpha_{n,1}|^(-1 + (ln ln |alpha_{n,1}|)^(-3-eps))
    g3  prod_j house(alpha) over anti-diagonal n <= |alpha_{n,1}|^(n + (ln ln |alpha_{n,1}|)^(-3-eps))
    g4  sign conditions of the selected mode
    g5  new running maximum of H_n within the last ceil(N/2) indices, carried by assertion

Logs are natural in this criterion. g2 and g3 are checked in the log
domain; an index with |alpha_{n,1}| <= e has no usable ln ln and is
reported inconclusive.
"""

from dataclasses import replace
from typing import Callable, List, Optional, Union

import flint

from algebra.ball import Ball, Verdict, decide, to_arb, working_precision
from criteria.certificate import Certificate, Check, CheckVerdict, IndexTally, downgrade
from criteria.growth import growth_exponents, growth_logs, growth_order, increase_verdict, modulus_order
from criteria.signs import SignVerdict, sign_condition_check
from criteria.specs import ArraySpec, SequenceSpec
from criteria.theorem1 import check_theorem1, exceeds_power, surrogate_window, validate_terms
from criteria.tower import TowerInfo, tower_info
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

CHECK_IDS = ("g1", "g2", "g3", "g4", "g5")


def loglog_exponent(log_alpha: flint.arb, epsilon) -> Optional[flint.arb]:
    """(ln ln |alpha|)^(-3-eps), or None when ln|alpha| > 1 is not certain."""
    if not log_alpha > 1:
        return None
    return log_alpha.log() ** (-3 - to_arb(epsilon))


def _g1(spec: ArraySpec, N: int, precision: int) -> Check:
    tally = IndexTally("g1")
    for n in range(1, N):
        order, lhs, rhs = modulus_order(spec.alpha, (n, 1), (n + 1, 1), precision)
        verdict = increase_verdict(order)
        tally.add((n + 1, 1), verdict, lhs, rhs, "" if verdict is Verdict.VERIFIED else "|alpha_{n,1}| increases")
    for n in range(1, N + 1):
        if n < spec.validity_start:
            tally.skip()
            continue
        verdict, lhs, rhs = exceeds_power(spec.alpha, (n, 1), n, spec.epsilon, precision, strict=False)
        tally.add((n, 1), verdict, rhs, lhs, "" if verdict is Verdict.VERIFIED else "n^(1+eps) <= |alpha_{n,1}|")
    return tally.finish(spec.asserted)


def _antidiagonal_check(check_id: str, spec: ArraySpec, N: int, precision: int,
                        lhs_of: Callable[[int, int], flint.arb], scale: Callable[[int], int]) -> Check:
    """lhs_of(n, bits) <= ln|alpha_{n,1}| (scale(n) + (ln ln |alpha_{n,1}|)^(-3-eps)) for n >= validity_start."""
    tally = IndexTally(check_id)
    for n in range(1, N + 1):
        if n < spec.validity_start:
            tally.skip()
            continue

        def sides(bits: int, n=n):
            la = spec.alpha.log_abs((n, 1), bits)
            power = loglog_exponent(la, spec.epsilon)
            if power is None:
                return None
            return Ball.from_arb(lhs_of(n, bits)), Ball.from_arb(la * (scale(n) + power))

        with working_precision(precision):
            if sides(precision) is None:
                tally.add((n, 1), Verdict.INCONCLUSIVE, note="|alpha_{n,1}| <= e, ln ln undefined")
                continue
        verdict, lhs, rhs = decide(sides, "<=", precision)
        tally.add((n, 1), verdict, lhs, rhs)
    return tally.finish(spec.asserted, "logs of both sides")


def _g2(spec: ArraySpec, N: int, precision: int) -> Check:
    return _antidiagonal_check("g2", spec, N, precision,
                               lambda n, bits: spec.antidiagonal_log(n, bits), lambda n: -1)


def _g3(spec: ArraySpec, N: int, precision: int) -> Check:
    def house_sum(n: int, bits: int) -> flint.arb:
        total = flint.arb(0)
        for idx in spec.antidiagonal(n):
            total += spec.alpha.house_log(idx, bits)
        return total

    return _antidiagonal_check("g3", spec, N, precision, house_sum, lambda n: n)


def _g4(spec: ArraySpec, N: int, precision: int) -> Check:
    signs: SignVerdict = sign_condition_check(spec, N, precision)
    if signs.verdict is Verdict.VIOLATED:
        verdict = CheckVerdict.FAILED
    elif signs.verdict is Verdict.INCONCLUSIVE or signs.asserted_required:
        verdict = downgrade("g4", spec.asserted)
    else:
        verdict = CheckVerdict.VERIFIED
    note = f"mode {signs.mode}, C0 = {signs.floor}" + (f"; {signs.note}" if signs.note else "")
    return Check("g4", verdict, signs.lhs, signs.rhs, signs.coordinates, note, checked=signs.checked,
                 strict_count=signs.strict_count)


def _g5(spec: ArraySpec, N: int, precision: int, tower: TowerInfo) -> Check:
    forms = growth_exponents(spec, N, tower)

    def logs_at(bits: int, pair):
        logs = growth_logs(spec, max(pair), bits, tower)
        return logs[pair[0] - 1], logs[pair[1] - 1]

    # running maximum; a record is a strict increase over every earlier value
    window = surrogate_window(N)
    best = 1
    undecided = False
    record = None
    for n in range(2, N + 1):
        order = growth_order(forms, logs_at, best, n, precision)
        if order is None:
            undecided = True
            continue
        if increase_verdict(order) is Verdict.VERIFIED:
            best = n
            if n in window:
                record = n
    with working_precision(precision):
        logs = growth_logs(spec, N, precision, tower)
        lhs, rhs = Ball.from_arb(logs[best - 1].exp()), Ball.from_arb(logs[-1].exp())
    if record is not None:
        note = f"running maximum renewed at {record}; limsup carried by assertion"
    elif undecided:
        note = "running maximum undecided on the prefix"
    else:
        note = f"no new running maximum in indices {window[0]}..{N}"
    return Check("g5", downgrade("g5", spec.asserted), lhs, rhs, (best, 1), note, checked=N)


def check_theorem2(spec: ArraySpec, N: int, precision: Optional[int] = None,
                   tower: Optional[TowerInfo] = None) -> Certificate:
    if N < 2:
        raise ValueError(f"check_theorem2 needs a prefix N >= 2, got: {N}")
    precision = precision or get_config().precision.start_bits
    logger.info(f"=====Checking Theorem 2 (D={spec.D}, N={N}, mode {spec.sign_mode})=====")
    logger.info(f"INPUT: {spec.name or spec.alpha}")

    validate_terms(spec, ArraySpec.triangle(N), "check_theorem2")
    tower = tower or tower_info(spec, N, precision)
    checks: List[Check] = [
        _g1(spec, N, precision),
        _g2(spec, N, precision),
        _g3(spec, N, precision),
        _g4(spec, N, precision),
        _g5(spec, N, precision, tower),
    ]
    certificate = Certificate(2, spec.D, N, checks, spec.asserted, tower, spec.name,
                              extras={"sign_mode": spec.sign_mode})
    for check in checks:
        logger.debug(f"{check.check_id}: {check.verdict.value} {check.note}")
    logger.info(f"OUTPUT: {certificate.conclusion.value} (failed: {certificate.failed() or 'none'})")
    return certificate


def check_range(spec: Union[SequenceSpec, ArraySpec], N: int, D_max: int,
                precision: Optional[int] = None) -> List[Certificate]:
    """Certificates for D = 1..D_max; the tower is computed once."""
    if D_max < 1:
        raise ValueError(f"D_max must be at least 1, got: {D_max}")
    precision = precision or get_config().precision.start_bits
    tower = tower_info(spec, N, precision)
    check = check_theorem2 if isinstance(spec, ArraySpec) else check_theorem1
    return [check(replace(spec, D=D), N, precision, tower) for D in range(1, D_max + 1)]
