"""
Sign conditions on the array terms, one mode at a time.

    main, I  Re(alpha/b) >= 0 and e Im(alpha) >= 0
    II       Re(alpha/b) >= -1/2 (from validity_start, strict at least once)
             and e Im(alpha) >= |Re(alpha)|
    III      Re(alpha) >= |Im(alpha)|
    IV       Re(alpha/b) <= -1/(2(1 - XR)), |Im(alpha)| <= R |Re(alpha)|,
             and every column sum of |b/alpha| stays <= X

Each mode guarantees |1 + sum_n b_{n,m}/alpha_{n,m}| >= C0 for the inner
factors: 1 for main, I and III, 1/2 for II, 1 - X for IV.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import flint

from algebra.ball import Ball, Verdict, decide
from criteria.errors import ModeParamsMissing
from criteria.specs import ArraySpec
from criteria.terms import Index, ratio_fraction, ratio_log, real_ratio_sign
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

ASSERTED_REQUIRED = "asserted-required"


@dataclass
class SignVerdict:
    mode: str
    verdict: Verdict
    floor: Fraction
    strict_count: Optional[int] = None
    # strictness never observed: only an assertion can supply "infinitely often"
    asserted_required: bool = False
    coordinates: Optional[Index] = None
    lhs: Optional[Ball] = None
    rhs: Optional[Ball] = None
    note: str = ""
    checked: int = 0

    @property
    def status(self) -> str:
        if self.verdict is Verdict.VERIFIED and self.asserted_required:
            return ASSERTED_REQUIRED
        return self.verdict.value

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "floor": str(self.floor),
            "strict_count": self.strict_count,
            "coordinates": list(self.coordinates) if self.coordinates is not None else None,
            "note": self.note,
        }


def mode_floor(spec: ArraySpec) -> Fraction:
    if spec.sign_mode == "II":
        return Fraction(1, 2)
    if spec.sign_mode == "IV":
        return 1 - spec.X
    return Fraction(1)


def _sign_verdict(sign: Optional[int], allowed) -> Verdict:
    if sign is None:
        return Verdict.INCONCLUSIVE
    return Verdict.VERIFIED if sign in allowed else Verdict.VIOLATED


def _imag_vs_real(spec: ArraySpec, idx: Index, precision: int, scale: Fraction) -> Tuple[Verdict, Ball, Ball]:
    """Verdict of Im(alpha)^2 <= scale^2 Re(alpha)^2 (the squared form of |Im| <= scale |Re|)."""
    re, im2 = spec.alpha.real_part(idx), spec.alpha.imag_square(idx)
    if re is not None and im2 is not None:
        rhs = scale * scale * re * re
        return (Verdict.VERIFIED if im2 <= rhs else Verdict.VIOLATED), Ball.exact(im2), Ball.exact(rhs)

    def sides(bits: int):
        z = spec.alpha.ball(idx, bits)
        return z.im * z.im, Ball.exact(scale * scale) * (z.re * z.re)

    return decide(sides, "<=", precision)


def _real_vs_imag(spec: ArraySpec, idx: Index, precision: int) -> Tuple[Verdict, Ball, Ball]:
    """Verdict of Re(alpha)^2 <= Im(alpha)^2."""
    re, im2 = spec.alpha.real_part(idx), spec.alpha.imag_square(idx)
    if re is not None and im2 is not None:
        return (Verdict.VERIFIED if re * re <= im2 else Verdict.VIOLATED), Ball.exact(re * re), Ball.exact(im2)

    def sides(bits: int):
        z = spec.alpha.ball(idx, bits)
        return z.re * z.re, z.im * z.im

    return decide(sides, "<=", precision)


def _real_sign(spec: ArraySpec, idx: Index, precision: int) -> Optional[int]:
    # b > 0, so Re(alpha) and Re(alpha/b) share a sign
    return real_ratio_sign(spec.alpha, spec.b, idx, Fraction(0), precision)[0]


def _column_sums(spec: ArraySpec, N: int, precision: int) -> Tuple[Verdict, Optional[Index], Ball]:
    """Verdict of sum_{n <= N-m+1} |b/alpha| <= X for every column m of the triangle."""
    worst = Ball.exact(0)
    worst_exact = Fraction(0)
    for m in range(1, N + 1):
        indices = [(n, m) for n in range(1, N - m + 2)]
        exact = [ratio_fraction(spec.alpha, spec.b, idx) for idx in indices]
        if all(f is not None for f in exact):
            total = sum((abs(f) for f in exact), Fraction(0))
            if total > spec.X:
                return Verdict.VIOLATED, (m,), Ball.exact(total)
            worst_exact = max(worst_exact, total)
            worst = Ball.exact(worst_exact)
            continue

        def sides(bits: int, indices=indices):
            total = flint.arb(0)
            for idx in indices:
                total += ratio_log(spec.alpha, spec.b, idx, bits).exp()
            return Ball.from_arb(total), Ball.exact(spec.X)

        verdict, lhs, _ = decide(sides, "<=", precision)
        if verdict is not Verdict.VERIFIED:
            return verdict, (m,), lhs
    return Verdict.VERIFIED, None, worst


def sign_condition_check(spec: ArraySpec, N: int, precision: Optional[int] = None) -> SignVerdict:
    precision = precision or get_config().precision.start_bits
    mode = spec.sign_mode
    if mode == "IV" and (spec.X is None or spec.R is None):
        raise ModeParamsMissing("sign mode IV needs both X and R", operation="sign_condition_check")
    floor = mode_floor(spec)
    logger.info(f"=====Sign conditions, mode {mode}, N={N}=====")

    e = spec.e
    strict = 0
    checked = 0
    first_bad: Optional[Tuple[Verdict, Index, str, Optional[Ball], Optional[Ball]]] = None

    def record(verdict: Verdict, idx: Index, note: str, lhs: Optional[Ball] = None, rhs: Optional[Ball] = None):
        nonlocal first_bad
        if verdict is Verdict.VERIFIED:
            return
        if first_bad is None or (verdict is Verdict.VIOLATED and first_bad[0] is not Verdict.VIOLATED):
            first_bad = (verdict, idx, note, lhs, rhs)

    for idx in ArraySpec.triangle(N):
        checked += 1
        if mode in ("main", "I"):
            record(_sign_verdict(_real_sign(spec, idx, precision), (0, 1)), idx, "Re(alpha/b) >= 0")
            imag = spec.alpha.imag_sign(idx, precision)
            record(_sign_verdict(None if imag is None else e * imag, (0, 1)), idx, "e Im(alpha) >= 0")
        elif mode == "II":
            if sum(idx) - 1 >= spec.validity_start:
                sign, _ = real_ratio_sign(spec.alpha, spec.b, idx, Fraction(-1, 2), precision)
                record(_sign_verdict(sign, (0, 1)), idx, "Re(alpha/b) >= -1/2")
                strict += sign == 1
            imag = spec.alpha.imag_sign(idx, precision)
            record(_sign_verdict(None if imag is None else e * imag, (0, 1)), idx, "e Im(alpha) >= 0")
            verdict, lhs, rhs = _real_vs_imag(spec, idx, precision)
            record(verdict, idx, "e Im(alpha) >= |Re(alpha)|", lhs, rhs)
        elif mode == "III":
            record(_sign_verdict(_real_sign(spec, idx, precision), (0, 1)), idx, "Re(alpha) >= 0")
            verdict, lhs, rhs = _imag_vs_real(spec, idx, precision, Fraction(1))
            record(verdict, idx, "Re(alpha) >= |Im(alpha)|", lhs, rhs)
        else:
            shift = Fraction(-1) / (2 * (1 - spec.X * spec.R))
            sign, _ = real_ratio_sign(spec.alpha, spec.b, idx, shift, precision)
            record(_sign_verdict(sign, (-1, 0)), idx, f"Re(alpha/b) <= {shift}")
            verdict, lhs, rhs = _imag_vs_real(spec, idx, precision, spec.R)
            record(verdict, idx, f"|Im(alpha)| <= {spec.R} |Re(alpha)|", lhs, rhs)

    if mode == "IV":
        verdict, column, total = _column_sums(spec, N, precision)
        if verdict is not Verdict.VERIFIED:
            record(verdict, column, f"column sum of |b/alpha| <= X = {spec.X}", total, Ball.exact(spec.X))

    result = SignVerdict(mode, Verdict.VERIFIED, floor, checked=checked)
    if mode == "II":
        result.strict_count = strict
        result.asserted_required = strict == 0
    if first_bad is not None:
        result.verdict, result.coordinates, result.note, result.lhs, result.rhs = first_bad
    elif result.asserted_required:
        result.note = "Re(alpha/b) > -1/2 never observed on the prefix"
    logger.info(f"Sign mode {mode}: {result.status}, floor C0 = {floor}")
    return result
