"""
Adaptive evaluation of the infinite products to a target radius.

N grows until partial-product radius plus tail bound reaches the target.
The working precision doubles (up to the cap) at the same N once the tail
bound is below half the target, or when the radius stops shrinking for
`stall_limit` consecutive steps.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import flint

from algebra.ball import Ball, precision_cap, to_arb, working_precision
from criteria.specs import ArraySpec, SequenceSpec
from criteria.signs import sign_condition_check
from evaluator.errors import BudgetExhausted
from evaluator.products import exact_inner_factors, exact_partial_product, inner_factors, partial_product
from evaluator.tails import bound_from_sum, tail_bound_2d, tail_sum_thm1
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Enclosure:
    value: Ball
    terms_used: int
    tail_bound: Ball
    provenance: str
    precision: int
    exact: Optional[Fraction] = None
    exhausted: bool = False
    inner_floor: Optional[Ball] = None
    mode_floor: Optional[Fraction] = None

    @property
    def radius(self) -> flint.arb:
        return self.value.rad

    def contains(self, other) -> bool:
        return self.value.contains(other)

    def to_dict(self, digits: int = 20) -> dict:
        out = {
            "value": self.value.describe(digits),
            "radius": self.radius.str(5, radius=False),
            "terms_used": self.terms_used,
            "tail_bound": self.tail_bound.describe(5),
            "provenance": self.provenance,
            "precision": self.precision,
            "exhausted": self.exhausted,
        }
        if self.exact is not None:
            out["exact"] = str(self.exact)
        if self.inner_floor is not None:
            out["inner_floor"] = self.inner_floor.describe(8)
            out["mode_floor"] = str(self.mode_floor)
        return out


def _parse_target(target) -> flint.arb:
    if isinstance(target, str):
        mantissa, _, exponent = target.lower().partition("e")
        value = Fraction(mantissa) * Fraction(10) ** int(exponent or 0)
    else:
        value = Fraction(target)
    if value <= 0:
        raise ValueError(f"target radius must be positive, got: {target}")
    return to_arb(value)


def _enclose_sequence(spec: SequenceSpec, N: int, bits: int) -> Enclosure:
    x_N = partial_product(spec, N, bits)
    tail = tail_sum_thm1(spec, N, bits)
    bound = bound_from_sum(tail.value, x_N, bits)
    with working_precision(bits):
        value = x_N.widen(bound.real) if not bound.real.is_zero() else x_N
    return Enclosure(value, N, bound, tail.provenance, bits, exact=exact_partial_product(spec, N))


def _enclose_array(spec: ArraySpec, N: int, bits: int, mode_floor: Fraction) -> Enclosure:
    factors = inner_factors(spec, N, bits)
    exact = exact_inner_factors(spec, N)
    with working_precision(bits):
        x_N = Ball.exact(1)
        for f in factors:
            x_N = x_N * f
    estimate = tail_bound_2d(spec, N, x_N, factors, mode_floor, bits)
    with working_precision(bits):
        value = x_N.widen(estimate.bound.real)
    exact_value = None
    if exact is not None:
        exact_value = Fraction(1)
        for f in exact:
            exact_value *= f
    return Enclosure(value, N, estimate.bound, f"product distance with {estimate.provenance}", bits,
                     exact=exact_value, inner_floor=estimate.inner_floor, mode_floor=mode_floor)


def evaluate(spec: Union[SequenceSpec, ArraySpec], target_radius=None, precision: Optional[int] = None,
             max_terms: Optional[int] = None, strict: bool = False) -> Enclosure:
    """Enclosure of the full product with radius <= target_radius, or the best one within budget."""
    config = get_config()
    target = _parse_target(target_radius if target_radius is not None else config.evaluator.target_radius)
    bits = precision or config.precision.start_bits
    max_terms = max_terms or config.evaluator.max_terms
    is_array = isinstance(spec, ArraySpec)
    limit = max_terms if is_array or spec.length is None else min(max_terms, spec.length)
    logger.info(f"=====Evaluating {spec.name or spec.alpha} to radius {target.mid().str(3, radius=False)}=====")

    mode_floor = None
    if is_array:
        signs = sign_condition_check(spec, 2, bits)
        if signs.status == "violated":
            logger.warning(f"Sign mode {spec.sign_mode} fails at {signs.coordinates}: {signs.note}")
        mode_floor = signs.floor

    N = 1
    stalls = 0
    previous = None
    best = None
    while True:
        enclosure = _enclose_array(spec, N, bits, mode_floor) if is_array else _enclose_sequence(spec, N, bits)
        best = enclosure
        radius = enclosure.radius
        logger.debug(f"N={N} bits={bits} radius={radius.str(5, radius=False)} tail={enclosure.tail_bound.describe(3)}")
        if radius <= target:
            logger.info(f"OUTPUT: {enclosure.value.describe(config.report.digits)} with N={N}")
            return enclosure

        stalls = stalls + 1 if previous is not None and not radius < previous else 0
        previous = radius
        truncation_limited = enclosure.tail_bound.real > target / 2
        if N >= limit and truncation_limited:
            break
        if not truncation_limited or stalls >= config.evaluator.stall_limit or N >= limit:
            if bits >= precision_cap():
                break
            bits = min(2 * bits, precision_cap())
            logger.debug(f"Radius limited by rounding, raising precision to {bits} bits")
            stalls, previous = 0, None
            continue
        N += 1

    exhausted = Enclosure(best.value, best.terms_used, best.tail_bound, best.provenance, best.precision,
                          best.exact, True, best.inner_floor, best.mode_floor)
    message = f"target radius not reached with N={best.terms_used} at {best.precision} bits"
    logger.warning(message)
    if strict:
        raise BudgetExhausted(message, exhausted, operation="evaluate")
    return exhausted
