"""
Complex midpoint-radius enclosures on top of python-flint's acb/arb.

All numeric outputs of the toolkit are Balls. Arithmetic runs at the
context precision, so callers wrap work in `working_precision(bits)`.
Real Balls carry an imaginary part that is exactly zero.
"""

from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import flint

from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

Number = Union[int, Fraction]


class Verdict(str, Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


def working_precision(bits: int):
    return flint.ctx.workprec(bits)


def precision_cap() -> int:
    return get_config().precision.cap_bits


def precision_ladder(start: int, cap: Optional[int] = None) -> Iterator[int]:
    """Yield start, 2*start, ... up to and including the cap."""
    cap = precision_cap() if cap is None else cap
    bits = max(start, get_config().precision.min_bits)
    while bits < cap:
        yield bits
        bits *= 2
    yield cap


def to_arb(x) -> flint.arb:
    if isinstance(x, flint.arb):
        return x
    if isinstance(x, Ball):
        return x.real
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return flint.arb(x.numerator)
        return flint.arb(flint.fmpq(x.numerator, x.denominator))
    return flint.arb(x)


def arb_to_fraction(x: flint.arb) -> Fraction:
    """Exact value of the midpoint of an arb."""
    man, exp = x.mid().man_exp()
    man, exp = int(man), int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _arb_max(a: flint.arb, b: flint.arb) -> flint.arb:
    # only called on exact endpoints
    return a if a >= b else b


def _arb_min(a: flint.arb, b: flint.arb) -> flint.arb:
    return a if a <= b else b


class Ball:
    """Complex enclosure; `value` is a flint.acb."""

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, Ball):
            value = value.value
        elif not isinstance(value, flint.acb):
            value = flint.acb(to_arb(value))
        self.value = value

    # construction

    @classmethod
    def exact(cls, re: Number = 0, im: Number = 0) -> "Ball":
        return cls(flint.acb(to_arb(Fraction(re)), to_arb(Fraction(im))))

    @classmethod
    def from_arb(cls, re: flint.arb, im: Optional[flint.arb] = None) -> "Ball":
        if im is None:
            return cls(flint.acb(re))
        return cls(flint.acb(re, im))

    @classmethod
    def interval(cls, lo: flint.arb, hi: flint.arb) -> "Ball":
        """Real Ball enclosing [lo, hi]."""
        return cls(flint.acb(lo.union(hi)))

    @classmethod
    def around(cls, center: Number, radius: Number) -> "Ball":
        return cls(flint.acb(flint.arb(to_arb(Fraction(center)), to_arb(Fraction(radius)))))

    # views

    @property
    def real(self) -> flint.arb:
        return self.value.real

    @property
    def imag(self) -> flint.arb:
        return self.value.imag

    @property
    def re(self) -> "Ball":
        return Ball(flint.acb(self.value.real))

    @property
    def im(self) -> "Ball":
        return Ball(flint.acb(self.value.imag))

    @property
    def is_real(self) -> bool:
        return self.value.imag.is_zero()

    @property
    def is_exact(self) -> bool:
        return self.value.real.is_exact() and self.value.imag.is_exact()

    @property
    def is_finite(self) -> bool:
        return self.value.real.is_finite() and self.value.imag.is_finite()

    @property
    def mid(self) -> "Ball":
        return Ball(self.value.mid())

    @property
    def rad(self) -> flint.arb:
        """Upper bound on the error of either component."""
        return _arb_max(self.value.real.rad(), self.value.imag.rad())

    def lower(self) -> flint.arb:
        return self.value.real.lower()

    def upper(self) -> flint.arb:
        return self.value.real.upper()

    # arithmetic

    def __add__(self, other) -> "Ball":
        return Ball(self.value + _acb(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Ball":
        return Ball(self.value - _acb(other))

    def __rsub__(self, other) -> "Ball":
        return Ball(_acb(other) - self.value)

    def __mul__(self, other) -> "Ball":
        return Ball(self.value * _acb(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Ball":
        return Ball(self.value / _acb(other))

    def __rtruediv__(self, other) -> "Ball":
        return Ball(_acb(other) / self.value)

    def __neg__(self) -> "Ball":
        return Ball(-self.value)

    def __pow__(self, exponent) -> "Ball":
        if isinstance(exponent, int):
            if self.is_real:
                return Ball(flint.acb(self.value.real ** exponent))
            return Ball(self.value ** exponent)
        exponent = Ball(exponent)
        if self.is_real and exponent.is_real and self.value.real > 0:
            return Ball(flint.acb(self.value.real ** exponent.value.real))
        return Ball(self.value ** exponent.value)

    def __abs__(self) -> "Ball":
        if self.is_real:
            return Ball(flint.acb(abs(self.value.real)))
        return Ball(flint.acb(abs(self.value)))

    def conjugate(self) -> "Ball":
        return Ball(self.value.conjugate())

    def exp(self) -> "Ball":
        if self.is_real:
            return Ball(flint.acb(self.value.real.exp()))
        return Ball(self.value.exp())

    def log(self) -> "Ball":
        if self.is_real and self.value.real > 0:
            return Ball(flint.acb(self.value.real.log()))
        return Ball(self.value.log())

    def sqrt(self) -> "Ball":
        if self.is_real and self.value.real >= 0:
            return Ball(flint.acb(self.value.real.sqrt()))
        return Ball(self.value.sqrt())

    # set relations

    def contains(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and self.is_finite:
            # rationals are tested exactly, independent of the context precision
            re = self.value.real
            inside = abs(arb_to_fraction(re) - other) <= arb_to_fraction(re.rad())
            return inside and self.value.imag.contains(0)
        return self.value.contains(_acb(other))

    def overlaps(self, other) -> bool:
        return self.value.overlaps(_acb(other))

    def contains_zero(self) -> bool:
        return self.value.contains(flint.acb(0))

    def union(self, other) -> "Ball":
        return Ball(self.value.union(_acb(other)))

    def widen(self, radius) -> "Ball":
        """Add `radius` of error to every component."""
        err = flint.arb(0, to_arb(radius))
        if self.is_real:
            return Ball(flint.acb(self.value.real + err))
        return Ball(flint.acb(self.value.real + err, self.value.imag + err))

    # output

    def describe(self, digits: int = 20) -> str:
        rad = self.rad.str(3, radius=False)
        re = self.value.real.mid().str(digits, radius=False)
        if self.is_real:
            return f"{re} +/- {rad}"
        im = self.value.imag.mid().str(digits, radius=False)
        return f"{re} + {im}i +/- {rad}"

    def __repr__(self) -> str:
        return f"Ball({self.describe(12)})"


def _acb(x) -> flint.acb:
    if isinstance(x, Ball):
        return x.value
    if isinstance(x, flint.acb):
        return x
    return flint.acb(to_arb(x))


def ball_max(values: Sequence[Ball]) -> Ball:
    """Enclosure of the maximum of real Balls (hull of both branches when they overlap)."""
    if not values:
        raise ValueError("ball_max of an empty sequence")
    lo = values[0].lower()
    hi = values[0].upper()
    for v in values[1:]:
        lo = _arb_max(lo, v.lower())
        hi = _arb_max(hi, v.upper())
    return Ball.interval(lo, hi)


def ball_min(values: Sequence[Ball]) -> Ball:
    if not values:
        raise ValueError("ball_min of an empty sequence")
    lo = values[0].lower()
    hi = values[0].upper()
    for v in values[1:]:
        lo = _arb_min(lo, v.lower())
        hi = _arb_min(hi, v.upper())
    return Ball.interval(lo, hi)


def log2(x: Ball) -> Ball:
    return x.log() / Ball(flint.acb(flint.arb.const_log2()))


def compare(lhs: Ball, rhs: Ball) -> Optional[int]:
    """-1, 0, 1 when the real parts are certainly ordered (0: both exact and equal), else None."""
    a, b = lhs.real, rhs.real
    if a < b:
        return -1
    if a > b:
        return 1
    if a == b:
        return 0
    return None


def holds(lhs: Ball, rhs: Ball, relation: str) -> Verdict:
    """Tri-state truth of `lhs <relation> rhs` by strict interval separation."""
    c = compare(lhs, rhs)
    if c is None:
        return Verdict.INCONCLUSIVE
    ok = {
        "<": c < 0,
        "<=": c <= 0,
        ">": c > 0,
        ">=": c >= 0,
    }[relation]
    return Verdict.VERIFIED if ok else Verdict.VIOLATED


def decide(
    evaluate: Callable[[int], Tuple[Ball, Ball]],
    relation: str,
    precision: int,
) -> Tuple[Verdict, Ball, Ball]:
    """
    Evaluate both sides at `precision` and compare; on an inconclusive result
    retry once at doubled precision (bounded by the cap).
    """
    with working_precision(precision):
        lhs, rhs = evaluate(precision)
    verdict = holds(lhs, rhs, relation)
    if verdict is Verdict.INCONCLUSIVE:
        doubled = min(2 * precision, precision_cap())
        if doubled > precision:
            logger.debug(f"Inconclusive at {precision} bits, retrying at {doubled}")
            with working_precision(doubled):
                lhs, rhs = evaluate(doubled)
            verdict = holds(lhs, rhs, relation)
    return verdict, lhs, rhs
