"""
Algebraic numbers as (minimal polynomial, isolating square).

Every AlgebraicNumber is built through `make_algebraic` (or one of the
helpers below), which certifies irreducibility and root isolation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Union

import flint

from algebra.ball import (
    Ball,
    arb_to_fraction,
    precision_ladder,
    to_arb,
    working_precision,
)
from algebra.errors import AmbiguousSelector, PrecisionBudgetExceeded, Reducible, ZeroPolynomial
from algebra.polynomial import IntegerPolynomial
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class RootRegion:
    """Axis-aligned square: center_re + i*center_im, half-width half_width."""
    center_re: Fraction
    center_im: Fraction
    half_width: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center_re", Fraction(self.center_re))
        object.__setattr__(self, "center_im", Fraction(self.center_im))
        object.__setattr__(self, "half_width", Fraction(self.half_width))
        if self.half_width <= 0:
            raise ValueError(f"RootRegion half_width must be positive, got: {self.half_width}")

    def box(self) -> Ball:
        hw = to_arb(self.half_width)
        return Ball(flint.acb(flint.arb(to_arb(self.center_re), hw), flint.arb(to_arb(self.center_im), hw)))

    def encloses(self, ball: Ball) -> bool:
        return self.box().contains(ball)

    def meets(self, ball: Ball) -> bool:
        return self.box().overlaps(ball)

    def conjugate(self) -> "RootRegion":
        return RootRegion(self.center_re, -self.center_im, self.half_width)

    @classmethod
    def around(cls, ball: Ball, others: Sequence[Ball], floor: Fraction) -> Optional["RootRegion"]:
        """Square around `ball` avoiding every Ball in `others`, or None if they are too close."""
        rad = arb_to_fraction(ball.rad.upper())
        region = cls(arb_to_fraction(ball.real), arb_to_fraction(ball.imag), max(2 * rad, floor))
        if not region.encloses(ball):
            return None
        if any(region.meets(other) for other in others):
            return None
        return region


@dataclass(frozen=True)
class AlgebraicNumber:
    minpoly: IntegerPolynomial
    selector: RootRegion

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_integer(self) -> bool:
        return self.minpoly.is_monic

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def is_zero(self) -> bool:
        return self.minpoly.coefficients == (0, 1)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        c0, c1 = self.minpoly.coefficients
        return Fraction(-c0, c1)

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.as_fraction())
        return f"root of {self.minpoly} near {float(self.selector.center_re):.6g}{float(self.selector.center_im):+.6g}i"


def _default_start() -> int:
    return get_config().precision.start_bits


def _isolate(poly: IntegerPolynomial, selector: RootRegion, start: int) -> None:
    for bits in precision_ladder(start):
        roots = poly.roots(bits)
        meeting = [r for r in roots if selector.meets(r)]
        inside = [r for r in meeting if selector.encloses(r)]
        if not meeting:
            raise AmbiguousSelector(f"region around {float(selector.center_re)}{float(selector.center_im):+}i "
                                    f"contains no root of {poly}", operation="make_algebraic")
        if len(inside) >= 2:
            raise AmbiguousSelector(f"region contains {len(inside)} roots of {poly}", operation="make_algebraic")
        if len(inside) == 1 and len(meeting) == 1:
            logger.debug(f"Isolated root of {poly} at {bits} bits")
            return
    raise AmbiguousSelector(f"could not certify isolation for {poly} within the precision cap",
                            operation="make_algebraic")


def make_algebraic(minpoly: IntegerPolynomial, selector: RootRegion,
                   precision: Optional[int] = None) -> AlgebraicNumber:
    """Validate `minpoly` (irreducible, primitive) and certify that `selector` isolates one root."""
    if minpoly.degree < 1:
        raise ZeroPolynomial(f"constant polynomial {minpoly} has no roots", operation="make_algebraic")
    poly = minpoly.primitive()
    if not poly.is_irreducible():
        factors = " * ".join(f"({p})" + (f"^{e}" if e > 1 else "") for p, e in poly.factor())
        raise Reducible(f"{poly} = {factors}", operation="make_algebraic")
    if poly.degree == 1:
        root = Fraction(-poly.constant, poly.leading)
        if not (abs(root - selector.center_re) <= selector.half_width and abs(selector.center_im) <= selector.half_width):
            raise AmbiguousSelector(f"region contains no root of {poly}", operation="make_algebraic")
    else:
        _isolate(poly, selector, precision or _default_start())
    return AlgebraicNumber(poly, selector)


def rational(value: Union[int, Fraction]) -> AlgebraicNumber:
    value = Fraction(value)
    poly = IntegerPolynomial((-value.numerator, value.denominator))
    return AlgebraicNumber(poly, RootRegion(value, 0, 1))


def from_polynomial(poly: IntegerPolynomial, index: int = 0,
                    precision: Optional[int] = None) -> AlgebraicNumber:
    """The `index`-th root of an irreducible polynomial, real roots first."""
    poly = poly.primitive()
    if poly.degree == 1:
        return make_algebraic(poly, RootRegion(Fraction(-poly.constant, poly.leading), 0, 1))
    if not poly.is_irreducible():
        raise Reducible(f"{poly} is reducible", operation="from_polynomial")
    if not 0 <= index < poly.degree:
        raise ValueError(f"root index {index} out of range for degree {poly.degree}")
    for bits in precision_ladder(precision or _default_start()):
        roots = poly.roots(bits)
        others = roots[:index] + roots[index + 1:]
        region = RootRegion.around(roots[index], others, Fraction(1, 1 << bits))
        if region is not None:
            return make_algebraic(poly, region, bits)
    raise PrecisionBudgetExceeded(f"could not separate root {index} of {poly}", operation="from_polynomial")


def from_hint(poly: IntegerPolynomial, center_re: Fraction, center_im: Fraction = Fraction(0),
              precision: Optional[int] = None) -> AlgebraicNumber:
    """The root of an irreducible polynomial nearest to an approximate center."""
    poly = poly.primitive()
    if poly.degree == 1:
        return make_algebraic(poly, RootRegion(Fraction(-poly.constant, poly.leading), 0, 1))
    if not poly.is_irreducible():
        raise Reducible(f"{poly} is reducible", operation="from_hint")
    hint = flint.acb(to_arb(Fraction(center_re)), to_arb(Fraction(center_im)))
    for bits in precision_ladder(precision or _default_start()):
        roots = poly.roots(bits)
        with working_precision(bits):
            distances = [abs(r.value.mid() - hint).mid() for r in roots]
        ranked = sorted(range(len(roots)), key=lambda i: float(distances[i]))
        if len(ranked) > 1 and distances[ranked[0]] == distances[ranked[1]]:
            raise AmbiguousSelector(f"hint {float(center_re)}{float(center_im):+}i is equidistant from two roots "
                                    f"of {poly}", operation="from_hint")
        chosen = ranked[0]
        others = roots[:chosen] + roots[chosen + 1:]
        region = RootRegion.around(roots[chosen], others, Fraction(1, 1 << bits))
        if region is not None:
            return make_algebraic(poly, region, bits)
    raise PrecisionBudgetExceeded(f"could not separate the root of {poly} near the hint", operation="from_hint")


def complex_conjugate(alpha: AlgebraicNumber) -> AlgebraicNumber:
    # root sets of integer polynomials are closed under conjugation
    return AlgebraicNumber(alpha.minpoly, alpha.selector.conjugate())


def _radius_ok(ball: Ball, precision: int) -> bool:
    bound = (flint.arb(1) + abs(ball.value.mid())) * flint.arb(2) ** (1 - precision)
    return ball.rad <= bound


@lru_cache(maxsize=4096)
def approximate(alpha: AlgebraicNumber, precision: Optional[int] = None) -> Ball:
    """Ball containing the selected root with rad <= 2^(1-precision)(1+|mid|)."""
    precision = precision or _default_start()
    if precision < 16:
        raise ValueError(f"precision must be at least 16 bits, got: {precision}")
    if alpha.is_rational:
        with working_precision(precision):
            return Ball.exact(alpha.as_fraction())
    for bits in precision_ladder(precision):
        roots = alpha.minpoly.roots(bits)
        chosen = [r for r in roots if alpha.selector.encloses(r)]
        if len(chosen) == 1 and _radius_ok(chosen[0], precision):
            return chosen[0]
    raise PrecisionBudgetExceeded(f"could not reach {precision} bits for {alpha}", operation="approximate")


def conjugate_enclosures(alpha: AlgebraicNumber, precision: Optional[int] = None) -> List[Ball]:
    """One pairwise-disjoint Ball per root of the minimal polynomial."""
    precision = precision or _default_start()
    if alpha.is_rational:
        return [approximate(alpha, precision)]
    for bits in precision_ladder(precision):
        roots = alpha.minpoly.roots(bits)
        disjoint = all(
            not roots[i].overlaps(roots[j])
            for i in range(len(roots))
            for j in range(i + 1, len(roots))
        )
        if len(roots) == alpha.degree and disjoint:
            return roots
    raise PrecisionBudgetExceeded(f"could not separate the conjugates of {alpha}", operation="conjugate_enclosures")
