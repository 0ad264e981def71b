"""
Primitive elements of towers Q(t_1, ..., t_k) and relative degrees.

Adjoining gamma to Q(beta) uses theta = beta + s*gamma for the first
s in 1, -1, 2, -2, ... whose resultant Res_y(g(y), f(x - s*y)) is
squarefree; theta then generates Q(beta, gamma).
"""

from itertools import count
from typing import Iterator, Optional, Sequence, Tuple

from algebra.arith import select_root, sum_annihilator
from algebra.errors import DegreeCapExceeded, FactorSelectionAmbiguous
from algebra.number import AlgebraicNumber, approximate, rational
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


def _shifts(limit: int) -> Iterator[int]:
    for k in count(1):
        if k > limit:
            return
        yield k
        yield -k


def adjoin(beta: AlgebraicNumber, gamma: AlgebraicNumber,
           precision: Optional[int] = None) -> AlgebraicNumber:
    """Primitive element of Q(beta, gamma)."""
    cap = get_config().algebra.degree_cap
    if beta.degree * gamma.degree > cap:
        raise DegreeCapExceeded(
            f"tower degree bound {beta.degree * gamma.degree} exceeds cap {cap}", operation="primitive_element"
        )
    # at most deg(f)^2 deg(g)^2 / 2 shifts are bad
    limit = (beta.degree * gamma.degree) ** 2
    for s in _shifts(limit):
        candidate = sum_annihilator(gamma.minpoly, beta.minpoly, s)
        if not candidate.is_squarefree():
            continue
        logger.debug(f"primitive element beta {s:+d}*gamma, candidate degree {candidate.degree}")
        return select_root(
            candidate,
            lambda bits, s=s: approximate(beta, bits) + s * approximate(gamma, bits),
            "primitive_element",
            precision,
        )
    raise FactorSelectionAmbiguous(f"no separating shift found up to {limit}", operation="primitive_element")


def primitive_element(tower: Sequence[AlgebraicNumber],
                      precision: Optional[int] = None) -> Tuple[AlgebraicNumber, int]:
    """(theta, [Q(tower):Q]) with Q(theta) = Q(tower)."""
    theta = rational(0)
    for gamma in tower:
        if gamma.is_rational:
            continue
        theta = gamma if theta.is_rational else adjoin(theta, gamma, precision)
    return theta, theta.degree


def degree_over(alpha: AlgebraicNumber, tower: Sequence[AlgebraicNumber],
                precision: Optional[int] = None) -> int:
    """[Q(tower, alpha) : Q(tower)]."""
    if alpha.is_rational:
        return 1
    theta, base = primitive_element(tower, precision)
    if base == 1:
        return alpha.degree
    cap = get_config().algebra.degree_cap
    if base * alpha.degree > cap:
        raise DegreeCapExceeded(f"tower degree {base} times deg(alpha) {alpha.degree} exceeds cap {cap}",
                                operation="degree_over")
    extended = adjoin(theta, alpha, precision)
    return extended.degree // base
