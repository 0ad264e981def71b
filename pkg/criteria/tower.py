"""
Degree bookkeeping of the fields generated by a spec's alphas.

Single products: K_n = K_{n-1}(alpha_n), d_n = [K_n : K_{n-1}], D_n = prod d_i.
Arrays: K_n adjoins anti-diagonal n, D_n = [K_n : Q], d_n = D_n / D_{n-1}.
Degrees are verified through primitive elements while the tower stays
under the degree cap; past it the declared degrees take over.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from algebra.errors import DegreeCapExceeded
from algebra.number import rational
from algebra.tower import adjoin
from criteria.errors import MissingDegrees
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

VERIFIED = "verified"
DECLARED = "declared"


@dataclass(frozen=True)
class TowerInfo:
    theorem: int
    d: Tuple[int, ...]
    D: Tuple[int, ...]
    source: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.d)

    def d_at(self, n: int) -> int:
        return self.d[n - 1]

    def D_at(self, n: int) -> int:
        """D_n, with D_0 = 1."""
        return 1 if n == 0 else self.D[n - 1]

    @property
    def verified_upto(self) -> int:
        count = 0
        for s in self.source:
            if s != VERIFIED:
                break
            count += 1
        return count

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "d": list(self.d), "D": list(self.D), "source": list(self.source)}


def _groups(spec, N: int) -> List[list]:
    if hasattr(spec, "antidiagonal"):
        return [spec.antidiagonal(k) for k in range(1, N + 1)]
    return [[(n,)] for n in range(1, N + 1)]


def _declared(spec, n: int) -> int:
    declared = spec.declared_degrees
    if declared is None or len(declared) < n:
        raise MissingDegrees(f"field degree at step {n} exceeds the degree cap "
                             f"{get_config().algebra.degree_cap} and none was declared",
                             operation="tower_info", coordinates=n)
    return declared[n - 1]


def tower_info(spec, N: int, precision: Optional[int] = None) -> TowerInfo:
    if N < 1:
        raise ValueError(f"tower_info needs N >= 1, got: {N}")
    theorem = 2 if hasattr(spec, "antidiagonal") else 1
    d: List[int] = []
    D: List[int] = []
    source: List[str] = []
    theta = rational(0)
    verifying = True

    for n, group in enumerate(_groups(spec, N), 1):
        previous = D[-1] if D else 1
        field_degree = None
        if verifying:
            try:
                extended = theta
                for idx in group:
                    if spec.alpha.degree(idx) == 1:
                        continue
                    gamma = spec.alpha.number(idx, precision)
                    extended = gamma if extended.is_rational else adjoin(extended, gamma, precision)
                theta = extended
                field_degree = extended.degree
            except DegreeCapExceeded as e:
                logger.info(f"Tower verification stops at step {n}: {e}")
                verifying = False

        if field_degree is not None:
            d_n, D_n = field_degree // previous, field_degree
            declared = spec.declared_degrees
            if declared is not None and len(declared) >= n:
                found = d_n if theorem == 1 else D_n
                if declared[n - 1] != found:
                    logger.warning(f"Declared degree {declared[n - 1]} at step {n} disagrees with the "
                                   f"verified {found}; using the verified value")
            source.append(VERIFIED)
        elif theorem == 1:
            d_n = _declared(spec, n)
            D_n = previous * d_n
            source.append(DECLARED)
        else:
            D_n = _declared(spec, n)
            if D_n % previous:
                raise ValueError(f"declared D_{n} = {D_n} is not a multiple of D_{n - 1} = {previous}")
            d_n = D_n // previous
            source.append(DECLARED)
        d.append(d_n)
        D.append(D_n)

    info = TowerInfo(theorem, tuple(d), tuple(D), tuple(source))
    logger.debug(f"Tower to {N}: d={info.d}, D={info.D}, verified up to {info.verified_upto}")
    return info
