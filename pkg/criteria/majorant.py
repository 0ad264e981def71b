"""
Tail majorants: declared bounds on |term_n| from a start index on, and the
tail sums they imply.

    geometric(c, r)   |term_n| <= c r^n              0 < r < 1
    polynomial(c, p)  |term_n| <= c n^(-p)           p > 1
    power(eps')       a_n = 1/|term_n| increasing, a_n > n^(1+eps');
                      sum_{n>=k} 1/a_n < (2 + 1/eps') / a_k^(eps'/(1+eps'))
    explicit(bounds)  |term_n| <= bounds[n - start], zero past the list
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Tuple

import flint

from algebra.ball import to_arb, working_precision
from criteria.errors import MajorantUnverified
from utils.logging_utils import get_logger

logger = get_logger(__name__)

KINDS = ("geometric", "power", "polynomial", "explicit")

# (exact value or None, ln |term|) at a precision
TermProbe = Callable[[int, int], Tuple[Optional[Fraction], Optional[flint.arb]]]


@dataclass(frozen=True)
class TailMajorant:
    kind: str
    start: int = 1
    c: Fraction = Fraction(1)
    r: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    p: Optional[Fraction] = None
    bounds: Tuple[Fraction, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown majorant kind: {self.kind}. Must be one of {', '.join(KINDS)}")
        if self.start < 1:
            raise ValueError(f"majorant start must be >= 1, got: {self.start}")
        if self.kind == "geometric":
            if self.c <= 0 or self.r is None or not 0 < self.r < 1:
                raise ValueError(f"geometric majorant needs c > 0 and 0 < r < 1, got c={self.c}, r={self.r}")
        elif self.kind == "polynomial":
            if self.c <= 0 or self.p is None or self.p <= 1:
                raise ValueError(f"polynomial majorant needs c > 0 and p > 1, got c={self.c}, p={self.p}")
        elif self.kind == "power":
            if self.epsilon is None or self.epsilon <= 0:
                raise ValueError(f"power majorant needs epsilon > 0, got: {self.epsilon}")
        elif any(b < 0 for b in self.bounds):
            raise ValueError("explicit majorant bounds must be nonnegative")

    @property
    def is_finite(self) -> bool:
        """Declares every term past the explicit list to be zero."""
        return self.kind == "explicit"

    def term_bound(self, n: int) -> Optional[Fraction]:
        """Exact bound on |term_n| (None for the power kind and fractional p)."""
        if self.kind == "geometric":
            return self.c * self.r ** n
        if self.kind == "polynomial":
            return self.c / Fraction(n) ** self.p.numerator if self.p.denominator == 1 else None
        if self.kind == "explicit":
            k = n - self.start
            return self.bounds[k] if 0 <= k < len(self.bounds) else Fraction(0)
        return None

    def term_bound_log(self, n: int) -> flint.arb:
        if self.kind == "polynomial":
            return to_arb(self.c).log() - to_arb(self.p) * flint.arb(n).log()
        if self.kind == "power":
            return -(1 + to_arb(self.epsilon)) * flint.arb(n).log()
        bound = self.term_bound(n)
        return to_arb(bound).log()

    def tail_from(self, k: int, log_a_k: Optional[flint.arb] = None) -> flint.arb:
        """Upper bound on sum_{n >= k} |term_n|, for k >= start."""
        if k < self.start:
            raise ValueError(f"majorant is only valid from {self.start}, tail requested from {k}")
        if self.kind == "geometric":
            return to_arb(self.c * self.r ** k / (1 - self.r))
        if self.kind == "explicit":
            return to_arb(sum(self.bounds[max(k - self.start, 0):], Fraction(0)))
        if self.kind == "polynomial":
            p = to_arb(self.p)
            kk = flint.arb(k)
            return to_arb(self.c) * (kk ** (-p) + kk ** (1 - p) / (p - 1))
        if log_a_k is None:
            raise ValueError("power majorant tail needs ln a_k")
        eps = to_arb(self.epsilon)
        return (2 + 1 / eps) * (-(eps / (1 + eps)) * log_a_k).exp()

    def describe(self) -> str:
        if self.kind == "geometric":
            return f"geometric(c={self.c}, r={self.r}) from {self.start}"
        if self.kind == "polynomial":
            return f"polynomial(c={self.c}, p={self.p}) from {self.start}"
        if self.kind == "power":
            return f"power(eps={self.epsilon}) from {self.start}"
        return f"explicit({len(self.bounds)} bounds) from {self.start}"


def verify_majorant(majorant: TailMajorant, probe: TermProbe, upto: int, precision: int) -> int:
    """
    Check |term_n| <= bound(n) for start <= n <= upto (and, for the power
    kind, that 1/|term_n| increases and exceeds n^(1+eps')). Returns the
    number of indices checked.
    """
    checked = 0
    previous_log = None
    for n in range(majorant.start, upto + 1):
        exact, log = probe(n, precision)
        bound = majorant.term_bound(n)
        if exact is not None and bound is not None:
            ok = abs(exact) <= bound
        elif exact == 0 or log is None:
            ok = True
        elif bound == 0:
            ok = False
        else:
            with working_precision(precision):
                limit = majorant.term_bound_log(n)
                ok = bool(log < limit) if majorant.kind == "power" else bool(log <= limit)
        if majorant.kind == "power" and ok and previous_log is not None and log is not None:
            with working_precision(precision):
                ok = bool(log < previous_log)
        if not ok:
            raise MajorantUnverified(f"{majorant.describe()} does not bound term {n}",
                                     operation="verify_majorant", coordinates=n)
        previous_log = log
        checked += 1
    logger.debug(f"{majorant.describe()} verified on {checked} indices")
    return checked
