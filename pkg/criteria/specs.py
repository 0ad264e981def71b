"""Declarative descriptions of the sequence and array products under test."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

import flint

from algebra.ball import working_precision
from criteria.majorant import TailMajorant
from criteria.terms import Index, TermGenerator, ratio_fraction, ratio_log

SIGN_MODES = ("main", "I", "II", "III", "IV")


@dataclass(frozen=True)
class SequenceSpec:
    """prod_n (1 + b_n / alpha_n) with the parameters of the single-product criterion."""
    alpha: TermGenerator
    b: TermGenerator
    epsilon: Fraction
    a: Fraction
    e: int
    D: int
    tail_majorant: Optional[TailMajorant] = None
    declared_degrees: Optional[Tuple[int, ...]] = None
    asserted: FrozenSet[str] = field(default_factory=frozenset)
    validity_start: int = 1
    name: str = ""

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got: {self.epsilon}")
        if not 0 < self.a < 1:
            raise ValueError(f"a must lie in (0, 1), got: {self.a}")
        if self.e not in (-1, 1):
            raise ValueError(f"e must be -1 or 1, got: {self.e}")
        if self.D < 1:
            raise ValueError(f"D must be at least 1, got: {self.D}")
        if self.validity_start < 1:
            raise ValueError(f"validity_start must be at least 1, got: {self.validity_start}")

    @staticmethod
    def index(n: int) -> Index:
        return (n,)

    @property
    def length(self) -> Optional[int]:
        lengths = [g.length for g in (self.alpha, self.b) if g.length is not None]
        return min(lengths) if lengths else None

    def term_fraction(self, n: int) -> Optional[Fraction]:
        return ratio_fraction(self.alpha, self.b, (n,))

    def term_log(self, n: int, precision: int) -> flint.arb:
        return ratio_log(self.alpha, self.b, (n,), precision)

    def probe(self, n: int, precision: int):
        exact = self.term_fraction(n)
        if exact == 0:
            return exact, None
        return exact, self.term_log(n, precision)


@dataclass(frozen=True)
class ArraySpec:
    """prod_m (1 + sum_n b_{n,m} / alpha_{n,m}) with the parameters of the array criterion."""
    alpha: TermGenerator
    b: TermGenerator
    epsilon: Fraction
    e: int
    D: int
    sign_mode: str = "main"
    X: Optional[Fraction] = None
    R: Optional[Fraction] = None
    tail_majorant: Optional[TailMajorant] = None
    diagnostic_majorant: Optional[TailMajorant] = None
    declared_degrees: Optional[Tuple[int, ...]] = None
    asserted: FrozenSet[str] = field(default_factory=frozenset)
    validity_start: int = 1
    name: str = ""

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got: {self.epsilon}")
        if self.e not in (-1, 1):
            raise ValueError(f"e must be -1 or 1, got: {self.e}")
        if self.D < 1:
            raise ValueError(f"D must be at least 1, got: {self.D}")
        if self.sign_mode not in SIGN_MODES:
            raise ValueError(f"Unknown sign mode: {self.sign_mode}. Must be one of {', '.join(SIGN_MODES)}")
        if self.X is not None and not 0 < self.X < 1:
            raise ValueError(f"X must lie in (0, 1), got: {self.X}")
        if self.R is not None and self.X is not None and not 1 <= self.R < 1 / self.X:
            raise ValueError(f"R must lie in [1, 1/X), got: R={self.R}, X={self.X}")
        if self.tail_majorant is not None and self.tail_majorant.kind == "power":
            raise ValueError("power majorants apply to sequences only")
        if self.declared_degrees is not None:
            if any(b < a for a, b in zip(self.declared_degrees, self.declared_degrees[1:])):
                raise ValueError("declared field degrees D_n must be nondecreasing")

    @staticmethod
    def antidiagonal(k: int) -> List[Index]:
        """Indices (n, m) with n + m = k + 1, in order m = 1..k."""
        return [(k - j + 1, j) for j in range(1, k + 1)]

    @staticmethod
    def triangle(N: int) -> List[Index]:
        return [idx for k in range(1, N + 1) for idx in ArraySpec.antidiagonal(k)]

    def antidiagonal_fraction(self, k: int) -> Optional[Fraction]:
        total = Fraction(0)
        for idx in self.antidiagonal(k):
            f = ratio_fraction(self.alpha, self.b, idx)
            if f is None:
                return None
            total += abs(f)
        return total

    def antidiagonal_log(self, k: int, precision: int) -> Optional[flint.arb]:
        """ln of sum_j |b/alpha| over anti-diagonal k (None when every term is zero)."""
        logs = [ratio_log(self.alpha, self.b, idx, precision) for idx in self.antidiagonal(k)]
        with working_precision(precision):
            return log_sum_exp(logs)

    def probe(self, k: int, precision: int):
        exact = self.antidiagonal_fraction(k)
        if exact == 0:
            return exact, None
        return exact, self.antidiagonal_log(k, precision)


def log_sum_exp(logs: List[flint.arb]) -> Optional[flint.arb]:
    """ln sum_j exp(l_j) without overflow."""
    if not logs:
        return None
    top = max(logs, key=lambda l: float(l.mid()))
    return top + sum(((l - top).exp() for l in logs), flint.arb(0)).log()
