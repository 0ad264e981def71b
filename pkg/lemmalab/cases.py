"""
Lemma cases: a lemma id, its typed parameters and the checked prefix P.

Sequences are grammar expressions in n, optionally written as a ratio
'p/q' (size_of_product uses a_n = 1/2^n). Infinite sums are cut at P and
closed with a TailMajorant that is verified on the prefix.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import flint

from algebra.ball import Ball, working_precision
from cli.grammar import Magnitude, RatioExpression, parse_ratio
from criteria.majorant import TailMajorant

LEMMA_IDS = (
    "series_upper",
    "jump",
    "series_general",
    "series_fast",
    "corollary_fast",
    "prod_huge",
    "size_of_product",
)

REQUIRED = {
    "series_upper": ("a", "epsilon", "majorant"),
    "jump": ("a",),
    "series_general": ("a", "epsilon", "majorant"),
    "series_fast": ("a", "epsilon", "majorant"),
    "corollary_fast": ("a", "epsilon", "intervals"),
    "prod_huge": ("a",),
    "size_of_product": ("a", "majorant"),
}


def _sign(v) -> int:
    if isinstance(v, Magnitude):
        return v.sign
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class RealSequence:
    """n -> p(n)/q(n) for generator expressions p and q."""
    ratio: RatioExpression

    @classmethod
    def parse(cls, text) -> "RealSequence":
        return cls(parse_ratio(str(text), ("n",)))

    def _parts(self, n: int):
        env = {"n": n}
        num = self.ratio.numerator.value(env)
        den = 1 if self.ratio.denominator is None else self.ratio.denominator.value(env)
        if den == 0:
            raise ValueError(f"'{self}' divides by zero at n = {n}")
        return num, den

    def exact(self, n: int) -> Optional[Fraction]:
        num, den = self._parts(n)
        if isinstance(num, Magnitude) or isinstance(den, Magnitude):
            return None
        return Fraction(num, den)

    def sign(self, n: int) -> int:
        num, den = self._parts(n)
        return _sign(num) * _sign(den)

    def log_abs(self, n: int, precision: int) -> Optional[flint.arb]:
        """ln|a_n|, None when a_n = 0."""
        env = {"n": n}
        with working_precision(precision):
            top = self.ratio.numerator.log_abs(env)
            if top is None:
                return None
            if self.ratio.denominator is None:
                return top
            return top - self.ratio.denominator.log_abs(env)

    def ball(self, n: int, precision: int) -> Ball:
        exact = self.exact(n)
        with working_precision(precision):
            if exact is not None:
                return Ball.exact(exact)
            return Ball.from_arb(self.sign(n) * self.log_abs(n, precision).exp())

    def probe(self, n: int, precision: int):
        """(|a_n| exactly or None, ln|a_n|) for majorant verification."""
        exact = self.exact(n)
        return (None if exact is None else abs(exact)), self.log_abs(n, precision)

    def reciprocal_probe(self, n: int, precision: int):
        exact = self.exact(n)
        log = self.log_abs(n, precision)
        if exact == 0 or log is None:
            raise ValueError(f"'{self}' vanishes at n = {n}")
        return (None if exact is None else 1 / abs(exact)), -log

    def __str__(self) -> str:
        return str(self.ratio)


def _defaults(lemma_id: str) -> Dict[str, Any]:
    if lemma_id in ("series_upper", "series_general", "series_fast"):
        return {"N": 1}
    if lemma_id == "jump":
        return {"k": None}
    if lemma_id == "prod_huge":
        return {"D": 1, "D_n": RealSequence.parse("1"), "delta": Fraction(0)}
    return {}


@dataclass(frozen=True)
class LemmaCase:
    """
    Parameters by lemma:

        series_upper      a, epsilon, N, majorant (for 1/a_n)
        jump              a, k (None: k = N)
        series_general    a = |alpha_{n,1}|, epsilon, N, majorant (for the summand)
        series_fast       as series_general
        corollary_fast    a, epsilon, intervals ((t, k), ...)
        prod_huge         a, D, D_n, delta
        size_of_product   a, majorant (for |a_n|)
    """
    lemma_id: str
    params: Dict[str, Any] = field(default_factory=dict)
    prefix_N: int = 20
    name: str = ""

    def __post_init__(self):
        if self.lemma_id not in LEMMA_IDS:
            raise ValueError(f"Unknown lemma: {self.lemma_id}. Must be one of {', '.join(LEMMA_IDS)}")
        minimum = 2 if self.lemma_id in ("jump", "prod_huge") else 1
        if self.prefix_N < minimum:
            raise ValueError(f"{self.lemma_id} needs a prefix of at least {minimum}, got: {self.prefix_N}")
        params = _defaults(self.lemma_id)
        params.update(self.params)
        missing = [key for key in REQUIRED[self.lemma_id] if key not in params]
        if missing:
            raise ValueError(f"{self.lemma_id} is missing parameters: {', '.join(missing)}")
        unknown = sorted(set(params) - set(REQUIRED[self.lemma_id]) - set(_defaults(self.lemma_id)))
        if unknown:
            raise ValueError(f"{self.lemma_id} does not take parameters: {', '.join(unknown)}")
        object.__setattr__(self, "params", params)
        self._validate()

    def _validate(self) -> None:
        p = self.params
        if "epsilon" in p and not p["epsilon"] > 0:
            raise ValueError(f"epsilon must be positive, got: {p['epsilon']}")
        if "N" in p and not 1 <= p["N"] <= self.prefix_N:
            raise ValueError(f"N must lie in 1..{self.prefix_N}, got: {p['N']}")
        majorant: Optional[TailMajorant] = p.get("majorant")
        if majorant is not None and majorant.start > self.prefix_N + 1:
            raise ValueError(f"majorant starts at {majorant.start}, past the prefix end {self.prefix_N} + 1")
        if p.get("k") is not None and p["k"] < 1:
            raise ValueError(f"k must be a positive integer, got: {p['k']}")
        if self.lemma_id == "prod_huge":
            if p["D"] < 1:
                raise ValueError(f"D must be at least 1, got: {p['D']}")
            if not 0 <= p["delta"] < 1:
                raise ValueError(f"delta must lie in [0, 1), got: {p['delta']}")
        if self.lemma_id == "corollary_fast":
            self._validate_intervals(p["intervals"])

    def _validate_intervals(self, intervals: Tuple[Tuple[int, int], ...]) -> None:
        if not intervals:
            raise ValueError("corollary_fast needs at least one interval")
        last = 0
        for t, k in sorted(intervals):
            if not 1 <= t <= k <= self.prefix_N:
                raise ValueError(f"interval [{t}, {k}] must satisfy 1 <= t <= k <= {self.prefix_N}")
            if t <= last:
                raise ValueError(f"interval [{t}, {k}] overlaps a previous one")
            last = k

    @property
    def case_id(self) -> str:
        return self.name or self.lemma_id
