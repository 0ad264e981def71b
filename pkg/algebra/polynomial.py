"""Integer polynomials, lowest degree first."""

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Tuple

import flint
import sympy

from algebra.ball import Ball, working_precision
from algebra.errors import ZeroPolynomial


@dataclass(frozen=True)
class IntegerPolynomial:
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            raise ZeroPolynomial("the zero polynomial has no roots", operation="IntegerPolynomial")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[int]) -> "IntegerPolynomial":
        return cls(tuple(coefficients))

    @classmethod
    def from_flint(cls, poly: flint.fmpz_poly) -> "IntegerPolynomial":
        return cls(tuple(int(c) for c in poly.coeffs()))

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "IntegerPolynomial":
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def constant(self) -> int:
        return self.coefficients[0]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def content(self) -> int:
        g = 0
        for c in self.coefficients:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntegerPolynomial":
        """Divide out the content and make the leading coefficient positive."""
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntegerPolynomial(tuple(c // g for c in self.coefficients))

    def reversed(self) -> "IntegerPolynomial":
        """x^d f(1/x); roots are the reciprocals of the nonzero roots."""
        return IntegerPolynomial(tuple(reversed(self.coefficients)))

    def negated_argument(self) -> "IntegerPolynomial":
        """f(-x); roots are negated."""
        return IntegerPolynomial(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coefficients)))

    def scaled_roots(self, s: int) -> "IntegerPolynomial":
        """Polynomial whose roots are s times the roots of self (s != 0)."""
        d = self.degree
        return IntegerPolynomial(tuple(c * s ** (d - k) for k, c in enumerate(self.coefficients)))

    def to_flint(self) -> flint.fmpz_poly:
        return flint.fmpz_poly(list(self.coefficients))

    def to_sympy(self, symbol: sympy.Symbol) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coefficients)), symbol, domain="ZZ")

    def as_expr(self, variable) -> sympy.Expr:
        return sum(c * variable ** k for k, c in enumerate(self.coefficients))

    def evaluate(self, z: Ball) -> Ball:
        """Horner evaluation in Ball arithmetic."""
        acc = Ball.exact(self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            acc = acc * z + c
        return acc

    def factor(self) -> List[Tuple["IntegerPolynomial", int]]:
        _, factors = self.to_flint().factor()
        return [(IntegerPolynomial.from_flint(p), int(e)) for p, e in factors]

    def is_squarefree(self) -> bool:
        p = self.to_flint()
        return p.gcd(p.derivative()).degree() == 0

    def is_irreducible(self) -> bool:
        factors = self.factor()
        return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == self.degree

    def roots(self, precision: int) -> List[Ball]:
        """Certified isolating Balls for the roots, real roots first."""
        with working_precision(precision):
            return [Ball(r) for r, _ in self.to_flint().complex_roots()]

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and k > 0) else str(mag)
            if k >= 1:
                body += "x" if k == 1 else f"x^{k}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out
