"""
Growth sequences whose divergence (single products) or unbounded limsup
(arrays) the criteria require.

    single product  H_n = |alpha_n|^(1 / (D^n prod_{i<n} (D_i + d_i)))
    array           H_n = |alpha_{n,1}|^(1 / (D^n n! prod_{i<n} D_i))

Exact power forms (base, exponent) are kept whenever the alphas are
exact powers, so ties such as H_n = 4 for every n are decided exactly.
"""

import math
from fractions import Fraction
from typing import List, Optional, Tuple

import flint

from algebra.ball import Ball, Verdict, decide, precision_ladder, to_arb, working_precision
from criteria.terms import Index, TermGenerator
from criteria.tower import TowerInfo, tower_info
from utils.config import get_config

PowerForm = Tuple[int, Fraction]


def _is_array(spec) -> bool:
    return hasattr(spec, "antidiagonal")


def leading_index(spec, n: int) -> Index:
    return (n, 1) if _is_array(spec) else (n,)


def growth_denominators(spec, N: int, tower: TowerInfo) -> List[int]:
    out = []
    for n in range(1, N + 1):
        if _is_array(spec):
            prod = math.prod(tower.D_at(i) for i in range(1, n))
            out.append(spec.D ** n * math.factorial(n) * prod)
        else:
            prod = math.prod(tower.D_at(i) + tower.d_at(i) for i in range(1, n))
            out.append(spec.D ** n * prod)
    return out


def growth_exponents(spec, N: int, tower: Optional[TowerInfo] = None,
                     precision: Optional[int] = None) -> List[Optional[PowerForm]]:
    """H_n as (base, exponent) with base not a perfect power, or None where no exact form exists."""
    tower = tower or tower_info(spec, N, precision)
    forms = []
    for n, E in enumerate(growth_denominators(spec, N, tower), 1):
        form = spec.alpha.power_form(leading_index(spec, n))
        if form is None:
            forms.append(None)
        elif form[0] in (0, 1):
            forms.append((form[0], Fraction(1)))
        else:
            forms.append((form[0], Fraction(form[1]) / E))
    return forms


def growth_logs(spec, N: int, precision: int, tower: Optional[TowerInfo] = None) -> List[flint.arb]:
    tower = tower or tower_info(spec, N, precision)
    logs = []
    for n, E in enumerate(growth_denominators(spec, N, tower), 1):
        la = spec.alpha.log_abs(leading_index(spec, n), precision)
        with working_precision(precision):
            logs.append(la / E)
    return logs


def growth_sequence(spec, N: int, precision: Optional[int] = None,
                    tower: Optional[TowerInfo] = None) -> List[Ball]:
    precision = precision or get_config().precision.start_bits
    logs = growth_logs(spec, N, precision, tower)
    with working_precision(precision):
        return [Ball.from_arb(l.exp()) for l in logs]


# ordering helpers


def _power_log(form: PowerForm) -> flint.arb:
    base, exponent = form
    if base == 1:
        return flint.arb(0)
    return to_arb(exponent) * flint.arb(base).log()


def compare_powers(p: PowerForm, q: PowerForm, precision: int) -> Optional[int]:
    """Sign of base_p^exp_p - base_q^exp_q for normalized positive power forms."""
    if p == q:
        return 0
    if p[0] == 0 or q[0] == 0:
        return (p[0] != 0) - (q[0] != 0)
    if p[0] == q[0] and p[0] > 1:
        return (p[1] > q[1]) - (p[1] < q[1])
    # distinct normalized forms are distinct numbers, so refinement terminates below the cap
    for bits in precision_ladder(precision):
        with working_precision(bits):
            lp, lq = _power_log(p), _power_log(q)
            if lp < lq:
                return -1
            if lp > lq:
                return 1
    return None


def modulus_order(gen: TermGenerator, i: Index, j: Index, precision: int) -> Tuple[Optional[int], Ball, Ball]:
    """(sign of |gen_i| - |gen_j|, ln|gen_i|, ln|gen_j|)."""
    with working_precision(precision):
        li = Ball.from_arb(gen.log_abs(i, precision))
        lj = Ball.from_arb(gen.log_abs(j, precision))
    vi, vj = gen.exact_value(i), gen.exact_value(j)
    if vi is not None and vj is not None:
        return (abs(vi) > abs(vj)) - (abs(vi) < abs(vj)), li, lj
    fi, fj = gen.power_form(i), gen.power_form(j)
    if fi is not None and fj is not None:
        return compare_powers(fi, fj, precision), li, lj
    verdict, lhs, rhs = decide(lambda bits: (Ball.from_arb(gen.log_abs(i, bits)),
                                             Ball.from_arb(gen.log_abs(j, bits))), "<", precision)
    if verdict is Verdict.VERIFIED:
        return -1, lhs, rhs
    if verdict is Verdict.VIOLATED:
        return (1 if lhs.real > rhs.real else 0), lhs, rhs
    return None, lhs, rhs


def increase_verdict(order: Optional[int]) -> Verdict:
    """Verdict of 'strictly increasing' from the sign of previous - next."""
    if order is None:
        return Verdict.INCONCLUSIVE
    return Verdict.VERIFIED if order < 0 else Verdict.VIOLATED


def growth_order(forms: List[Optional[PowerForm]], logs_at, i: int, j: int, precision: int) -> Optional[int]:
    """Sign of H_i - H_j (1-based), from power forms when both exist, else from the logs."""
    fi, fj = forms[i - 1], forms[j - 1]
    if fi is not None and fj is not None:
        return compare_powers(fi, fj, precision)
    verdict, lhs, rhs = decide(lambda bits: tuple(Ball.from_arb(l) for l in logs_at(bits, (i, j))), "<", precision)
    if verdict is Verdict.VERIFIED:
        return -1
    if verdict is Verdict.VIOLATED:
        return 1 if lhs.real > rhs.real else 0
    return None
