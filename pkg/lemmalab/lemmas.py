"""
Executable checks of the auxiliary lemmas on concrete cases.

Every comparison is between two Balls. Infinite sums are enclosed as the
explicit prefix sum widened by the majorant tail beyond P, and the
"infinitely many N" lemmas become a search over 1..P-1 that reports the
first N found. A certain violation is a counterexample candidate: the
lemmas are proven, so one that survives a precision doubling points at a
bug or at a misread hypothesis and is logged at ERROR.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import flint

from algebra.ball import Ball, Verdict, ball_max, decide, holds, precision_cap, to_arb, working_precision
from criteria.majorant import verify_majorant
from criteria.theorem2 import loglog_exponent
from lemmalab.cases import LemmaCase, RealSequence
from lemmalab.errors import PreconditionFailed
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)


class LemmaVerdict(str, Enum):
    VERIFIED = "verified"
    INCONCLUSIVE = "inconclusive"
    CANDIDATE = "counterexample-candidate"


@dataclass
class Comparison:
    label: str
    verdict: Verdict
    lhs: Ball
    rhs: Ball
    coordinates: Any = None

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "label": self.label,
            "verdict": self.verdict.value,
            "lhs": self.lhs.describe(digits),
            "rhs": self.rhs.describe(digits),
            "coordinates": self.coordinates,
        }


@dataclass
class LemmaReport:
    lemma_id: str
    verdict: LemmaVerdict
    lhs: Optional[Ball]
    rhs: Optional[Ball]
    note: str
    precision: int
    coordinates: Any = None
    comparisons: List[Comparison] = field(default_factory=list)
    case_id: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is LemmaVerdict.VERIFIED

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "id": self.case_id or self.lemma_id,
            "lemma": self.lemma_id,
            "verdict": self.verdict.value,
            "lhs": None if self.lhs is None else self.lhs.describe(digits),
            "rhs": None if self.rhs is None else self.rhs.describe(digits),
            "note": self.note,
            "precision": self.precision,
            "coordinates": self.coordinates,
            "comparisons": [c.to_dict(digits) for c in self.comparisons],
        }


def _summarize(case: LemmaCase, comparisons: List[Comparison], precision: int, note: str) -> LemmaReport:
    """Candidate on any violation, verified when every comparison is."""
    violated = [c for c in comparisons if c.verdict is Verdict.VIOLATED]
    open_ = [c for c in comparisons if c.verdict is Verdict.INCONCLUSIVE]
    if violated:
        verdict, focus = LemmaVerdict.CANDIDATE, violated[0]
    elif open_:
        verdict, focus = LemmaVerdict.INCONCLUSIVE, open_[0]
    else:
        verdict, focus = LemmaVerdict.VERIFIED, comparisons[0]
    return LemmaReport(case.lemma_id, verdict, focus.lhs, focus.rhs, note, precision, focus.coordinates,
                       comparisons, case.case_id)


# preconditions


def _require_positive(case: LemmaCase, a: RealSequence, indices) -> None:
    for n in indices:
        if a.sign(n) <= 0:
            raise PreconditionFailed(f"a_{n} = {a.exact(n)} is not positive", operation="verify_lemma",
                                     coordinates=(case.lemma_id, n))


def _above(a: RealSequence, n: int, base: int, exponent: Fraction, precision: int, strict: bool = True) -> Verdict:
    """a_n > base^exponent (>= when not strict) for a positive a_n."""
    exact = a.exact(n)
    p, q = exponent.numerator, exponent.denominator
    limit = get_config().criteria.exact_bits_limit
    if exact is not None and (exact.numerator.bit_length() + exact.denominator.bit_length()) * q <= limit \
            and base.bit_length() * p <= limit:
        lhs, rhs = exact ** q, Fraction(base) ** p
        return Verdict.VERIFIED if (lhs > rhs if strict else lhs >= rhs) else Verdict.VIOLATED

    def sides(bits: int):
        return (Ball.from_arb(a.log_abs(n, bits)),
                Ball.from_arb(to_arb(exponent) * flint.arb(base).log()))

    verdict, _, _ = decide(sides, ">" if strict else ">=", precision)
    return verdict


def _increases(a: RealSequence, n: int, precision: int, strict: bool = True) -> Verdict:
    """a_n < a_{n+1} (<= when not strict) for positive terms."""
    x, y = a.exact(n), a.exact(n + 1)
    if x is not None and y is not None:
        return Verdict.VERIFIED if (x < y if strict else x <= y) else Verdict.VIOLATED

    def sides(bits: int):
        return Ball.from_arb(a.log_abs(n, bits)), Ball.from_arb(a.log_abs(n + 1, bits))

    verdict, _, _ = decide(sides, "<" if strict else "<=", precision)
    return verdict


def _require(case: LemmaCase, verdict: Verdict, what: str, n: int) -> None:
    if verdict is Verdict.VERIFIED:
        return
    reason = "fails" if verdict is Verdict.VIOLATED else "could not be certified"
    raise PreconditionFailed(f"{what} {reason} at n = {n}", operation="verify_lemma",
                             coordinates=(case.lemma_id, n))


def _require_growth(case: LemmaCase, a: RealSequence, epsilon: Fraction, indices, precision: int,
                    strict: bool) -> None:
    """a positive and strictly increasing with a_n > n^(1+eps) (>= when not strict) on `indices`."""
    indices = list(indices)
    _require_positive(case, a, indices)
    for n in indices:
        _require(case, _above(a, n, n, 1 + epsilon, precision, strict), "a_n > n^(1+eps)", n)
    for n in indices[:-1]:
        _require(case, _increases(a, n, precision), "a_n < a_n+1", n)


def _require_loglog(case: LemmaCase, a: RealSequence, indices, precision: int) -> None:
    for n in indices:
        with working_precision(precision):
            if not a.log_abs(n, precision) > 1:
                raise PreconditionFailed(f"ln ln a_{n} is undefined or not positive", operation="verify_lemma",
                                         coordinates=(case.lemma_id, n))


# sums


def _with_tail(explicit: Ball, tail: flint.arb) -> Ball:
    """[explicit, explicit + tail] for a nonnegative tail bound."""
    return Ball.interval(explicit.lower(), (explicit.real + tail).upper())


def _summand_log(a: RealSequence, n: int, epsilon: Fraction, precision: int) -> flint.arb:
    """ln of a_n^(-1 + (ln ln a_n)^(-3-eps))."""
    with working_precision(precision):
        la = a.log_abs(n, precision)
        return la * (-1 + loglog_exponent(la, epsilon))


def _fast_bound(a: RealSequence, n: int, epsilon: Fraction, precision: int) -> Ball:
    """a_n^(-1 + (ln ln a_n)^(-3-eps/2))."""
    with working_precision(precision):
        la = a.log_abs(n, precision)
        return Ball.from_arb((la * (-1 + loglog_exponent(la, epsilon / 2))).exp())


def _summand_sum(a: RealSequence, indices, epsilon: Fraction, precision: int) -> Ball:
    with working_precision(precision):
        total = Ball.exact(0)
        for n in indices:
            total = total + Ball.from_arb(_summand_log(a, n, epsilon, precision).exp())
        return total


def _closing_tail(majorant, probe: Callable, P: int, precision: int) -> flint.arb:
    """Majorant tail from P + 1, after checking the majorant on start..P."""
    verify_majorant(majorant, probe, P, precision)
    with working_precision(precision):
        log_a = -probe(P + 1, precision)[1] if majorant.kind == "power" else None
        return majorant.tail_from(P + 1, log_a)


# lemmas


def _series_upper(case: LemmaCase, precision: int) -> LemmaReport:
    a, epsilon, N, majorant = (case.params[k] for k in ("a", "epsilon", "N", "majorant"))
    P = case.prefix_N
    _require_growth(case, a, epsilon, range(1, P + 1), precision, strict=True)
    tail = _closing_tail(majorant, a.reciprocal_probe, P, precision)
    with working_precision(precision):
        explicit = Ball.exact(0)
        for n in range(N, P + 1):
            exact, log = a.reciprocal_probe(n, precision)
            explicit = explicit + (Ball.exact(exact) if exact is not None else Ball.from_arb(log.exp()))
        lhs = _with_tail(explicit, tail)
        eps = to_arb(epsilon)
        rhs = Ball.from_arb(((2 + 1 / eps).log() - eps / (1 + eps) * a.log_abs(N, precision)).exp())
    comparison = Comparison("sum 1/a_n", holds(lhs, rhs, "<"), lhs, rhs, N)
    return _summarize(case, [comparison], precision, f"prefix {N}..{P} + {majorant.describe()}")


def _jump(case: LemmaCase, precision: int) -> LemmaReport:
    a = case.params["a"]
    fixed_k = case.params["k"] or get_config().lemmalab.jump_k
    P = case.prefix_N
    for N in range(1, P):
        k = fixed_k or N
        factor = Fraction(k * k + 1, k * k)
        values = [a.exact(n) for n in range(1, N + 2)]
        if all(v is not None for v in values):
            top = max(values[:-1])
            with working_precision(precision):
                lhs, rhs = Ball.exact(values[-1]), Ball.exact(factor * top)
            verdict = Verdict.VERIFIED if values[-1] > factor * top else Verdict.VIOLATED
        else:
            _require_positive(case, a, range(1, N + 2))

            def sides(bits: int, N=N, factor=factor):
                logs = [Ball.from_arb(a.log_abs(n, bits)) for n in range(1, N + 1)]
                top = ball_max(logs)
                return Ball.from_arb(a.log_abs(N + 1, bits)), top + Ball.from_arb(to_arb(factor).log())

            verdict, lhs, rhs = decide(sides, ">", precision)
            with working_precision(precision):
                lhs, rhs = lhs.exp(), rhs.exp()
        if verdict is Verdict.VERIFIED:
            comparison = Comparison(f"a_N+1 > (1 + 1/{k}^2) max a_n", verdict, lhs, rhs, N)
            return _summarize(case, [comparison], precision, f"jump at N = {N} with k = {k}")
    with working_precision(precision):
        zero = Ball.exact(0)
    return LemmaReport(case.lemma_id, LemmaVerdict.INCONCLUSIVE, zero, zero,
                       f"no jump found for N < {P}; the lemma only claims infinitely many", precision,
                       case_id=case.case_id)


def _series_tail(case: LemmaCase, precision: int, fast: bool) -> LemmaReport:
    a, epsilon, N, majorant = (case.params[k] for k in ("a", "epsilon", "N", "majorant"))
    P = case.prefix_N
    window = range(N, P + 1)
    _require_growth(case, a, epsilon, window, precision, strict=False)
    _require_loglog(case, a, range(min(N, majorant.start), P + 2), precision)
    if fast:
        for n in window:
            _require(case, _above(a, n, 2, Fraction(n), precision), "2^n < a_n", n)

    def probe(n: int, bits: int):
        return None, _summand_log(a, n, epsilon, bits)

    tail = _closing_tail(majorant, probe, P, precision)
    explicit = _summand_sum(a, window, epsilon, precision)
    with working_precision(precision):
        lhs = _with_tail(explicit, tail)
        if fast:
            rhs = _fast_bound(a, N, epsilon, precision)
        else:
            eps = to_arb(epsilon)
            rhs = Ball.from_arb((-(eps / (2 * (1 + eps))) * a.log_abs(N, precision)).exp())
    label = "fast tail" if fast else "general tail"
    comparison = Comparison(label, holds(lhs, rhs, "<"), lhs, rhs, N)
    return _summarize(case, [comparison], precision, f"prefix {N}..{P} + {majorant.describe()}")


def _corollary_fast(case: LemmaCase, precision: int) -> LemmaReport:
    a, epsilon = case.params["a"], case.params["epsilon"]
    comparisons = []
    for t, k in sorted(case.params["intervals"]):
        interval = range(t, k + 1)
        _require_positive(case, a, interval)
        _require_loglog(case, a, interval, precision)
        for n in interval:
            _require(case, _above(a, n, 2, Fraction(n), precision), "2^n < a_n", n)
        lhs = _summand_sum(a, interval, epsilon, precision)
        rhs = _fast_bound(a, t, epsilon, precision)
        comparisons.append(Comparison(f"[{t}, {k}]", holds(lhs, rhs, "<"), lhs, rhs, (t, k)))
    return _summarize(case, comparisons, precision, f"{len(comparisons)} disjoint intervals")


def _prod_huge(case: LemmaCase, precision: int) -> LemmaReport:
    a, D, D_n, delta = (case.params[k] for k in ("a", "D", "D_n", "delta"))
    P = case.prefix_N
    _require_positive(case, a, range(1, P + 1))
    for n in range(1, P):
        _require(case, _increases(a, n, precision, strict=False), "a_n <= a_n+1", n)
    degrees = []
    for i in range(1, P + 1):
        d = D_n.exact(i)
        if d is None or d.denominator != 1 or d < 1:
            raise PreconditionFailed(f"D_{i} = {d} is not a positive integer", operation="verify_lemma",
                                     coordinates=(case.lemma_id, i))
        degrees.append(int(d))

    def log_E(n: int) -> flint.arb:
        """ln of D^n (n + delta)! prod_{i<n} D_i."""
        return (n * flint.arb(D).log() + (n + 1 + to_arb(delta)).lgamma()
                + sum((flint.arb(d).log() for d in degrees[:n - 1]), flint.arb(0)))

    def root_log(n: int, bits: int) -> Ball:
        return Ball.from_arb(a.log_abs(n, bits) * (-log_E(n)).exp())

    for N in range(1, P):
        step = Fraction(N * N + 1, N * N)

        def bound_max(bits: int, N=N, step=step):
            top = ball_max([root_log(n, bits) for n in range(1, N + 1)])
            return root_log(N + 1, bits), top + Ball.from_arb(to_arb(step).log())

        def bound_prod(bits: int, N=N, step=step):
            inner = (N * flint.arb(D).log() + (N + 2 + to_arb(delta)).lgamma()
                     + sum((flint.arb(d).log() for d in degrees[:N - 1]), flint.arb(0))).exp() * to_arb(step).log()
            inner += sum(((n + to_arb(delta)) * a.log_abs(n, bits) for n in range(1, N + 1)), flint.arb(0))
            return Ball.from_arb(a.log_abs(N + 1, bits)), Ball.from_arb(D * degrees[N - 1] * inner)

        first = decide(bound_max, ">", precision)
        if first[0] is not Verdict.VERIFIED:
            continue
        second = decide(bound_prod, ">", precision)
        if second[0] is Verdict.VERIFIED:
            comparisons = [Comparison("bound_max", *first, coordinates=N),
                           Comparison("bound_prod", *second, coordinates=N)]
            return _summarize(case, comparisons, precision, f"both bounds hold at N = {N} (log domain)")
    with working_precision(precision):
        zero = Ball.exact(0)
    return LemmaReport(case.lemma_id, LemmaVerdict.INCONCLUSIVE, zero, zero,
                       f"no N < {P} satisfies both bounds; the lemma only claims infinitely many", precision,
                       case_id=case.case_id)


def _size_of_product(case: LemmaCase, precision: int) -> LemmaReport:
    a, majorant = case.params["a"], case.params["majorant"]
    P = case.prefix_N
    tail = _closing_tail(majorant, a.probe, P, precision)
    with working_precision(precision):
        partial = Ball.exact(1)
        best = Ball.exact(1)
        total = Ball.exact(0)
        for n in range(1, P + 1):
            term = a.ball(n, precision)
            factor = 1 + term
            if factor.contains_zero():
                raise PreconditionFailed(f"1 + a_{n} is not bounded away from 0", operation="verify_lemma",
                                         coordinates=(case.lemma_id, n))
            total = total + abs(term)
            partial = partial * factor
            best = ball_max([best, abs(partial)])
        # |prod_{n>P} (1 + a_n) - 1| <= e^T - 1
        drift = abs(partial) * (Ball.from_arb(tail).exp() - 1)
        upper = abs(1 - partial) + drift
        lhs = Ball.interval(abs(1 - partial).lower(), upper.upper())
        rhs = Ball.from_arb((best * total).lower())
    comparison = Comparison("|1 - prod| <= C sum", holds(lhs, rhs, "<="), lhs, rhs, P)
    return _summarize(case, [comparison], precision, f"prefix 1..{P} + {majorant.describe()}")


_CHECKS: Dict[str, Callable[[LemmaCase, int], LemmaReport]] = {
    "series_upper": _series_upper,
    "jump": _jump,
    "series_general": lambda case, bits: _series_tail(case, bits, fast=False),
    "series_fast": lambda case, bits: _series_tail(case, bits, fast=True),
    "corollary_fast": _corollary_fast,
    "prod_huge": _prod_huge,
    "size_of_product": _size_of_product,
}


def verify_lemma(case: LemmaCase, precision: Optional[int] = None) -> LemmaReport:
    precision = precision or get_config().precision.start_bits
    logger.info(f"=====Verifying lemma {case.case_id} (P={case.prefix_N})=====")
    check = _CHECKS[case.lemma_id]
    report = check(case, precision)
    if report.verdict is LemmaVerdict.CANDIDATE:
        doubled = min(2 * precision, precision_cap())
        if doubled > precision:
            logger.info(f"Counterexample candidate at {precision} bits, rechecking at {doubled}")
            report = check(case, doubled)
        if report.verdict is LemmaVerdict.CANDIDATE:
            logger.error(f"Counterexample candidate for {case.case_id} persists at {report.precision} bits: "
                         f"{report.lhs.describe(10)} vs {report.rhs.describe(10)} ({report.note})")
    logger.info(f"OUTPUT: {report.verdict.value} ({report.note})")
    return report


def verify_all(cases: List[LemmaCase], precision: Optional[int] = None) -> List[LemmaReport]:
    """Reports in case order."""
    return [verify_lemma(case, precision) for case in cases]
