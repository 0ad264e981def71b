"""
Proof diagnostics on concrete specs, kept in the log domain.

    lower_bound_1 (sequences)
        Q_N = (2^(N^2 (log2 |alpha_N|)^a) prod_{n<=N} |alpha_n|)^(D D_N) sum_{n>N} |b_n/alpha_n|
    Z_N (arrays), a_n = |alpha_{n,1}|, w_n = (ln ln a_n)^(-3-eps)
        Z_N = (2^(N^2) prod_{n<=N} a_n^(n + (n+2) w_n))^(D D_N) sum_{n>N} a_n^(-1 + w_n)

Tail sums are enclosed by `lookahead` explicit terms followed by the
majorant bound, so each value is a two-sided Ball. The lower-bound
quantity should stay away from 0 and Z_N should fall; the running minimum
and the drop from the first value are reported against
`lemmalab.decrease_factor`.
"""

from dataclasses import dataclass
from typing import List, Optional, Union

import flint

from algebra.ball import Ball, ball_min, to_arb, working_precision
from criteria.errors import GuardFailed, MajorantUnverified
from criteria.majorant import verify_majorant
from criteria.specs import ArraySpec, SequenceSpec
from criteria.theorem2 import loglog_exponent
from criteria.tower import TowerInfo, tower_info
from evaluator.tails import explicit_sum
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

LOWER_BOUND_1 = "lower_bound_1"
Z_N = "Z_N"


@dataclass
class Diagnostic:
    kind: str
    D: int
    # ln of each value, None for an exact zero
    logs: List[Optional[Ball]]
    values: List[Ball]
    running_min: List[Ball]
    decrease: Optional[Ball]
    reached: bool
    factor: int

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "kind": self.kind,
            "D": self.D,
            "logs": [None if log is None else log.describe(digits) for log in self.logs],
            "values": [v.describe(digits) for v in self.values],
            "running_min": [v.describe(digits) for v in self.running_min],
            "decrease": None if self.decrease is None else self.decrease.describe(digits),
            "reached": self.reached,
            "factor": self.factor,
        }


def _enclose(window: Ball, tail: flint.arb) -> Ball:
    return Ball.interval(window.lower(), (window.real + tail).upper())


def _window(N: int, majorant, lookahead: int) -> range:
    """N+1 .. end, running at least up to the majorant start."""
    return range(N + 1, max(N + lookahead, majorant.start - 1) + 1)


def _tail_thm1(spec: SequenceSpec, N: int, precision: int) -> Optional[Ball]:
    """Enclosure of sum_{n>N} |b_n/alpha_n|, None when it is exactly 0."""
    if spec.length is not None:
        if N >= spec.length:
            return None
        return explicit_sum(spec, range(N + 1, spec.length + 1), precision)
    majorant = spec.tail_majorant
    if majorant is None:
        raise MajorantUnverified("no tail majorant declared for an infinite product", operation="diagnostic_series")
    window = _window(N, majorant, get_config().lemmalab.lookahead)
    if window[-1] >= majorant.start:
        verify_majorant(majorant, spec.probe, window[-1], precision)
    with working_precision(precision):
        explicit = explicit_sum(spec, window, precision)
        log_a = -spec.term_log(window[-1] + 1, precision) if majorant.kind == "power" else None
        return _enclose(explicit, majorant.tail_from(window[-1] + 1, log_a))


def prefix_log_sum(spec: Union[SequenceSpec, ArraySpec], N: int, precision: int) -> Ball:
    """sum_{n<=N} ln|alpha_n| (alpha_{n,1} for arrays)."""
    index = (lambda n: (n, 1)) if isinstance(spec, ArraySpec) else (lambda n: (n,))
    with working_precision(precision):
        total = flint.arb(0)
        for n in range(1, N + 1):
            total += spec.alpha.log_abs(index(n), precision)
        return Ball.from_arb(total)


def _lower_bound_1(spec: SequenceSpec, D: int, N: int, precision: int, tower: TowerInfo) -> Optional[Ball]:
    tail = _tail_thm1(spec, N, precision)
    if tail is None:
        return None
    with working_precision(precision):
        ln2 = flint.arb.const_log2()
        l2 = spec.alpha.log_abs((N,), precision) / ln2
        if l2.is_zero():
            power = flint.arb(0)
        elif l2 > 0:
            power = l2 ** to_arb(spec.a)
        else:
            raise GuardFailed("log2 |alpha_N| is not certainly nonnegative", operation="diagnostic_series",
                              coordinates=N)
        prefix = N * N * ln2 * power + prefix_log_sum(spec, N, precision).real
        return Ball.from_arb(D * tower.D_at(N) * prefix) + tail.log()


def _weight(spec: ArraySpec, n: int, precision: int):
    """(ln a_n, w_n)."""
    la = spec.alpha.log_abs((n, 1), precision)
    w = loglog_exponent(la, spec.epsilon)
    if w is None:
        raise GuardFailed(f"ln ln |alpha_{n},1| is undefined", operation="diagnostic_series", coordinates=(n, 1))
    return la, w


def _summand_log(spec: ArraySpec, n: int, precision: int) -> flint.arb:
    with working_precision(precision):
        la, w = _weight(spec, n, precision)
        return la * (w - 1)


def _tail_thm2(spec: ArraySpec, N: int, precision: int) -> Ball:
    majorant = spec.diagnostic_majorant
    if majorant is None:
        raise MajorantUnverified("Z_N needs a diagnostic_majorant for a_n^(-1 + w_n)", operation="diagnostic_series")

    def probe(n: int, bits: int):
        return None, _summand_log(spec, n, bits)

    window = _window(N, majorant, get_config().lemmalab.lookahead)
    if window[-1] >= majorant.start:
        verify_majorant(majorant, probe, window[-1], precision)
    with working_precision(precision):
        explicit = Ball.exact(0)
        for n in window:
            explicit = explicit + Ball.from_arb(_summand_log(spec, n, precision).exp())
        log_a = -_summand_log(spec, window[-1] + 1, precision) if majorant.kind == "power" else None
        return _enclose(explicit, majorant.tail_from(window[-1] + 1, log_a))


def _z_n(spec: ArraySpec, D: int, N: int, precision: int, tower: TowerInfo) -> Ball:
    tail = _tail_thm2(spec, N, precision)
    with working_precision(precision):
        prefix = N * N * flint.arb.const_log2()
        for n in range(1, N + 1):
            la, w = _weight(spec, n, precision)
            prefix += la * (n + (n + 2) * w)
        return Ball.from_arb(D * tower.D_at(N) * prefix) + tail.log()


def diagnostic_series(spec: Union[SequenceSpec, ArraySpec], D: Optional[int] = None, N_max: Optional[int] = None,
                      precision: Optional[int] = None) -> Diagnostic:
    config = get_config()
    precision = precision or config.precision.start_bits
    D = D or spec.D
    N_max = N_max or config.criteria.prefix
    if N_max < 1:
        raise ValueError(f"N_max must be at least 1, got: {N_max}")
    is_array = isinstance(spec, ArraySpec)
    if not is_array and spec.length is not None and N_max > spec.length:
        raise ValueError(f"N_max = {N_max} exceeds the {spec.length} explicit terms")
    kind = Z_N if is_array else LOWER_BOUND_1
    logger.info(f"=====Computing {kind} for N <= {N_max} (D={D})=====")
    logger.info(f"INPUT: {spec.name or spec.alpha}")

    tower = tower_info(spec, N_max, precision)
    compute = _z_n if is_array else _lower_bound_1
    logs: List[Optional[Ball]] = []
    values: List[Ball] = []
    running: List[Ball] = []
    with working_precision(precision):
        zero = Ball.exact(0)
    for N in range(1, N_max + 1):
        log = compute(spec, D, N, precision, tower)
        logs.append(log)
        with working_precision(precision):
            value = zero if log is None else log.exp()
            values.append(value)
            running.append(value if not running else ball_min([running[-1], value]))
        logger.debug(f"{kind} at N={N}: ln = {'-inf' if log is None else log.describe(8)}")

    decrease, reached = _drop(logs, config.lemmalab.decrease_factor, precision)
    diagnostic = Diagnostic(kind, D, logs, values, running, decrease, reached, config.lemmalab.decrease_factor)
    logger.info(f"OUTPUT: running minimum {running[-1].describe(8)}, factor {config.lemmalab.decrease_factor} "
                f"{'reached' if reached else 'not reached'}")
    return diagnostic


def _drop(logs: List[Optional[Ball]], factor: int, precision: int):
    """(first / running minimum, whether it certainly reaches `factor`); None means unbounded."""
    first = logs[0]
    if first is None:
        return None, False
    if any(log is None for log in logs):
        return None, True
    with working_precision(precision):
        drop = first - ball_min(logs)
        reached = bool(drop.real > flint.arb(factor).log())
        return drop.exp(), reached


def xn_height_bound(spec: SequenceSpec, N: int, precision: Optional[int] = None) -> Ball:
    """ln of 2^(N+1) prod_{n<=N} house(alpha_n) b_n, the factor bounding H(x - x_N) / H(x)."""
    if N < 1:
        raise ValueError(f"N must be at least 1, got: {N}")
    precision = precision or get_config().precision.start_bits
    with working_precision(precision):
        total = (N + 1) * flint.arb.const_log2()
        for n in range(1, N + 1):
            total += spec.alpha.house_log((n,), precision) + spec.b.log_abs((n,), precision)
        return Ball.from_arb(total)
