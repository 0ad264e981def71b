"""Command dispatch: check, eval, lemmas, heights and the combined report."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from algebra.ball import Verdict
from cli.report import Report
from cli.spec_loader import SpecDocument
from criteria.certificate import Certificate
from criteria.specs import ArraySpec, SequenceSpec
from criteria.theorem1 import check_theorem1
from criteria.theorem2 import check_range, check_theorem2
from evaluator.evaluate import evaluate
from heights.measures import height_report
from heights.suite import inequality_suite
from lemmalab.diagnostics import diagnostic_series, xn_height_bound
from lemmalab.lemmas import verify_all
from utils.config import get_config
from utils.logging_utils import get_logger

logger = get_logger(__name__)

COMMANDS = ("check", "eval", "lemmas", "heights", "report")

OK = 0
FAILED = 1
ERROR = 2


@dataclass
class RunOptions:
    prefix: Optional[int] = None
    precision: Optional[int] = None
    target_radius: Optional[str] = None
    d_max: Optional[int] = None


def _require_product(document: SpecDocument, command: str) -> None:
    if document.kind not in ("product", "product_of_series"):
        raise ValueError(f"'{command}' needs a product or product_of_series document, got {document.kind}")


def _prefix(document: SpecDocument, options: RunOptions) -> int:
    if options.prefix is not None:
        return options.prefix
    N = document.prefix or get_config().criteria.prefix
    length = getattr(document.spec, "length", None)
    return N if length is None else min(N, length)


def _add_certificate(report: Report, certificate: Certificate, prefix: str = "") -> None:
    digits = get_config().report.digits
    for check in certificate.checks:
        report.add(f"{prefix}{check.check_id}", check.verdict.value, check.lhs, check.rhs)
    report.add(f"{prefix}conclusion", certificate.conclusion.value)
    report.details.append({"certificate": certificate.to_dict(digits)})


def run_check(document: SpecDocument, options: RunOptions, report: Report) -> int:
    _require_product(document, "check")
    spec = document.spec
    N = _prefix(document, options)
    if options.d_max:
        certificates = check_range(spec, N, options.d_max, options.precision)
        for certificate in certificates:
            _add_certificate(report, certificate, f"D{certificate.D}.")
        # the criteria bound the degree from below; one certified D is enough
        return OK if any(c.certified for c in certificates) else FAILED
    check = check_theorem2 if isinstance(spec, ArraySpec) else check_theorem1
    certificate = check(spec, N, options.precision)
    _add_certificate(report, certificate)
    return OK if certificate.certified else FAILED


def run_eval(document: SpecDocument, options: RunOptions, report: Report) -> int:
    _require_product(document, "eval")
    enclosure = evaluate(document.spec, options.target_radius, options.precision)
    verdict = "exhausted" if enclosure.exhausted else "verified"
    report.add("enclosure", verdict, enclosure.value)
    report.details.append({"enclosure": enclosure.to_dict(get_config().report.digits)})
    return FAILED if enclosure.exhausted else OK


def run_lemmas(document: SpecDocument, options: RunOptions, report: Report) -> int:
    digits = get_config().report.digits
    if document.kind == "lemma":
        reports = verify_all(document.cases, options.precision)
        seen = {}
        for lemma in reports:
            # record ids are single tokens in text reports
            case_id = "_".join((lemma.case_id or lemma.lemma_id).split())
            seen[case_id] = seen.get(case_id, 0) + 1
            if seen[case_id] > 1:
                case_id = f"{case_id}#{seen[case_id]}"
            report.add(case_id, lemma.verdict.value, lemma.lhs, lemma.rhs)
            report.details.append({"lemma": lemma.to_dict(digits)})
        return OK if all(lemma.passed for lemma in reports) else FAILED
    _require_product(document, "lemmas")
    spec = document.spec
    N = _prefix(document, options)
    diagnostic = diagnostic_series(spec, spec.D, N, options.precision)
    report.add("diagnostic", "reached" if diagnostic.reached else "not-reached", diagnostic.running_min[-1])
    detail = {"diagnostic": diagnostic.to_dict(digits)}
    if isinstance(spec, SequenceSpec):
        bound = xn_height_bound(spec, N, options.precision)
        report.add("xn_height_log", "computed", bound)
        detail["xn_height_log"] = bound.describe(digits)
    report.details.append(detail)
    return OK


def run_heights(document: SpecDocument, options: RunOptions, report: Report) -> int:
    if document.kind != "heights":
        raise ValueError(f"'heights' needs a heights document, got {document.kind}")
    digits = get_config().report.digits
    suite = inequality_suite(document.numbers, options.precision, document.triples)
    for i, check in enumerate(suite.checks, 1):
        report.add(f"{check.check_id}#{i}", check.verdict.value, check.lhs, check.rhs)
    report.details.append({
        "numbers": [dict(height_report(alpha, options.precision).to_dict(digits), number=str(alpha))
                    for alpha in document.numbers],
        "counts": suite.counts(),
        "tight": [f"{check.check_id}#{i}" for i, check in enumerate(suite.checks, 1) if check.tight],
    })
    return FAILED if any(c.verdict is Verdict.VIOLATED for c in suite.checks) else OK


def _has_tail(spec) -> bool:
    return spec.tail_majorant is not None or getattr(spec, "length", None) is not None


def _sections(document: SpecDocument) -> List[str]:
    if document.kind == "lemma":
        return ["lemmas"]
    if document.kind == "heights":
        return ["heights"]
    sections = ["check"]
    spec = document.spec
    if _has_tail(spec):
        sections.append("eval")
    if isinstance(spec, ArraySpec) and spec.diagnostic_majorant is not None or \
            isinstance(spec, SequenceSpec) and _has_tail(spec):
        sections.append("lemmas")
    return sections


_RUNNERS = {
    "check": run_check,
    "eval": run_eval,
    "lemmas": run_lemmas,
    "heights": run_heights,
}


def run(command: str, document: SpecDocument, options: Optional[RunOptions] = None) -> Tuple[int, Report]:
    """Exit status (0 certified or verified, 1 failed) and the report; errors propagate."""
    if command not in COMMANDS:
        raise ValueError(f"Unknown command: {command}. Must be one of {', '.join(COMMANDS)}")
    options = options or RunOptions()
    logger.info(f"=====Running {command} on {document.kind} '{document.name or document.source}'=====")
    report = Report(command, document.kind, document.name)
    if command != "report":
        status = _RUNNERS[command](document, options, report)
    else:
        status = OK
        for section in _sections(document):
            part = Report(section, document.kind, document.name)
            status = max(status, _RUNNERS[section](document, options, part))
            for record in part.records:
                report.add(f"{section}.{record.check_id}", record.verdict, record.lhs, record.rhs)
            report.details.append({"section": section, "details": part.details})
    logger.info(f"OUTPUT: exit status {status} with {len(report.records)} records")
    return status, report
