"""Per-hypothesis verdicts and the certificate assembled from them."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from algebra.ball import Ball, Verdict
from criteria.tower import TowerInfo

Index = Tuple[int, ...]


class CheckVerdict(str, Enum):
    VERIFIED = "verified"
    ASSERTED = "asserted"
    FAILED = "failed"
    INCONCLUSIVE = "inconclusive"


class Conclusion(str, Enum):
    CERTIFIED = "certified-conditional"
    NOT_CERTIFIED = "not-certified"


@dataclass
class Check:
    check_id: str
    verdict: CheckVerdict
    lhs: Optional[Ball] = None
    rhs: Optional[Ball] = None
    # index that decided the verdict (first failure, first undecided, or last checked)
    coordinates: Optional[Index] = None
    note: str = ""
    checked: int = 0
    skipped: int = 0
    strict_count: Optional[int] = None

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "id": self.check_id,
            "verdict": self.verdict.value,
            "lhs": self.lhs.describe(digits) if self.lhs is not None else None,
            "rhs": self.rhs.describe(digits) if self.rhs is not None else None,
            "coordinates": list(self.coordinates) if self.coordinates is not None else None,
            "note": self.note,
            "checked": self.checked,
            "skipped": self.skipped,
            "strict_count": self.strict_count,
        }


def downgrade(check_id: str, asserted: FrozenSet[str]) -> CheckVerdict:
    """Verdict of a check the prefix cannot settle."""
    return CheckVerdict.ASSERTED if check_id in asserted else CheckVerdict.INCONCLUSIVE


@dataclass
class IndexTally:
    """Collects per-index Ball verdicts of one hypothesis."""
    check_id: str
    outcomes: List[Tuple[Index, Verdict, Optional[Ball], Optional[Ball], str]] = field(default_factory=list)
    skipped: int = 0

    def add(self, index: Index, verdict: Verdict, lhs: Optional[Ball] = None, rhs: Optional[Ball] = None,
            note: str = "") -> None:
        self.outcomes.append((index, verdict, lhs, rhs, note))

    def skip(self) -> None:
        self.skipped += 1

    def _pick(self, verdict: Verdict):
        return next((o for o in self.outcomes if o[1] is verdict), None)

    def finish(self, asserted: FrozenSet[str], note: str = "") -> Check:
        failed = self._pick(Verdict.VIOLATED)
        undecided = self._pick(Verdict.INCONCLUSIVE)
        if failed is not None:
            verdict, witness = CheckVerdict.FAILED, failed
        elif undecided is not None:
            verdict, witness = downgrade(self.check_id, asserted), undecided
        elif not self.outcomes:
            return Check(self.check_id, downgrade(self.check_id, asserted),
                         note=note or "no index in the checked range", skipped=self.skipped)
        else:
            verdict, witness = CheckVerdict.VERIFIED, self.outcomes[-1]
        index, _, lhs, rhs, index_note = witness
        return Check(self.check_id, verdict, lhs, rhs, index, "; ".join(s for s in (note, index_note) if s),
                     checked=len(self.outcomes), skipped=self.skipped)


@dataclass
class Certificate:
    theorem: int
    D: int
    prefix_N: int
    checks: List[Check]
    asserted: FrozenSet[str]
    tower: Optional[TowerInfo] = None
    name: str = ""
    extras: Dict[str, str] = field(default_factory=dict)

    @property
    def conclusion(self) -> Conclusion:
        for check in self.checks:
            if check.verdict is CheckVerdict.FAILED:
                return Conclusion.NOT_CERTIFIED
            if check.verdict is not CheckVerdict.VERIFIED and check.check_id not in self.asserted:
                return Conclusion.NOT_CERTIFIED
        return Conclusion.CERTIFIED

    @property
    def certified(self) -> bool:
        return self.conclusion is Conclusion.CERTIFIED

    def check(self, check_id: str) -> Check:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def failed(self) -> List[str]:
        return [c.check_id for c in self.checks if c.verdict is CheckVerdict.FAILED]

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "theorem": self.theorem,
            "D": self.D,
            "prefix_N": self.prefix_N,
            "name": self.name,
            "conclusion": self.conclusion.value,
            "asserted": sorted(self.asserted),
            "checks": [c.to_dict(digits) for c in self.checks],
            "tower": self.tower.to_dict() if self.tower is not None else None,
            "extras": dict(self.extras),
        }
