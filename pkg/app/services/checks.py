"""
Named pass/fail checks shared by the verification services.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional


class CheckStatus(Enum):
    """Check status enumeration."""
    PASS = "pass"
    FAIL = "fail"
    UNSUPPORTED = "unsupported"
    UNDECIDED = "undecided"


@dataclass
class Check:
    """Outcome of one named check."""
    name: str
    status: CheckStatus
    detail: str = ""
    residual: Optional[float] = None
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS


class CheckList:
    """Ordered collection of checks with unique names."""

    def __init__(self, checks: Optional[List[Check]] = None):
        self._checks: List[Check] = []
        for check in checks or []:
            self.append(check)

    def append(self, check: Check) -> None:
        if any(c.name == check.name for c in self._checks):
            raise ValueError(f"Duplicate check name: {check.name}")
        self._checks.append(check)

    def record(self, name: str, ok: bool, detail: str = "", **data: Any) -> Check:
        """Append a pass/fail check built from a boolean."""
        check = Check(name, CheckStatus.PASS if ok else CheckStatus.FAIL, detail, data=data)
        self.append(check)
        return check

    def mark(
        self,
        name: str,
        status: CheckStatus,
        detail: str = "",
        residual: Optional[float] = None,
        **data: Any,
    ) -> Check:
        """Append a check with an explicit status, e.g. unsupported or undecided."""
        check = Check(name, status, detail, residual, data)
        self.append(check)
        return check

    def extend(self, other: "CheckList", prefix: str = "") -> None:
        for check in other:
            self.append(
                Check(prefix + check.name, check.status, check.detail, check.residual, dict(check.data))
            )

    def __iter__(self) -> Iterator[Check]:
        return iter(self._checks)

    def __len__(self) -> int:
        return len(self._checks)

    def __getitem__(self, name: str) -> Check:
        for check in self._checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(c.name == name for c in self._checks)

    @property
    def passed(self) -> bool:
        """True when no check failed."""
        return not any(c.status == CheckStatus.FAIL for c in self._checks)

    def failed(self) -> List[Check]:
        return [c for c in self._checks if c.status == CheckStatus.FAIL]

    def names(self) -> List[str]:
        return [c.name for c in self._checks]
