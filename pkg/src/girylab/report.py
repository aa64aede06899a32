"""Pass/fail accumulation for law checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

MAX_WITNESSES = 20


@dataclass
class CheckReport:
    """Outcome of running one law over a batch of cases.

    A failure is a result, never an exception.  Only the first
    ``MAX_WITNESSES`` witnesses are kept; ``failure_count`` counts them all.
    """

    law: str
    subject: str = ""
    cases: int = 0
    failure_count: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    @property
    def witness(self) -> dict[str, Any] | None:
        return self.failures[0] if self.failures else None

    def record(self, ok: bool, **witness: Any) -> bool:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_WITNESSES:
                self.failures.append(witness)
        return ok

    def absorb(self, other: "CheckReport") -> "CheckReport":
        self.cases += other.cases
        self.failure_count += other.failure_count
        room = MAX_WITNESSES - len(self.failures)
        if room > 0:
            self.failures.extend(
                {"law": other.law, "subject": other.subject, **w} for w in other.failures[:room]
            )
        return self
