"""Work accounting for the potentially explosive symbolic stages.

Every stage that can blow up combinatorially (Parikh image extraction,
Hilbert basis search, envelope stabilisation) charges its work against a
meter.  Exceeding the limit raises :class:`BudgetExceeded` carrying the
stage name, so callers can report *where* a run became infeasible instead
of hanging.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class BudgetExceeded(Exception):
    """A symbolic stage exhausted its work budget."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"budget exceeded in stage '{stage}': {message}")
        self.stage = stage
        self.message = message


@dataclass
class WorkMeter:
    """Mutable counter with an optional hard limit.

    ``limit=None`` means unlimited.  ``spend`` is called with the number of
    primitive objects (linear-set components, search nodes, ...) just
    constructed; the meter remembers the total so reports can include the
    actual work done even on success.
    """

    limit: int | None = None
    stage: str = "parikh"
    used: int = field(default=0)

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(
                self.stage, f"work {self.used} exceeds limit {self.limit}"
            )
