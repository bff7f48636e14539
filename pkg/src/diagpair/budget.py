"""Shared work-budget guard for the exact-counting engines.

Counting routines refuse up front when the estimated ledger support (or
enumeration volume) exceeds a cap, instead of thrashing memory mid-run.
"""

DEFAULT_LEDGER_BUDGET = 50_000_000


class BudgetError(RuntimeError):
    """Raised when an estimated workload exceeds the configured cap."""

    def __init__(self, estimate, cap, what="ledger support"):
        self.estimate = int(estimate)
        self.cap = int(cap)
        self.what = what
        super().__init__(
            f"refusing: estimated {what} {self.estimate} exceeds budget {self.cap}"
        )


def check_budget(estimate, cap=DEFAULT_LEDGER_BUDGET, what="ledger support"):
    """Raise BudgetError if `estimate` exceeds `cap`; otherwise return estimate."""
    if estimate > cap:
        raise BudgetError(estimate, cap, what)
    return estimate
