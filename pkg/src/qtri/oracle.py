"""Query accounting: the only billed gateway to the hidden graph.

Algorithm code reads adjacency exclusively through `QueryOracle.query`, one
unit per probe; modeled quantum subroutines bill their iteration counts via
`charge`.  Simulator-privileged reads of the hidden graph (used to sample
subroutine outcomes) never touch the counters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .graphs import Graph


class StepTag(Enum):
    STEP1 = "Step1"
    STEP2 = "Step2"
    STEP3 = "Step3"
    STEP4 = "Step4"
    STEP5 = "Step5"
    STEP6 = "Step6"
    STEP7 = "Step7"
    STEP8 = "Step8"
    STEP9 = "Step9"
    STEP10 = "Step10"
    VERIFY = "Verify"


class BudgetExceededError(RuntimeError):
    """The run consumed more queries than its budget allows.

    This signals a malformed cost analysis, not bad luck; the run aborts.
    """


def default_budget(n: int) -> int:
    """Generous multiple of the expected total so legitimate runs never trip."""
    return math.ceil(50.0 * n ** (10.0 / 7.0) * math.log(n) ** 2)


@dataclass(frozen=True)
class LedgerReport:
    """Immutable snapshot of all counters."""

    classical: int
    charged: int
    total: int
    per_step: dict[str, int]
    budget: int | None

    def to_json(self) -> dict:
        return {
            "classical": self.classical,
            "charged": self.charged,
            "total": self.total,
            "per_step": dict(self.per_step),
            "budget": self.budget,
        }


class QueryLedger:
    """Monotone query-cost accumulator with a per-step breakdown."""

    __slots__ = ("classical", "charged", "per_step", "budget")

    def __init__(self, budget: int | None = None) -> None:
        self.classical = 0
        self.charged = 0
        self.per_step: dict[StepTag, int] = {tag: 0 for tag in StepTag}
        self.budget = budget

    @property
    def total(self) -> int:
        return self.classical + self.charged

    def _check_budget(self) -> None:
        if self.budget is not None and self.total > self.budget:
            raise BudgetExceededError(
                f"query budget exceeded: total={self.total} > budget={self.budget}"
            )

    def record_query(self, tag: StepTag) -> None:
        self.classical += 1
        self.per_step[tag] += 1
        self._check_budget()

    def record_charge(self, amount: int, tag: StepTag) -> None:
        if amount < 0:
            raise ValueError("charge amount must be >= 0")
        self.charged += amount
        self.per_step[tag] += amount
        self._check_budget()

    def snapshot(self) -> LedgerReport:
        return LedgerReport(
            classical=self.classical,
            charged=self.charged,
            total=self.total,
            per_step={tag.value: count for tag, count in self.per_step.items()},
            budget=self.budget,
        )


class QueryOracle:
    """Hidden graph plus its ledger.

    `hidden` is simulator privilege: outcome samplers and report code may
    read it, the algorithm under test must not.
    """

    __slots__ = ("hidden", "ledger")

    def __init__(self, graph: Graph, budget: int | None = None) -> None:
        self.hidden = graph
        if budget is None:
            budget = default_budget(graph.n)
        self.ledger = QueryLedger(budget)

    @property
    def n(self) -> int:
        return self.hidden.n

    def query(self, a: int, b: int, tag: StepTag) -> int:
        """Billed read of one adjacency bit."""
        bit = 1 if self.hidden.has_edge(a, b) else 0
        self.ledger.record_query(tag)
        return bit

    def charge(self, amount: int, tag: StepTag) -> None:
        """Bill a modeled quantum subroutine's oracle applications."""
        self.ledger.record_charge(amount, tag)

    def report(self) -> LedgerReport:
        return self.ledger.snapshot()
