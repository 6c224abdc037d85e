from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Clause:
    tag: str
    passed: bool
    detail: str = ""


@dataclass
class Verdict:
    """Outcome of a decision procedure together with its certificate.

    ``witnesses`` hold dicts with at least a ``"clause"`` key; every FAIL
    carries at least one, and ``verifiers.replay_witness`` re-checks them.
    ``quantities`` hold the exact values computed on the way (Fractions,
    ExtendedRationals, StepFunctions, ints).
    """

    name: str
    clauses: list[Clause] = field(default_factory=list)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    quantities: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return PASS if all(c.passed for c in self.clauses) else FAIL

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def add(self, tag: str, passed: bool, detail: str = "") -> bool:
        self.clauses.append(Clause(tag, passed, detail))
        return passed

    def clause(self, tag: str) -> Clause:
        for c in self.clauses:
            if c.tag == tag:
                return c
        raise KeyError(tag)

    def failed_tags(self) -> list[str]:
        return [c.tag for c in self.clauses if not c.passed]

    def __bool__(self) -> bool:
        return self.passed
