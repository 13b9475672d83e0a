"""Exception hierarchy and validation reports.

Checks that inspect user-supplied structures (crossed modules, diagrams,
labelings, Hopf data) return a :class:`Report` instead of raising, so a
caller can print every violation at once. Pipelines that need validity call
:meth:`Report.raise_for`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class CrossedKuperbergError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatch(CrossedKuperbergError):
    pass


class DivisionByZero(CrossedKuperbergError, ZeroDivisionError):
    pass


class InvalidInput(CrossedKuperbergError, ValueError):
    pass


class BadParameters(CrossedKuperbergError, ValueError):
    pass


class DimensionMismatch(CrossedKuperbergError, ValueError):
    pass


class InvalidCrossedModule(CrossedKuperbergError):
    pass


class UnknownCircle(CrossedKuperbergError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class IncompatibleMergeSites(CrossedKuperbergError):
    pass


class IllTypedWord(CrossedKuperbergError):
    pass


class InvalidDiagram(CrossedKuperbergError):
    pass


class InvalidLabeling(CrossedKuperbergError):
    pass


class BudgetExceeded(CrossedKuperbergError):
    pass


class CharacteristicDividesDimension(CrossedKuperbergError):
    pass


class NonUniqueIntegral(CrossedKuperbergError):
    pass


class NotABicharacter(CrossedKuperbergError):
    pass


class BadCharacteristic(CrossedKuperbergError):
    pass


class GradingMismatch(CrossedKuperbergError):
    pass


class MissingIntegrals(CrossedKuperbergError):
    pass


class InconsistentSlotSets(CrossedKuperbergError):
    pass


class InvalidHopfData(CrossedKuperbergError):
    pass


class PreconditionViolated(CrossedKuperbergError):
    def __init__(self, move: str, reason: str):
        super().__init__(f"{move}: {reason}")
        self.move = move
        self.reason = reason


class PostconditionViolated(CrossedKuperbergError):
    def __init__(self, property: str, detail: str = ""):
        super().__init__(f"{property} violated" + (f": {detail}" if detail else ""))
        self.property = property
        self.detail = detail


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


class Report:
    """Ordered list of violations. Empty means valid."""

    def __init__(self, violations: list[Violation] | None = None):
        self.violations: list[Violation] = list(violations or [])

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    @property
    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def grouped(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for v in self.violations:
            out.setdefault(v.code, []).append(v.message)
        return out

    def as_list(self) -> list[dict]:
        return [v.as_dict() for v in self.violations]

    def raise_for(self, exc_type: type[CrossedKuperbergError], what: str) -> None:
        if self.violations:
            first = self.violations[0]
            more = f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
            raise exc_type(f"{what}: [{first.code}] {first.message}{more}")

    def __repr__(self) -> str:
        return f"Report({self.violations!r})"
