"""Run scoring: accuracy, the normalised efficiency score, and
suggestion breakdowns.

The efficiency score charges one point per unassisted query (p1), per
wrong suggestion (p2), and per error left on the final test pool (p3),
then normalises by the dataset size: nes = 1 - (p1 + p2 + p3) / n.
A run that labels nothing scores 1 - p3/n; a perfect oracle-free guess
of the whole dataset scores 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from fieldsim.oracle import PenaltyLedger


def nes(p1: int, p2: int, p3: int, n: int) -> float:
    """Normalised efficiency score, exact up to one float rounding."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    for name, value in (("p1", p1), ("p2", p2), ("p3", p3)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")
    return float(1 - Fraction(p1 + p2 + p3, n))


def accuracy(correct: int, total: int) -> float:
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    if not 0 <= correct <= total:
        raise ValueError(f"correct must be in [0, {total}], got {correct}")
    return float(Fraction(correct, total))


def percent(value: float, decimals: int = 1) -> str:
    """Display rounding, half away from zero: 0.9575 -> '95.8'.

    Works from the float's shortest decimal repr, so values that print
    as an exact half round the way a reader expects.
    """
    quantum = Decimal(1).scaleb(-decimals)
    return str((Decimal(repr(value)) * 100).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class BreakdownRow:
    cycle: int
    no_suggestion: int
    incorrect_suggestion: int
    correct_suggestion: int

    @property
    def queries(self) -> int:
        return self.no_suggestion + self.incorrect_suggestion + self.correct_suggestion


@dataclass
class SuggestionBreakdown:
    rows: list[BreakdownRow]
    total: BreakdownRow


def suggestion_breakdown(ledger: PenaltyLedger) -> SuggestionBreakdown:
    """Per-cycle outcome counts plus a totals row (cycle 0)."""
    rows = [
        BreakdownRow(cycle, p1, p2, correct)
        for cycle, p1, p2, correct in ledger.cycle_rows()
    ]
    total = BreakdownRow(0, ledger.p1, ledger.p2, ledger.correct_suggestions)
    return SuggestionBreakdown(rows, total)
