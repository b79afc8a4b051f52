"""Speaker oracle and the penalty bookkeeping for a run.

The oracle answers one elicitation query per cell: it always reveals
the gold form, and when the linguist volunteered a suggested form it
also judges it. A query without a suggestion costs one p1 point, a
wrong suggestion one p2 point, and a correct suggestion is free. After
the final cycle every remaining error on the untouched pool costs one
p3 point. The ledger accumulates these counts per cycle.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum

from fieldsim.corpus import CellId, Lexicon


class ProtocolError(RuntimeError):
    """The elicitation protocol was violated (e.g. a cell asked twice)."""


class Outcome(str, Enum):
    NO_SUGGESTION = "no_suggestion"
    CORRECT_SUGGESTION = "correct_suggestion"
    INCORRECT_SUGGESTION = "incorrect_suggestion"


@dataclass(frozen=True)
class OracleQuery:
    cell: CellId
    suggestion: str | None = None


@dataclass(frozen=True)
class OracleResponse:
    gold: str
    outcome: Outcome


class Oracle:
    """Simulated speaker backed by the gold lexicon.

    Each cell may be asked exactly once per run; asking again raises
    ProtocolError, as does asking for a cell the lexicon does not hold.
    Suggestions are NFC-normalized before comparison so the judgement
    matches the parser's notion of equality.
    """

    def __init__(self, lexicon: Lexicon):
        self._lexicon = lexicon
        self._answered: set[CellId] = set()

    @property
    def answered_count(self) -> int:
        return len(self._answered)

    def answer(self, query: OracleQuery) -> OracleResponse:
        if query.cell in self._answered:
            raise ProtocolError(f"cell already elicited: {query.cell}")
        try:
            gold = self._lexicon.gold(query.cell)
        except LookupError as exc:
            raise ProtocolError(str(exc)) from None
        self._answered.add(query.cell)
        if query.suggestion is None:
            outcome = Outcome.NO_SUGGESTION
        elif unicodedata.normalize("NFC", query.suggestion) == gold:
            outcome = Outcome.CORRECT_SUGGESTION
        else:
            outcome = Outcome.INCORRECT_SUGGESTION
        return OracleResponse(gold=gold, outcome=outcome)


@dataclass
class PenaltyLedger:
    """Per-cycle penalty counts plus the final-test error count.

    p1 counts queries made without a suggestion, p2 wrong suggestions,
    and correct_suggestions the free ones; their sum equals the number
    of oracle queries. p3 is set once, after the final evaluation.
    """

    p1: int = 0
    p2: int = 0
    correct_suggestions: int = 0
    p3: int | None = None
    per_cycle: dict[int, list[int]] = field(default_factory=dict)

    def record(self, cycle: int, outcome: Outcome) -> None:
        if cycle < 1:
            raise ValueError(f"cycle must be >= 1, got {cycle}")
        row = self.per_cycle.setdefault(cycle, [0, 0, 0])
        if outcome is Outcome.NO_SUGGESTION:
            self.p1 += 1
            row[0] += 1
        elif outcome is Outcome.INCORRECT_SUGGESTION:
            self.p2 += 1
            row[1] += 1
        else:
            self.correct_suggestions += 1
            row[2] += 1

    def set_final_errors(self, p3: int) -> None:
        if self.p3 is not None:
            raise ProtocolError("final error count already set")
        if p3 < 0:
            raise ValueError(f"p3 must be >= 0, got {p3}")
        self.p3 = p3

    @property
    def total_queries(self) -> int:
        return self.p1 + self.p2 + self.correct_suggestions

    def cycle_rows(self) -> list[tuple[int, int, int, int]]:
        """(cycle, p1, p2, correct_suggestions) rows in cycle order."""
        return [
            (cycle, row[0], row[1], row[2])
            for cycle, row in sorted(self.per_cycle.items())
        ]
