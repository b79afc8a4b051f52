"""Corpus handling: TSV triplets, paradigm tables, and the query pool.

Data files are UTF-8 TSV with three tab-separated columns per line:
lemma, inflected form, and a semicolon-joined tag string such as
``V;PST``. Blank lines are skipped and both LF and CRLF endings are
accepted. Every string is NFC-normalized and trimmed at parse time so
that equality is well defined across sources.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """Malformed TSV input; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DataConflictError(ValueError):
    """The same (lemma, tag set) was seen with two different forms."""

    def __init__(self, lemma: str, tags: "TagSet", existing: str, conflicting: str):
        super().__init__(
            f"conflicting forms for ({lemma!r}, {tags.canonical}): "
            f"{existing!r} vs {conflicting!r}"
        )
        self.lemma = lemma
        self.tags = tags
        self.rows = (
            (lemma, existing, tags.canonical),
            (lemma, conflicting, tags.canonical),
        )


def nfc(text: str) -> str:
    """NFC-normalize and trim surrounding whitespace."""
    return unicodedata.normalize("NFC", text).strip()


@dataclass(frozen=True, eq=False)
class TagSet:
    """An ordered feature combination identifying one paradigm cell.

    The canonical form is the semicolon-joined feature string, e.g.
    ``V;PST``. Equality and hashing use the canonical string only, so
    tag sets behave as values regardless of how they were built.
    """

    features: tuple[str, ...]
    canonical: str = field(init=False)

    def __post_init__(self):
        feats = tuple(self.features)
        if not feats:
            raise ValueError("tag set must contain at least one feature")
        for feat in feats:
            if not feat or feat != feat.strip() or ";" in feat:
                raise ValueError(f"bad feature {feat!r}")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "canonical", ";".join(feats))

    @classmethod
    def parse(cls, text: str) -> "TagSet":
        return cls(tuple(part.strip() for part in text.split(";")))

    def __eq__(self, other):
        return isinstance(other, TagSet) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"TagSet({self.canonical!r})"

    def __str__(self):
        return self.canonical


@dataclass(frozen=True)
class Triplet:
    """One data row: lemma, tag set, and the attested inflected form."""

    lemma: str
    tags: TagSet
    form: str

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("lemma must be nonempty")
        if not self.form:
            raise ValueError("form must be nonempty")


@dataclass(frozen=True)
class CellId:
    """Identifies one cell: lemma position in the lexicon plus tag set."""

    lemma_index: int
    tags: TagSet

    def sort_key(self) -> tuple[int, str]:
        return (self.lemma_index, self.tags.canonical)


@dataclass
class ParadigmTable:
    """All attested cells of one lemma, keyed by tag set.

    Cell order is the first-occurrence order of the source rows, which
    keeps downstream iteration independent of hash seeding.
    """

    lemma: str
    cells: dict[TagSet, str]

    @property
    def size(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class LanguageStats:
    """Dataset-level counts. ``aps`` is exact: forms per lemma."""

    num_forms: int
    num_lemmas: int
    aps: Fraction

    def to_json_dict(self, language: str) -> dict:
        return {
            "language": language,
            "forms": self.num_forms,
            "lemmas": self.num_lemmas,
            "aps": float(self.aps),
        }


@dataclass
class Lexicon:
    """The gold standard: every paradigm table plus dataset stats.

    Only the oracle and final evaluation may read forms out of it; the
    selection strategies see lemmas and cell identities through the
    pool instead.
    """

    tables: list[ParadigmTable]
    stats: LanguageStats

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tables]

    def gold(self, cell: CellId) -> str:
        if not 0 <= cell.lemma_index < len(self.tables):
            raise LookupError(f"no lemma at index {cell.lemma_index}")
        table = self.tables[cell.lemma_index]
        try:
            return table.cells[cell.tags]
        except KeyError:
            raise LookupError(
                f"no cell {cell.tags.canonical!r} for lemma {table.lemma!r}"
            ) from None

    def iter_cells(self) -> Iterator[CellId]:
        for i, table in enumerate(self.tables):
            for tags in table.cells:
                yield CellId(i, tags)


class Pool:
    """The unlabelled cell inventory plus the public word list.

    Cells keep their insertion order (backed by a dict), so iteration
    never depends on hash randomization. ``lemmas`` maps a cell's
    ``lemma_index`` to the citation form a strategy may show the model.
    """

    def __init__(self, cells: Iterable[CellId], lemmas: Sequence[str]):
        self._cells: dict[CellId, None] = dict.fromkeys(cells)
        self.lemmas: tuple[str, ...] = tuple(lemmas)
        for cell in self._cells:
            if not 0 <= cell.lemma_index < len(self.lemmas):
                raise ValueError(f"cell {cell} has no matching lemma")

    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, cell: CellId) -> bool:
        return cell in self._cells

    def __iter__(self) -> Iterator[CellId]:
        return iter(self._cells)

    def ordered(self) -> list[CellId]:
        """Cells in insertion order, as a copy safe to mutate against."""
        return list(self._cells)

    def lemma_of(self, cell: CellId) -> str:
        return self.lemmas[cell.lemma_index]

    def remove(self, cell: CellId) -> None:
        if cell not in self._cells:
            raise KeyError(f"cell not in pool: {cell}")
        del self._cells[cell]


def parse_unimorph(lines: Iterable[str]) -> list[Triplet]:
    """Parse TSV lines into triplets.

    Raises ParseError (with the offending line number) on anything
    other than exactly three tab-separated nonempty columns.
    """
    triplets = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise ParseError(
                lineno, f"expected 3 tab-separated columns, got {len(columns)}"
            )
        lemma, form, tag_text = (nfc(col) for col in columns)
        if not lemma:
            raise ParseError(lineno, "empty lemma")
        if not form:
            raise ParseError(lineno, "empty form")
        if not tag_text:
            raise ParseError(lineno, "empty tag column")
        try:
            tags = TagSet.parse(tag_text)
        except ValueError as exc:
            raise ParseError(lineno, f"bad tag string {tag_text!r}: {exc}") from None
        triplets.append(Triplet(lemma, tags, form))
    return triplets


def triplets_to_tsv(triplets: Iterable[Triplet]) -> str:
    """Serialize triplets back to the three-column TSV format."""
    lines = [f"{t.lemma}\t{t.form}\t{t.tags.canonical}" for t in triplets]
    return "\n".join(lines) + ("\n" if lines else "")


def load_unimorph(path: str | Path) -> list[Triplet]:
    with open(path, encoding="utf-8") as handle:
        return parse_unimorph(handle)


def build_lexicon(triplets: Sequence[Triplet]) -> Lexicon:
    """Group triplets into paradigm tables and compute dataset stats.

    Exact duplicate rows collapse silently; the same cell with two
    different forms raises DataConflictError. Lemmas keep their first
    occurrence order.
    """
    if not triplets:
        raise ValueError("no triplets to build a lexicon from")
    tables: dict[str, dict[TagSet, str]] = {}
    for t in triplets:
        cells = tables.setdefault(t.lemma, {})
        existing = cells.get(t.tags)
        if existing is None:
            cells[t.tags] = t.form
        elif existing != t.form:
            raise DataConflictError(t.lemma, t.tags, existing, t.form)
    table_list = [ParadigmTable(lemma, cells) for lemma, cells in tables.items()]
    num_forms = sum(table.size for table in table_list)
    stats = LanguageStats(
        num_forms=num_forms,
        num_lemmas=len(table_list),
        aps=Fraction(num_forms, len(table_list)),
    )
    return Lexicon(tables=table_list, stats=stats)


def init_pool(lexicon: Lexicon) -> Pool:
    """Every attested cell, unlabelled, in lexicon iteration order."""
    return Pool(lexicon.iter_cells(), lexicon.lemmas())
