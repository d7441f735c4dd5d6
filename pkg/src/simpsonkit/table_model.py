"""Exact-arithmetic model for grouped trial data.

A :class:`PreferenceTable` holds one row per alternative and one column per
group (agent, stratum, site...).  Each cell is a :class:`CohortCount`, the
successes out of trials observed for that alternative within that group.
Rates are :class:`fractions.Fraction` values so that every comparison made
downstream is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rate = Fraction


class TableError(ValueError):
    """Raised when a table or cell violates its invariants."""


class UnknownLabelError(KeyError):
    pass


@dataclass(frozen=True)
class CohortCount:
    successes: int
    trials: int

    def __post_init__(self):
        for name in ("successes", "trials"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TableError(f"{name} must be an integer, got {value!r}")
        if self.trials < 1:
            raise TableError(f"trials must be at least 1, got {self.trials}")
        if self.successes < 0:
            raise TableError(f"successes must be nonnegative, got {self.successes}")
        if self.successes > self.trials:
            raise TableError(
                f"successes exceed trials ({self.successes}/{self.trials})")

    def __str__(self):
        return f"{self.successes}/{self.trials}"

    def __add__(self, other: "CohortCount") -> "CohortCount":
        return CohortCount(self.successes + other.successes,
                           self.trials + other.trials)


@dataclass(frozen=True)
class SizeStats:
    """Mean and population variance of the cohort sizes in one column."""

    mean: Fraction
    variance: Fraction


def rate(cell: CohortCount) -> Rate:
    return Fraction(cell.successes, cell.trials)


def size_stats(sizes: Iterable[int]) -> SizeStats:
    """Population statistics (divide by count) of a collection of sizes."""
    sizes = [Fraction(s) for s in sizes]
    if not sizes:
        raise TableError("cannot compute statistics of an empty column")
    mean = sum(sizes) / len(sizes)
    variance = sum((s - mean) ** 2 for s in sizes) / len(sizes)
    return SizeStats(mean, variance)


def _unique(labels: Sequence[str], axis: str) -> tuple:
    labels = tuple(labels)
    seen = set()
    for label in labels:
        if not isinstance(label, str) or not label:
            raise TableError(f"{axis} labels must be non-empty strings, got {label!r}")
        if label in seen:
            raise TableError(f"duplicate {axis} label {label!r}")
        seen.add(label)
    return labels


@dataclass(frozen=True)
class PreferenceTable:
    alternatives: tuple
    groups: tuple
    cells: tuple

    def __init__(self, alternatives: Sequence[str], groups: Sequence[str],
                 cells: Sequence[Sequence[CohortCount]]):
        alternatives = _unique(alternatives, "alternative")
        groups = _unique(groups, "group")
        if len(alternatives) < 2:
            raise TableError("a table needs at least two alternatives")
        if len(groups) < 1:
            raise TableError("a table needs at least one group")
        rows = tuple(tuple(row) for row in cells)
        if len(rows) != len(alternatives):
            raise TableError(
                f"expected {len(alternatives)} rows, got {len(rows)}")
        for label, row in zip(alternatives, rows):
            if len(row) != len(groups):
                raise TableError(
                    f"row {label!r} has {len(row)} cells, expected {len(groups)}")
            for cell in row:
                if not isinstance(cell, CohortCount):
                    raise TableError(f"row {label!r} holds a non-cell value {cell!r}")
        object.__setattr__(self, "alternatives", alternatives)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "cells", rows)

    @classmethod
    def from_counts(cls, alternatives, groups, counts) -> "PreferenceTable":
        """Build from nested ``(successes, trials)`` pairs."""
        return cls(alternatives, groups,
                   [[CohortCount(s, t) for s, t in row] for row in counts])

    @property
    def m(self) -> int:
        return len(self.alternatives)

    @property
    def n(self) -> int:
        return len(self.groups)

    def alt_index(self, alternative: str) -> int:
        try:
            return self.alternatives.index(alternative)
        except ValueError:
            raise UnknownLabelError(f"unknown alternative {alternative!r}") from None

    def group_index(self, group: str) -> int:
        try:
            return self.groups.index(group)
        except ValueError:
            raise UnknownLabelError(f"unknown group {group!r}") from None

    def cell(self, alternative: str, group: str) -> CohortCount:
        return self.cells[self.alt_index(alternative)][self.group_index(group)]

    def row(self, alternative: str) -> tuple:
        return self.cells[self.alt_index(alternative)]

    def column(self, group: str) -> tuple:
        j = self.group_index(group)
        return tuple(row[j] for row in self.cells)

    def rates(self, alternative: str) -> list:
        return [rate(c) for c in self.row(alternative)]

    def swap_alternatives(self) -> "PreferenceTable":
        return PreferenceTable(self.alternatives[::-1], self.groups, self.cells[::-1])

    def map_cells(self, fn) -> "PreferenceTable":
        return PreferenceTable(self.alternatives, self.groups,
                               [[fn(c) for c in row] for row in self.cells])


def pooled_count(table: PreferenceTable, alternative: str) -> CohortCount:
    row = table.row(alternative)
    return CohortCount(sum(c.successes for c in row), sum(c.trials for c in row))


def pooled_rate(table: PreferenceTable, alternative: str) -> Rate:
    return rate(pooled_count(table, alternative))


def rate_sum(table: PreferenceTable, alternative: str) -> Fraction:
    """Unweighted sum of the per-group rates of one alternative."""
    return sum(table.rates(alternative), Fraction(0))


def column_size_stats(table: PreferenceTable, group: str) -> SizeStats:
    return size_stats(c.trials for c in table.column(group))


def round_half_up(value, places: int = 2) -> str:
    """Display string for ``value`` rounded half away from zero.

    The rounding is done on the exact rational value, so floats are rounded
    according to the binary value they actually hold.
    """
    exact = Fraction(value)
    scale = 10 ** places
    scaled = abs(exact) * scale
    whole = int(scaled + Fraction(1, 2))
    sign = "-" if exact < 0 and whole else ""
    digits = str(whole).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
