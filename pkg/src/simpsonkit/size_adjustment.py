"""Down-weighting of preferences that come from undersized cohorts.

Within one column (one group), a cell whose cohort is at least as large as
the column's mean cohort size keeps its rate.  A smaller cohort has its rate
multiplied by ``k * exp(-delta * (size - mean)**2 / variance)``, so the
penalty grows with the squared distance below the mean measured in units of
the column variance.  With ``delta = 1/2`` a cohort ``v`` standard deviations
below the mean keeps ``exp(-v**2 / 2)`` of its weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .decision_rules import MAJORITY, Decision, best_of, majority_of
from .table_model import PreferenceTable, SizeStats, column_size_stats, rate

REL_TOL = 1e-12

SUM = "sum"


@dataclass(frozen=True)
class AdjustmentPolicy:
    delta: Fraction = Fraction(1, 2)
    k: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "k", Fraction(self.k))
        if self.delta <= 0 or self.k <= 0:
            raise ValueError(f"delta and k must be positive, got {self.delta}, {self.k}")


@dataclass(frozen=True)
class AdjustedCell:
    original_rate: Fraction
    multiplier: float
    adjusted_weight: object  # the exact rate when unpenalized, else a float
    penalized: bool


def deviation_multiplier(v: float) -> float:
    """Weight kept by a cohort ``v`` standard deviations below the mean."""
    if v < 0:
        raise ValueError("v must be nonnegative")
    return math.exp(-0.5 * v * v)


def adjust_value(value: Fraction, size: int, stats: SizeStats,
                 policy: AdjustmentPolicy = AdjustmentPolicy()) -> AdjustedCell:
    value = Fraction(value)
    # Zero variance means every size equals the mean, so no cell is penalized.
    if stats.variance == 0 or size >= stats.mean:
        return AdjustedCell(value, 1.0, value, False)
    exponent = policy.delta * (size - stats.mean) ** 2 / stats.variance
    multiplier = math.exp(-float(exponent))
    return AdjustedCell(value, multiplier, float(policy.k * value) * multiplier, True)


def adjust_table(table: PreferenceTable,
                 policy: AdjustmentPolicy = AdjustmentPolicy()) -> list:
    """Adjusted cells as a list of rows aligned with ``table.cells``."""
    columns = []
    for j, group in enumerate(table.groups):
        stats = column_size_stats(table, group)
        columns.append([adjust_value(rate(row[j]), row[j].trials, stats, policy)
                        for row in table.cells])
    return [list(row) for row in zip(*columns)]


def weight_greater(a, b) -> bool:
    """Strict preference between adjusted weights.

    Exact when both weights are rationals; otherwise a relative tolerance
    of ``REL_TOL`` separates a genuine win from floating-point noise.
    """
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a > b
    a, b = float(a), float(b)
    return a - b > REL_TOL * max(abs(a), abs(b))


def adjusted_group_winners(table: PreferenceTable,
                           policy: AdjustmentPolicy = AdjustmentPolicy()) -> list:
    adjusted = adjust_table(table, policy)
    winners = []
    for j in range(table.n):
        scores = [(a, adjusted[i][j].adjusted_weight)
                  for i, a in enumerate(table.alternatives)]
        winners.append(best_of(scores, weight_greater)[0])
    return winners


def adjusted_decision(table: PreferenceTable,
                      policy: AdjustmentPolicy = AdjustmentPolicy(),
                      rule: str = MAJORITY) -> Decision:
    if rule == MAJORITY:
        if table.m != 2:
            raise ValueError(f"majority needs exactly 2 alternatives, table has {table.m}")
        return majority_of(table.alternatives, adjusted_group_winners(table, policy))
    if rule != SUM:
        raise ValueError(f"unknown adjusted rule {rule!r}")
    adjusted = adjust_table(table, policy)
    totals = []
    for label, row in zip(table.alternatives, adjusted):
        weights = [c.adjusted_weight for c in row]
        exact = all(isinstance(w, Fraction) for w in weights)
        totals.append((label, sum(weights, Fraction(0)) if exact else math.fsum(weights)))
    winner, margin = best_of(totals, weight_greater)
    return Decision(winner, SUM, margin)

