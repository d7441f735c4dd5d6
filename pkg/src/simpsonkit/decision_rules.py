"""Aggregation rules, ranking, and Simpson-reversal detection.

Every winner predicate is a strict inequality on exact rates.  A tie is
reported as ``None`` rather than broken by label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .table_model import PreferenceTable, pooled_rate, rate, rate_sum

POOLED = "pooled"
RATE_SUM = "rate_sum"
MAJORITY = "majority"


@dataclass(frozen=True)
class Decision:
    winner: Optional[str]  # None is a tie
    rule: str
    margin: object  # Fraction for raw-rate rules, float for adjusted weights

    @property
    def is_tie(self) -> bool:
        return self.winner is None


@dataclass(frozen=True)
class ReversalReport:
    per_group_winners: tuple  # ((group, winner-or-None), ...)
    pooled_winner: Optional[str]
    reversed: bool
    margins: tuple  # rate(alt2) - rate(alt1) per group


@dataclass(frozen=True)
class RankingReport:
    per_group_rankings: tuple  # one ranking per group; a ranking is a tuple of tiers
    pooled_ranking: tuple
    fully_reversed: bool


def _require_two(table: PreferenceTable, what: str):
    if table.m != 2:
        raise ValueError(f"{what} needs exactly 2 alternatives, table has {table.m}")


def best_of(scores: Sequence[tuple], greater: Callable = None) -> tuple:
    """Return ``(winner_or_None, margin)`` from ``(label, score)`` pairs.

    ``greater(a, b)`` decides strict preference; the default is ``a > b``.
    The margin is the top score minus the runner-up score, zero on a tie.
    """
    if greater is None:
        greater = lambda a, b: a > b  # noqa: E731
    ordered = sorted(scores, key=lambda item: item[1], reverse=True)
    (top_label, top), (_, second) = ordered[0], ordered[1]
    if not greater(top, second):
        return None, top - top  # zero of the score's own type
    return top_label, top - second


def group_winner(table: PreferenceTable, group: str) -> Optional[str]:
    column = table.column(group)
    winner, _ = best_of([(a, rate(c)) for a, c in zip(table.alternatives, column)])
    return winner


def margin_vector(table: PreferenceTable) -> list:
    _require_two(table, "margin_vector")
    first, second = table.cells
    return [rate(b) - rate(a) for a, b in zip(first, second)]


def pooled_decision(table: PreferenceTable) -> Decision:
    winner, margin = best_of([(a, pooled_rate(table, a)) for a in table.alternatives])
    return Decision(winner, POOLED, margin)


def rate_sum_decision(table: PreferenceTable) -> Decision:
    winner, margin = best_of([(a, rate_sum(table, a)) for a in table.alternatives])
    return Decision(winner, RATE_SUM, margin)


def majority_of(alternatives: Sequence[str], winners: Sequence[Optional[str]]) -> Decision:
    """Majority over per-group winners of a two-alternative table."""
    wins = [sum(1 for w in winners if w == a) for a in alternatives]
    winner, margin = best_of(list(zip(alternatives, wins)))
    return Decision(winner, MAJORITY, Fraction(margin))


def majority_decision(table: PreferenceTable) -> Decision:
    _require_two(table, "majority_decision")
    return majority_of(table.alternatives, [group_winner(table, g) for g in table.groups])


def decide(table: PreferenceTable, rule: str) -> Decision:
    rules = {POOLED: pooled_decision, RATE_SUM: rate_sum_decision,
             MAJORITY: majority_decision}
    try:
        return rules[rule](table)
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}") from None


def is_reversal(group_winners: Sequence[Optional[str]], pooled: Optional[str]) -> bool:
    if pooled is None or not group_winners:
        return False
    first = group_winners[0]
    return (first is not None and all(w == first for w in group_winners)
            and first != pooled)


def detect_reversal(table: PreferenceTable) -> ReversalReport:
    _require_two(table, "detect_reversal")
    winners = [group_winner(table, g) for g in table.groups]
    pooled = pooled_decision(table).winner
    return ReversalReport(
        per_group_winners=tuple(zip(table.groups, winners)),
        pooled_winner=pooled,
        reversed=is_reversal(winners, pooled),
        margins=tuple(margin_vector(table)),
    )


def ranking(scores: Sequence[tuple]) -> tuple:
    """Order ``(label, score)`` pairs best first, grouping equal scores into tiers."""
    tiers = []
    last = None
    for label, score in sorted(scores, key=lambda item: item[1], reverse=True):
        if tiers and score == last:
            tiers[-1].append(label)
        else:
            tiers.append([label])
        last = score
    return tuple(tuple(tier) for tier in tiers)


def is_strict(order: tuple) -> bool:
    return all(len(tier) == 1 for tier in order)


def rank_report(table: PreferenceTable) -> RankingReport:
    per_group = tuple(
        ranking([(a, rate(c)) for a, c in zip(table.alternatives, table.column(g))])
        for g in table.groups)
    pooled = ranking([(a, pooled_rate(table, a)) for a in table.alternatives])
    first = per_group[0]
    fully_reversed = (all(is_strict(r) and r == first for r in per_group)
                      and is_strict(pooled) and pooled == first[::-1])
    return RankingReport(per_group, pooled, fully_reversed)
