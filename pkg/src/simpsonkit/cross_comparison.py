"""Cross-group comparison of two alternatives.

Two schemes are offered.  The switched-pair scheme crosses the alternatives
between two groups.  The permutation scheme compares the first alternative's
rate vector against every rearrangement of the second's.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .table_model import PreferenceTable, rate

# Above this many groups the explicit permutation walk is refused.
ENUMERATION_CAP = 8


@dataclass(frozen=True)
class PairSwitchResult:
    group_a: str
    group_b: str
    wins_alt1: int
    wins_alt2: int
    ties: int


@dataclass(frozen=True)
class PairwiseSummary:
    pairs: tuple
    wins_alt1: int
    wins_alt2: int
    ties: int

    @property
    def comparisons(self) -> int:
        return self.wins_alt1 + self.wins_alt2 + self.ties


@dataclass(frozen=True)
class PermutationScore:
    wins_alt2: int
    ties: int
    losses_alt2: int
    total: int

    def __add__(self, other: "PermutationScore") -> "PermutationScore":
        return PermutationScore(self.wins_alt2 + other.wins_alt2,
                                self.ties + other.ties,
                                self.losses_alt2 + other.losses_alt2,
                                self.total + other.total)


def _two_rows(table: PreferenceTable):
    if table.m != 2:
        raise ValueError(f"cross comparison needs exactly 2 alternatives, table has {table.m}")
    first, second = table.cells
    return [rate(c) for c in first], [rate(c) for c in second]


def _tally(pairs) -> tuple:
    """Count (alt2 wins, ties, alt2 losses) over ``(alt1_rate, alt2_rate)`` pairs."""
    wins = ties = losses = 0
    for r1, r2 in pairs:
        if r2 > r1:
            wins += 1
        elif r2 == r1:
            ties += 1
        else:
            losses += 1
    return wins, ties, losses


def switched_pair(table: PreferenceTable, group_a: str, group_b: str) -> PairSwitchResult:
    ones, twos = _two_rows(table)
    i, j = table.group_index(group_a), table.group_index(group_b)
    if i == j:
        raise ValueError(f"switched pair needs two distinct groups, got {group_a!r} twice")
    wins, ties, losses = _tally([(ones[i], twos[j]), (ones[j], twos[i])])
    return PairSwitchResult(group_a, group_b, wins_alt1=losses, wins_alt2=wins, ties=ties)


def all_switched_pairs(table: PreferenceTable) -> PairwiseSummary:
    if table.n < 2:
        raise ValueError("switched pairs need at least 2 groups")
    pairs = tuple(switched_pair(table, a, b)
                  for a, b in itertools.combinations(table.groups, 2))
    return PairwiseSummary(
        pairs,
        wins_alt1=sum(p.wins_alt1 for p in pairs),
        wins_alt2=sum(p.wins_alt2 for p in pairs),
        ties=sum(p.ties for p in pairs),
    )


def permutation_score(table: PreferenceTable) -> PermutationScore:
    """Walk all n! rearrangements of the second alternative's rates.

    This is the reference path; it refuses tables with more than
    ``ENUMERATION_CAP`` groups.
    """
    ones, twos = _two_rows(table)
    n = len(ones)
    if n > ENUMERATION_CAP:
        raise ValueError(
            f"{n} groups exceeds the enumeration cap of {ENUMERATION_CAP}; "
            "use permutation_score_fast")
    score = PermutationScore(0, 0, 0, 0)
    for perm in itertools.permutations(range(n)):
        wins, ties, losses = _tally((ones[i], twos[perm[i]]) for i in range(n))
        score = score + PermutationScore(wins, ties, losses, n)
    return score


def permutation_score_fast(table: PreferenceTable) -> PermutationScore:
    # Every ordered (i, j) pairing appears in exactly (n-1)! permutations.
    ones, twos = _two_rows(table)
    n = len(ones)
    wins, ties, losses = _tally((r1, r2) for r1 in ones for r2 in twos)
    f = math.factorial(n - 1)
    return PermutationScore(wins * f, ties * f, losses * f, n * math.factorial(n))


def score_permutations(table: PreferenceTable) -> PermutationScore:
    if table.n <= ENUMERATION_CAP:
        return permutation_score(table)
    return permutation_score_fast(table)
