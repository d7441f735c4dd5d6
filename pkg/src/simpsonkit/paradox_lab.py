"""Paradox frequency estimation and adversarial regrouping search.

The Monte Carlo estimator samples 2x2x2 tables (treatment x outcome x group)
uniformly from the probability simplex and counts how often both groups
strictly favour one treatment while the pooled table strictly favours the
other.

Sampling is split into fixed-size blocks.  Block ``b`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``, so the hit count
depends only on ``(seed, samples)`` and never on how many workers run the
blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .decision_rules import detect_reversal
from .table_model import CohortCount, PreferenceTable

BLOCK_SIZE = 1 << 16
SEARCH_CAP = 10 ** 8

# Flat layout of the 8 cell probabilities: index = 4*treatment + 2*outcome + group,
# where outcome 1 is a success.
CELL_SHAPE = (2, 2, 2)


class SearchCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ParadoxEstimate:
    samples: int
    hits: int
    estimate: float
    std_error: float
    seed: int


@dataclass(frozen=True)
class SplitWitness:
    alternatives: tuple
    groups: tuple  # ((alt1 CohortCount, alt2 CohortCount), ...)

    def to_table(self) -> PreferenceTable:
        labels = [f"G{i + 1}" for i in range(len(self.groups))]
        return PreferenceTable(self.alternatives, labels,
                               [[g[0] for g in self.groups], [g[1] for g in self.groups]])


def _beats(s1, n1, s2, n2):
    # s1/n1 > s2/n2 for positive n, without dividing
    return s1 * n2 > s2 * n1


def is_paradox_point(cells) -> bool:
    """Strict two-level reversal test on 8 cell masses.

    ``cells`` is either a flat sequence of 8 masses in the layout described by
    ``CELL_SHAPE`` or a nested ``[treatment][outcome][group]`` structure.  Works
    on ints, Fractions and floats alike.  A treatment with zero mass in some
    group leaves the outcome undefined and counts as no paradox.
    """
    flat = list(np.asarray(cells, dtype=object).reshape(-1))
    if len(flat) != 8:
        raise ValueError(f"expected 8 cell masses, got {len(flat)}")
    if any(x < 0 for x in flat):
        raise ValueError("cell masses must be nonnegative")
    succ = [[flat[4 * t + 2 + g] for g in (0, 1)] for t in (0, 1)]
    size = [[flat[4 * t + g] + flat[4 * t + 2 + g] for g in (0, 1)] for t in (0, 1)]
    if any(size[t][g] <= 0 for t in (0, 1) for g in (0, 1)):
        return False

    def favours_first(s1, n1, s2, n2):
        return _beats(s1, n1, s2, n2), _beats(s2, n2, s1, n1)

    groups = [favours_first(succ[0][g], size[0][g], succ[1][g], size[1][g]) for g in (0, 1)]
    pooled = favours_first(sum(succ[0]), sum(size[0]), sum(succ[1]), sum(size[1]))
    first_everywhere = all(g[0] for g in groups)
    second_everywhere = all(g[1] for g in groups)
    return (first_everywhere and pooled[1]) or (second_everywhere and pooled[0])


def paradox_mask(p: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_paradox_point` over rows of an ``(N, 8)`` array."""
    p = p.reshape(-1, *CELL_SHAPE)
    succ = p[:, :, 1, :]
    size = p[:, :, 0, :] + succ
    valid = (size > 0).all(axis=(1, 2))
    g_first = succ[:, 0, :] * size[:, 1, :] > succ[:, 1, :] * size[:, 0, :]
    g_second = succ[:, 1, :] * size[:, 0, :] > succ[:, 0, :] * size[:, 1, :]
    ps, pn = succ.sum(axis=2), size.sum(axis=2)
    p_first = ps[:, 0] * pn[:, 1] > ps[:, 1] * pn[:, 0]
    p_second = ps[:, 1] * pn[:, 0] > ps[:, 0] * pn[:, 1]
    hits = (g_first.all(axis=1) & p_second) | (g_second.all(axis=1) & p_first)
    return hits & valid


def uniform_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` points drawn uniformly from the 7-simplex (flat Dirichlet)."""
    e = rng.standard_exponential((size, 8))
    return e / e.sum(axis=1, keepdims=True)


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def block_sizes(samples: int, block_size: int = BLOCK_SIZE) -> list:
    full, rest = divmod(samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def estimate_paradox_probability(samples: int, seed: int = 0, workers: int = 1,
                                 draw: Callable = uniform_simplex) -> ParadoxEstimate:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")

    def run_block(args):
        index, size = args
        return int(paradox_mask(np.asarray(draw(block_rng(seed, index), size))).sum())

    jobs = list(enumerate(block_sizes(samples)))
    if workers == 1:
        hits = sum(map(run_block, jobs))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run_block, jobs))
    estimate = hits / samples
    return ParadoxEstimate(samples, hits, estimate,
                           math.sqrt(estimate * (1 - estimate) / samples), seed)


def _pieces(successes: int, trials: int, min_trials: int, groups_left: int):
    """Candidate (successes, trials) for the next group, in lexicographic order."""
    max_trials = trials - min_trials * (groups_left - 1)
    for s in range(0, min(successes, max_trials) + 1):
        for t in range(max(s, min_trials), max_trials + 1):
            # the remaining groups must still be able to hold the remaining successes
            if successes - s <= trials - t:
                yield s, t


def find_reversing_split(totals_alt1: CohortCount, totals_alt2: CohortCount,
                         k: int, min_trials: int = 1,
                         alternatives: Sequence[str] = ("alt1", "alt2"),
                         cap: int = SEARCH_CAP) -> Optional[SplitWitness]:
    """Smallest regrouping of pooled counts into ``k`` groups that reverses
    the pooled preference in every group, or ``None`` if there is none.

    Groups are filled one at a time and candidates are tried in lexicographic
    order of (alt1 successes, alt1 trials, alt2 successes, alt2 trials), so the
    first complete split found is the lexicographically smallest.  Raises
    :class:`SearchCapExceeded` once more than ``cap`` candidate groups have
    been examined.
    """
    a, b = totals_alt1, totals_alt2
    if _beats(a.successes, a.trials, b.successes, b.trials):
        loser_wins = lambda s1, n1, s2, n2: _beats(s2, n2, s1, n1)  # noqa: E731
    elif _beats(b.successes, b.trials, a.successes, a.trials):
        loser_wins = lambda s1, n1, s2, n2: _beats(s1, n1, s2, n2)  # noqa: E731
    else:
        raise ValueError("pooled rates are equal; there is no preference to reverse")
    if k < 1 or min_trials < 1:
        raise ValueError("k and min_trials must be at least 1")
    if k * min_trials > min(a.trials, b.trials):
        raise ValueError(
            f"cannot give {k} groups at least {min_trials} trials each "
            f"from totals {a} and {b}")
    if k == 1:
        return None

    visited = 0

    def search(sa, ta, sb, tb, left):
        nonlocal visited
        if left == 1:
            visited += 1
            if loser_wins(sa, ta, sb, tb):
                return [(CohortCount(sa, ta), CohortCount(sb, tb))]
            return None
        for s1, n1 in _pieces(sa, ta, min_trials, left):
            for s2, n2 in _pieces(sb, tb, min_trials, left):
                visited += 1
                if visited > cap:
                    raise SearchCapExceeded(f"split search examined more than {cap} candidates")
                if not loser_wins(s1, n1, s2, n2):
                    continue
                rest = search(sa - s1, ta - n1, sb - s2, tb - n2, left - 1)
                if rest is not None:
                    return [(CohortCount(s1, n1), CohortCount(s2, n2))] + rest
        return None

    found = search(a.successes, a.trials, b.successes, b.trials, k)
    if found is None:
        return None
    witness = SplitWitness(tuple(alternatives), tuple(found))
    if not detect_reversal(witness.to_table()).reversed:
        raise AssertionError(f"split search produced a non-reversing witness {witness}")
    return witness
