"""Simpson-style preference reversal analysis for grouped trial data."""

from .cross_comparison import (PairSwitchResult, PermutationScore, all_switched_pairs,
                               permutation_score, permutation_score_fast, switched_pair)
from .decision_rules import (Decision, RankingReport, ReversalReport, detect_reversal,
                             group_winner, majority_decision, margin_vector,
                             pooled_decision, rank_report, rate_sum_decision)
from .formats import parse_table, read_table, to_csv, to_json
from .paradox_lab import (ParadoxEstimate, SplitWitness, estimate_paradox_probability,
                          find_reversing_split, is_paradox_point)
from .size_adjustment import (AdjustedCell, AdjustmentPolicy, adjust_table, adjust_value,
                              adjusted_decision, deviation_multiplier)
from .table_model import (CohortCount, PreferenceTable, SizeStats, column_size_stats,
                          pooled_rate, rate, rate_sum)

__version__ = "0.1.0"
