"""Command-line entry point.

Each subcommand loads a table, calls into the library, and emits a report::

    {"command": ..., "table_digest": ..., "results": {...}, "exact": {...}}

``results`` carries display values (rationals and reals rounded half-up to two
places) and ``exact`` mirrors it with every rational as ``"num/den"`` and
every real at full precision.

Exit codes: 0 success, 1 usage error, 2 parse or validation error,
3 split search found no witness, 4 split search cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import cross_comparison as cc
from . import decision_rules as dr
from . import paradox_lab as lab
from . import size_adjustment as sa
from .formats import TableParseError, read_table, table_digest
from .table_model import (CohortCount, PreferenceTable, TableError, column_size_stats,
                          pooled_count, pooled_rate, rate, rate_sum, round_half_up)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NO_WITNESS, EXIT_CAP = 0, 1, 2, 3, 4

COMMANDS = ("detect", "rank", "compare", "adjust", "decide", "mc", "split")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _count_arg(text: str) -> CohortCount:
    try:
        s, t = text.split("/")
        return CohortCount(int(s), int(t))
    except (ValueError, TableError) as exc:
        raise argparse.ArgumentTypeError(f"bad count {text!r}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--report", choices=("json", "text"), default="json",
                        help="report rendering (default: json)")

    with_table = _Parser(add_help=False)
    with_table.add_argument("table", help="table file (CSV or JSON)")
    with_table.add_argument("--format", choices=("csv", "json"),
                            help="input format (default: from file extension)")

    parser = _Parser(prog="simpsonkit",
                     description="Detect and probe Simpson-style preference reversals.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("detect", parents=[common, with_table],
                   help="per-group vs pooled winners and reversal flag")
    sub.add_parser("rank", parents=[common, with_table],
                   help="per-group and pooled rankings of all alternatives")
    p = sub.add_parser("compare", parents=[common, with_table],
                       help="cross-group comparison of two alternatives")
    p.add_argument("--mode", choices=("permutations", "pairwise"), default="permutations")
    p = sub.add_parser("adjust", parents=[common, with_table],
                       help="reweight rates from undersized cohorts")
    p.add_argument("--delta", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--k", type=_fraction_arg, default=Fraction(1))
    p.add_argument("--rule", choices=("majority", "sum"), default=None,
                   help="decision over adjusted weights (default: majority for 2 "
                        "alternatives, sum otherwise)")
    p = sub.add_parser("decide", parents=[common, with_table],
                       help="apply one aggregation rule")
    p.add_argument("--rule", choices=("pooled", "rate-sum", "majority"), default="pooled")
    p = sub.add_parser("mc", parents=[common],
                       help="Monte Carlo paradox frequency in random 2x2x2 tables")
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("split", parents=[common],
                       help="search for a regrouping that reverses the pooled preference")
    p.add_argument("table", nargs="?", help="two-alternative table whose pooled totals are split")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--totals", nargs=2, type=_count_arg, metavar="S/T",
                   help="pooled totals for the two alternatives, instead of a table")
    p.add_argument("--groups", type=int, default=2, help="number of groups k")
    p.add_argument("--min-trials", type=int, default=1)
    p.add_argument("--cap", type=int, default=lab.SEARCH_CAP, help=argparse.SUPPRESS)
    return parser


# report rendering

def _display(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (Fraction, float)):
        return round_half_up(value)
    if isinstance(value, dict):
        return {k: _display(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_display(v) for v in value]
    raise TypeError(f"cannot render {type(value).__name__}")


def _exact(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return {k: _exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_exact(v) for v in value]
    return value


def make_report(command: str, table, tree: dict) -> dict:
    return {
        "command": command,
        "table_digest": table_digest(table) if table is not None else None,
        "results": _display(tree),
        "exact": _exact(tree),
    }


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if report["table_digest"]:
        lines.append(f"table: {report['table_digest']}")

    def walk(shown, exact, path):
        if isinstance(shown, dict):
            for key in shown:
                walk(shown[key], exact[key], f"{path}.{key}" if path else key)
        elif isinstance(shown, list):
            for i, (s, e) in enumerate(zip(shown, exact)):
                walk(s, e, f"{path}[{i}]")
        elif shown is None:
            lines.append(f"{path}: tie" if path.endswith("winner") else f"{path}: none")
        elif isinstance(shown, str) and shown != exact:
            lines.append(f"{path}: {exact} ({shown})")
        else:
            lines.append(f"{path}: {str(shown).lower() if isinstance(shown, bool) else shown}")

    walk(report["results"], report["exact"], "")
    return "\n".join(lines) + "\n"


# commands

def _decision(d: dr.Decision) -> dict:
    return {"rule": d.rule, "winner": d.winner, "margin": d.margin}


def cmd_detect(table: PreferenceTable, args) -> tuple:
    rep = dr.detect_reversal(table)
    pooled = dr.pooled_decision(table)
    return EXIT_OK, {
        "alternatives": list(table.alternatives),
        "groups": [
            {"group": g, "winner": w, "margin": m,
             "rates": {a: rate(table.cell(a, g)) for a in table.alternatives}}
            for (g, w), m in zip(rep.per_group_winners, rep.margins)
        ],
        "pooled": {
            "winner": pooled.winner, "margin": pooled.margin,
            "rates": {a: pooled_rate(table, a) for a in table.alternatives},
            "counts": {a: str(pooled_count(table, a)) for a in table.alternatives},
        },
        "reversed": rep.reversed,
    }


def _ranking(order) -> list:
    return [list(tier) for tier in order]


def cmd_rank(table: PreferenceTable, args) -> tuple:
    rep = dr.rank_report(table)
    return EXIT_OK, {
        "groups": [{"group": g, "ranking": _ranking(r)}
                   for g, r in zip(table.groups, rep.per_group_rankings)],
        "pooled": {"ranking": _ranking(rep.pooled_ranking),
                   "rates": {a: pooled_rate(table, a) for a in table.alternatives}},
        "fully_reversed": rep.fully_reversed,
    }


def cmd_compare(table: PreferenceTable, args) -> tuple:
    alt1, alt2 = table.alternatives if table.m == 2 else (None, None)
    if args.mode == "pairwise":
        summary = cc.all_switched_pairs(table)
        return EXIT_OK, {
            "mode": "pairwise",
            "pairs": [{"groups": [p.group_a, p.group_b], "wins": {alt1: p.wins_alt1, alt2: p.wins_alt2},
                       "ties": p.ties} for p in summary.pairs],
            "wins": {alt1: summary.wins_alt1, alt2: summary.wins_alt2},
            "ties": summary.ties,
            "comparisons": summary.comparisons,
        }
    score = cc.score_permutations(table)
    return EXIT_OK, {
        "mode": "permutations",
        "method": "enumeration" if table.n <= cc.ENUMERATION_CAP else "closed_form",
        "alternative": alt2,
        "wins": score.wins_alt2, "ties": score.ties, "losses": score.losses_alt2,
        "total": score.total,
        "score": f"{score.wins_alt2}/{score.total}",
        "win_fraction": Fraction(score.wins_alt2, score.total),
    }


def cmd_adjust(table: PreferenceTable, args) -> tuple:
    policy = sa.AdjustmentPolicy(args.delta, args.k)
    rule = args.rule or (dr.MAJORITY if table.m == 2 else sa.SUM)
    adjusted = sa.adjust_table(table, policy)
    decision = sa.adjusted_decision(table, policy, rule)
    winners = sa.adjusted_group_winners(table, policy)
    tree = {
        "policy": {"delta": policy.delta, "k": policy.k},
        "columns": [],
        "decision": _decision(decision),
    }
    for j, g in enumerate(table.groups):
        stats = column_size_stats(table, g)
        tree["columns"].append({
            "group": g, "mean_size": stats.mean, "size_variance": stats.variance,
            "winner": winners[j],
            "cells": [{"alternative": a, "count": str(table.cells[i][j]),
                       "rate": adjusted[i][j].original_rate,
                       "multiplier": adjusted[i][j].multiplier,
                       "weight": adjusted[i][j].adjusted_weight,
                       "penalized": adjusted[i][j].penalized}
                      for i, a in enumerate(table.alternatives)],
        })
    if rule == dr.MAJORITY:
        counts = [sum(1 for w in winners if w == a) for a in table.alternatives]
        tree["decision"]["tally"] = "-".join(str(c) for c in counts) + \
            (" tie" if decision.is_tie else "")
    return EXIT_OK, tree


def cmd_decide(table: PreferenceTable, args) -> tuple:
    rule = args.rule.replace("-", "_")
    decision = dr.decide(table, rule)
    tree = _decision(decision)
    if rule == dr.RATE_SUM:
        tree["scores"] = {a: rate_sum(table, a) for a in table.alternatives}
    elif rule == dr.POOLED:
        tree["scores"] = {a: pooled_rate(table, a) for a in table.alternatives}
    else:
        winners = [dr.group_winner(table, g) for g in table.groups]
        tree["scores"] = {a: sum(1 for w in winners if w == a) for a in table.alternatives}
    return EXIT_OK, tree


def cmd_mc(args) -> tuple:
    est = lab.estimate_paradox_probability(args.samples, args.seed, args.workers)
    return EXIT_OK, {
        "samples": est.samples, "hits": est.hits, "seed": est.seed,
        "workers": args.workers,
        "estimate": est.estimate, "std_error": est.std_error,
        "hit_fraction": Fraction(est.hits, est.samples),
    }


def cmd_split(table, args) -> tuple:
    if args.totals:
        (a, b), labels = args.totals, ("alt1", "alt2")
    elif table is not None:
        if table.m != 2:
            raise ValueError(f"split needs exactly 2 alternatives, table has {table.m}")
        a, b = (pooled_count(table, x) for x in table.alternatives)
        labels = table.alternatives
    else:
        raise UsageError("split needs a table file or --totals")
    tree = {"totals": {labels[0]: str(a), labels[1]: str(b)},
            "groups": args.groups, "min_trials": args.min_trials}
    try:
        witness = lab.find_reversing_split(a, b, args.groups, args.min_trials, labels, args.cap)
    except lab.SearchCapExceeded as exc:
        tree.update(found=False, error=str(exc))
        return EXIT_CAP, tree
    if witness is None:
        tree.update(found=False, witness=None)
        return EXIT_NO_WITNESS, tree
    check = dr.detect_reversal(witness.to_table())
    tree.update(found=True, verified=check.reversed, witness=[
        {labels[0]: str(x), labels[1]: str(y), "winner": w}
        for (x, y), (_, w) in zip(witness.groups, check.per_group_winners)
    ])
    return EXIT_OK, tree


TABLE_COMMANDS = {"detect": cmd_detect, "rank": cmd_rank, "compare": cmd_compare,
                  "adjust": cmd_adjust, "decide": cmd_decide}


@dataclass
class Outcome:
    code: int
    report: Optional[dict] = None
    message: Optional[str] = None
    style: str = "json"
    output: Optional[str] = None

    def render(self) -> str:
        if self.style == "text":
            return render_text(self.report)
        return json.dumps(self.report, indent=2, ensure_ascii=False) + "\n"


def run(argv) -> Outcome:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return Outcome(EXIT_USAGE, message=str(exc))
    table = None
    try:
        if getattr(args, "table", None):
            table = read_table(args.table, args.format)
        if args.command == "mc":
            code, tree = cmd_mc(args)
        elif args.command == "split":
            code, tree = cmd_split(table, args)
        else:
            code, tree = TABLE_COMMANDS[args.command](table, args)
    except UsageError as exc:
        return Outcome(EXIT_USAGE, message=str(exc))
    except TableParseError as exc:
        return Outcome(EXIT_INVALID, message=f"{args.table}: {exc}")
    except (TableError, ValueError) as exc:
        return Outcome(EXIT_INVALID, message=str(exc))
    return Outcome(code, make_report(args.command, table, tree),
                   style=args.report, output=args.output)


def main(argv=None) -> int:
    outcome = run(sys.argv[1:] if argv is None else argv)
    if outcome.report is None:
        print(outcome.message, file=sys.stderr)
        return outcome.code
    text = outcome.render()
    if outcome.output:
        Path(outcome.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
