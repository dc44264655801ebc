#!/usr/bin/env python3
"""Print the evaluation table for the two published match-count columns.

Usage: python3 scripts/reproduce_metrics.py
"""

from xlproj.evalstats import MatchCounts, compute_metrics, format_percent

COLUMNS = {
    "CANTEMIST": MatchCounts(correct=13404, partial=2701, missing=770, spurious=424),
    "DISTEMIST": MatchCounts(correct=5991, partial=2376, missing=333, spurious=228),
}


def main() -> None:
    header = ["corpus", "P_relaxed", "R_relaxed", "F1_relaxed", "P_strict", "R_strict", "F1_strict"]
    print("\t".join(header))
    for name, counts in COLUMNS.items():
        m = compute_metrics(counts)
        row = [
            name,
            format_percent(m.precision_relaxed),
            format_percent(m.recall_relaxed),
            format_percent(m.f1_relaxed),
            format_percent(m.precision_strict),
            format_percent(m.recall_strict),
            format_percent(m.f1_strict),
        ]
        print("\t".join(row))


if __name__ == "__main__":
    main()
