#!/usr/bin/env python3
"""Project a synthetic corpus onto identical target texts and time it.

The identity pipeline is a fixpoint check: every annotation must land on its
own span, so strict precision/recall must both be 100%. Prints per-stage
timings and the final metrics.

Usage: python3 scripts/identity_benchmark.py [--docs N] [--seed S] [--jobs J]
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import make_corpus  # noqa: E402 (generator shared with the test suite)
from xlproj.corpusio import Corpus, Document  # noqa: E402
from xlproj.embed import MockBackend  # noqa: E402
from xlproj.evalstats import compute_metrics, match_corpora  # noqa: E402
from xlproj.project import project_corpus  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    src = make_corpus(rng, args.docs)
    tgt = Corpus(documents=[Document(d.doc_id, d.text, "fr") for d in src.documents])
    backend = MockBackend(256)

    started = time.monotonic()
    projected, records, summary = project_corpus(src, tgt, backend, jobs=args.jobs)
    projection_time = time.monotonic() - started

    total, _ = match_corpora(src, projected)
    metrics = compute_metrics(total)

    print(f"documents          {summary.documents}")
    print(f"annotations        {sum(len(a) for a in src.annotations.values())}")
    print(f"projection time    {projection_time:.2f}s")
    print(f"strict P/R/F1      {metrics.precision_strict:.4f} "
          f"{metrics.recall_strict:.4f} {metrics.f1_strict:.4f}")
    print(f"relaxed P/R/F1     {metrics.precision_relaxed:.4f} "
          f"{metrics.recall_relaxed:.4f} {metrics.f1_relaxed:.4f}")
    flagged = sum(1 for r in records if r.flags)
    print(f"flagged records    {flagged}/{len(records)}")
    if metrics.f1_strict != 1.0:
        raise SystemExit("identity fixpoint violated")


if __name__ == "__main__":
    main()
