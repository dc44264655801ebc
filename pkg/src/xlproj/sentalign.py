"""Monotone sentence alignment into beads via embedding similarity.

A single-pass dynamic program over prefix states (i, j) finds the bead
partition maximizing total bead score. Documents here are translations of
each other, so alignments stay near-diagonal and max 2-2 beads suffice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import Vector, cosine
from .errors import DimensionMismatch


@dataclass(frozen=True)
class Bead:
    """One aligned sentence group: half-open index ranges on both sides.

    A null bead (deletion/insertion) has exactly one empty range.
    """

    src_start: int
    src_end: int
    tgt_start: int
    tgt_end: int
    score: float

    @property
    def src_size(self) -> int:
        return self.src_end - self.src_start

    @property
    def tgt_size(self) -> int:
        return self.tgt_end - self.tgt_start


@dataclass(frozen=True)
class AlignParams:
    max_bead: int = 2
    null_penalty: float = 0.3
    size_penalty: float = 0.05  # per sentence beyond 1-1

    def __post_init__(self):
        if self.max_bead < 1 or self.null_penalty < 0 or self.size_penalty < 0:
            raise ValueError("invalid alignment parameters")


def _check_dims(vecs: list[Vector]) -> int | None:
    dim = None
    for v in vecs:
        if dim is None:
            dim = v.shape[0]
        elif v.shape[0] != dim:
            raise DimensionMismatch(f"{dim} vs {v.shape[0]}")
    return dim


def bead_score(
    src_vecs: list[Vector], tgt_vecs: list[Vector], params: AlignParams
) -> float:
    """Score one candidate bead.

    Empty side: -null_penalty. Otherwise cosine of the normalized vector sums
    minus size_penalty per sentence beyond a 1-1 bead.
    """
    if not src_vecs or not tgt_vecs:
        return -params.null_penalty
    if _check_dims(list(src_vecs) + list(tgt_vecs)) is None:
        return -params.null_penalty
    src_sum = np.sum(src_vecs, axis=0)
    tgt_sum = np.sum(tgt_vecs, axis=0)
    penalty = params.size_penalty * (len(src_vecs) + len(tgt_vecs) - 2)
    return cosine(src_sum, tgt_sum) - penalty


def align_sentences(
    src_vecs: list[Vector], tgt_vecs: list[Vector], params: AlignParams | None = None
) -> list[Bead]:
    """Best monotone bead partition of both sentence sequences.

    Dynamic programming over prefix pairs; allowed moves are a-b beads with
    1 <= a, b <= max_bead plus size-1 null beads. Ties break toward fewer
    beads, then lexicographically earliest bead.
    """
    if params is None:
        params = AlignParams()
    n, m = len(src_vecs), len(tgt_vecs)
    if n and m:
        _check_dims(list(src_vecs) + list(tgt_vecs))

    moves = [(1, 0), (0, 1)]
    for a in range(1, params.max_bead + 1):
        for b in range(1, params.max_bead + 1):
            moves.append((a, b))
    # Lexicographically earliest bead from a fixed (i, j) means smallest
    # (src_end, tgt_start-side tuple): order moves by (a, b).
    moves.sort()

    # best[i][j] = (score, -bead_count) maximized; choice[i][j] = move taken.
    NEG = float("-inf")
    best_score = [[NEG] * (m + 1) for _ in range(n + 1)]
    best_count = [[0] * (m + 1) for _ in range(n + 1)]
    choice: list[list[tuple[int, int] | None]] = [[None] * (m + 1) for _ in range(n + 1)]
    best_score[n][m] = 0.0

    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n and j == m:
                continue
            for a, b in moves:
                if i + a > n or j + b > m:
                    continue
                tail = best_score[i + a][j + b]
                if tail == NEG:
                    continue
                step = bead_score(src_vecs[i : i + a], tgt_vecs[j : j + b], params)
                cand = step + tail
                cand_count = best_count[i + a][j + b] + 1
                # Moves are visited in ascending (a, b); replacing only on a
                # strict (score, -count) improvement keeps the lexicographically
                # earliest bead among full ties.
                if (cand, -cand_count) > (best_score[i][j], -best_count[i][j]):
                    best_score[i][j] = cand
                    best_count[i][j] = cand_count
                    choice[i][j] = (a, b)

    beads: list[Bead] = []
    i = j = 0
    while (i, j) != (n, m):
        move = choice[i][j]
        assert move is not None, "DP failed to cover the input"
        a, b = move
        score = bead_score(src_vecs[i : i + a], tgt_vecs[j : j + b], params)
        beads.append(Bead(i, i + a, j, j + b, score))
        i, j = i + a, j + b
    return beads


def total_score(beads: list[Bead]) -> float:
    return sum(b.score for b in beads)
