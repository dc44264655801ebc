"""Bidirectional nearest-neighbor word alignment within one sentence bead.

Each source token links to its most similar target token (forward) and vice
versa (backward); the edge set is the union of both maps, keeping one-to-many
correspondences available to the recall-oriented projection step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import Vector
from .errors import DimensionMismatch

FORWARD = "forward"
BACKWARD = "backward"
BOTH = "both"

# Identical token pairs can score an ulp apart because BLAS evaluates
# different matrix entries with different summation orders, so ties are
# detected within a small absolute band rather than by exact equality.
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Edge:
    src_token: int
    tgt_token: int
    score: float
    direction: str


@dataclass(frozen=True)
class EdgeSet:
    edges: tuple[Edge, ...]

    def by_pair(self) -> dict[tuple[int, int], Edge]:
        return {(e.src_token, e.tgt_token): e for e in self.edges}


def _nearest(sim_row: np.ndarray, own_idx: int, own_n: int, other_n: int) -> int:
    """Index of the best match in a similarity row.

    Ties break by smallest relative-position distance |i/n - j/m|, then by
    smallest index, so repeated tokens (e.g. two commas) align in order.
    """
    best = float(sim_row.max())
    candidates = np.flatnonzero(sim_row >= best - TIE_TOLERANCE)
    if len(candidates) == 1:
        return int(candidates[0])
    own_pos = own_idx / own_n
    return int(min(candidates, key=lambda j: (abs(own_pos - j / other_n), j)))


def align_words(
    src_vecs: list[Vector], tgt_vecs: list[Vector], min_score: float = -1.0
) -> EdgeSet:
    """Union of forward and backward nearest-neighbor token maps.

    An empty side yields an empty edge set. ``min_score`` filters edges below
    a similarity floor (default keeps everything).
    """
    if not src_vecs or not tgt_vecs:
        return EdgeSet(())
    src = np.stack(src_vecs)
    tgt = np.stack(tgt_vecs)
    if src.shape[1] != tgt.shape[1]:
        raise DimensionMismatch(f"{src.shape[1]} vs {tgt.shape[1]}")
    # All inputs are unit vectors by the backend contract, but normalize
    # defensively so scores stay within [-1, 1].
    src = src / np.maximum(np.linalg.norm(src, axis=1, keepdims=True), 1e-12)
    tgt = tgt / np.maximum(np.linalg.norm(tgt, axis=1, keepdims=True), 1e-12)
    sim = src @ tgt.T
    np.clip(sim, -1.0, 1.0, out=sim)
    n, m = sim.shape

    directions: dict[tuple[int, int], str] = {}
    for i in range(n):
        j = _nearest(sim[i], i, n, m)
        directions[(i, j)] = FORWARD
    for j in range(m):
        i = _nearest(sim[:, j], j, m, n)
        directions[(i, j)] = BOTH if (i, j) in directions else BACKWARD

    edges = []
    for (i, j), direction in sorted(directions.items()):
        score = float(sim[i, j])
        if score >= min_score:
            edges.append(Edge(i, j, score, direction))
    return EdgeSet(tuple(edges))
