"""MUC-style span matching, precision/recall/F1, and corpus concept tables.

Matching is 1-1 by construction: exact span matches pair first, then
remaining pairs with character overlap pair through a maximum-cardinality
matching. This keeps the accounting identities (correct + partial + missing
= |gold|, correct + partial + spurious = |system|) exact and symmetric.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpusio import Annotation, Corpus
from .errors import UnknownScheme


@dataclass
class MatchCounts:
    correct: int = 0
    partial: int = 0
    missing: int = 0
    spurious: int = 0

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            self.correct + other.correct,
            self.partial + other.partial,
            self.missing + other.missing,
            self.spurious + other.spurious,
        )


@dataclass(frozen=True)
class Metrics:
    precision_relaxed: float
    recall_relaxed: float
    f1_relaxed: float
    precision_strict: float
    recall_strict: float
    f1_strict: float


@dataclass
class MatchResult:
    counts: MatchCounts
    pairs: list[tuple[int, int, str]] = field(default_factory=list)  # (gold_i, sys_i, kind)


def _overlap(a: Annotation, b: Annotation) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start))


def match_documents(
    gold: list[Annotation], system: list[Annotation], label_sensitive: bool = True
) -> MatchResult:
    """Pair gold and system annotations of one document.

    Phase 1: exact (start, end[, label]) matches are CORRECT. Phase 2: the
    rest pair one-to-one through a maximum-cardinality matching on the
    character-overlap graph (same label required if label_sensitive);
    adjacency is explored by descending overlap for a deterministic pairing.
    Leftover gold is MISSING, leftover system SPURIOUS. Maximum (rather than
    greedy maximal) matching makes the counts symmetric under swapping gold
    and system and equal to an exhaustive matcher's.
    """
    result = MatchResult(MatchCounts())
    gold_free = set(range(len(gold)))
    sys_free = set(range(len(system)))

    def key(ann: Annotation):
        return (ann.start, ann.end, ann.label) if label_sensitive else (ann.start, ann.end)

    sys_by_key: dict[tuple, list[int]] = {}
    for j in sorted(sys_free):
        sys_by_key.setdefault(key(system[j]), []).append(j)
    for i in range(len(gold)):
        candidates = sys_by_key.get(key(gold[i]))
        if candidates:
            j = candidates.pop(0)
            gold_free.discard(i)
            sys_free.discard(j)
            result.counts.correct += 1
            result.pairs.append((i, j, "correct"))

    # Phase 2: maximum bipartite matching (Kuhn's augmenting paths) over
    # overlapping pairs, adjacency sorted by descending overlap then index.
    adjacency: dict[int, list[int]] = {}
    for i in sorted(gold_free):
        edges = []
        for j in sorted(sys_free):
            if label_sensitive and gold[i].label != system[j].label:
                continue
            ov = _overlap(gold[i], system[j])
            if ov >= 1:
                edges.append((-ov, j))
        adjacency[i] = [j for _neg, j in sorted(edges)]

    match_of_sys: dict[int, int] = {}

    def try_augment(i: int, visited: set[int]) -> bool:
        for j in adjacency[i]:
            if j in visited:
                continue
            visited.add(j)
            if j not in match_of_sys or try_augment(match_of_sys[j], visited):
                match_of_sys[j] = i
                return True
        return False

    for i in sorted(gold_free, key=lambda g: (gold[g].start, gold[g].end, g)):
        try_augment(i, set())

    for j, i in sorted(match_of_sys.items()):
        gold_free.discard(i)
        sys_free.discard(j)
        result.counts.partial += 1
        result.pairs.append((i, j, "partial"))

    result.counts.missing = len(gold_free)
    result.counts.spurious = len(sys_free)
    return result


def match_corpora(
    gold: Corpus, system: Corpus, label_sensitive: bool = True
) -> tuple[MatchCounts, dict[str, MatchCounts]]:
    """Match every shared document; gold-only or system-only docs count whole."""
    per_doc: dict[str, MatchCounts] = {}
    doc_ids = sorted(
        {d.doc_id for d in gold.documents} | {d.doc_id for d in system.documents}
    )
    total = MatchCounts()
    for doc_id in doc_ids:
        counts = match_documents(
            gold.anns(doc_id), system.anns(doc_id), label_sensitive
        ).counts
        per_doc[doc_id] = counts
        total = total + counts
    return total, per_doc


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def compute_metrics(counts: MatchCounts) -> Metrics:
    """Relaxed and strict precision/recall/F1 from the four match counts."""
    c, p, m, s = counts.correct, counts.partial, counts.missing, counts.spurious
    pr = _ratio(c + p, c + p + s)
    rr = _ratio(c + p, c + p + m)
    ps = _ratio(c, c + p + s)
    rs = _ratio(c, c + p + m)
    return Metrics(pr, rr, _f1(pr, rr), ps, rs, _f1(ps, rs))


def format_percent(value: float) -> str:
    """One-decimal percentage with half-up rounding (printed form)."""
    scaled = value * 1000
    rounded = int(scaled) + (1 if scaled - int(scaled) >= 0.5 else 0)
    return f"{rounded / 10:.1f}"


@dataclass(frozen=True)
class ConceptRow:
    code: str
    count: int
    most_frequent_surface: str


@dataclass
class ConceptTable:
    rows: list[ConceptRow]
    total_entities: int
    total_codes: int


def corpus_stats(corpus: Corpus, scheme: str, top_k: int) -> ConceptTable:
    """Concept frequency table for one terminology scheme.

    Counts (annotation, code) pairs per code; rows sort by count descending
    then code ascending; the modal surface breaks ties lexicographically.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    code_counts: Counter = Counter()
    surface_counts: dict[str, Counter] = {}
    total_entities = 0
    any_codes = False
    for doc_id in corpus.annotations:
        for ann in corpus.annotations[doc_id]:
            total_entities += 1
            for sch, code in ann.codes:
                any_codes = True
                if sch != scheme:
                    continue
                code_counts[code] += 1
                surface_counts.setdefault(code, Counter())[ann.surface] += 1
    if any_codes and not code_counts:
        raise UnknownScheme(f"no codes under scheme {scheme!r} in corpus")
    ordered = sorted(code_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    rows = []
    for code, count in ordered[:top_k]:
        surfaces = surface_counts[code]
        top = max(surfaces.values())
        best = min(s for s, c in surfaces.items() if c == top)
        rows.append(ConceptRow(code, count, best))
    return ConceptTable(rows, total_entities, sum(code_counts.values()))
