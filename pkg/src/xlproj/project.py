"""Annotation projection across a document pair via sentence and word alignment.

A source annotation's covered tokens are followed through the word-alignment
edges of every bead they touch; the projected span is the single min-max
interval over all aligned target tokens. Filling the gaps between fragmented
hits this way trades precision for recall and keeps every emitted span
contiguous; the audit step flags the suspicious cases.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .corpusio import Annotation, Corpus, Document
from .segment import Sentence, Token, split_sentences, tokenize
from .sentalign import AlignParams, Bead, align_sentences
from .wordalign import EdgeSet, align_words


@dataclass
class ProjectionRecord:
    """One source annotation's projection outcome (one TSV report row)."""

    doc_id: str
    src_ann: Annotation
    tgt_start: int | None = None
    tgt_end: int | None = None
    tgt_surface: str | None = None
    glued: bool = False
    cross_bead: bool = False
    mean_edge_score: float = 0.0
    flags: list[str] = field(default_factory=list)
    severity: str = "clean"

    @property
    def has_projection(self) -> bool:
        return self.tgt_start is not None


@dataclass
class DocumentAlignment:
    """All alignment artifacts for one source/target document pair."""

    src_doc: Document
    tgt_doc: Document
    src_sentences: list[Sentence]
    tgt_sentences: list[Sentence]
    src_tokens: list[Token]  # flat, sentence order
    tgt_tokens: list[Token]
    src_sent_offsets: list[int]  # flat token index where each sentence starts
    tgt_sent_offsets: list[int]
    beads: list[Bead]
    bead_edges: list[EdgeSet]  # edge indices are bead-local token positions


@dataclass
class ProjectionSummary:
    documents: int = 0
    missing_documents: list[str] = field(default_factory=list)
    annotations_in: int = 0
    annotations_out: int = 0
    empty_projections: int = 0


def _flat_tokens(doc: Document, sentences: list[Sentence]) -> tuple[list[Token], list[int]]:
    tokens: list[Token] = []
    offsets: list[int] = []
    for sent in sentences:
        offsets.append(len(tokens))
        tokens.extend(tokenize(doc, sent))
    offsets.append(len(tokens))
    return tokens, offsets


def align_documents(
    src_doc: Document,
    tgt_doc: Document,
    backend,
    params: AlignParams | None = None,
    min_edge_score: float = -1.0,
    abbreviations=None,
) -> DocumentAlignment:
    """Run segmentation, embedding, sentence and word alignment for one pair."""
    params = params or AlignParams()
    src_sents = split_sentences(src_doc, abbreviations)
    tgt_sents = split_sentences(tgt_doc, abbreviations)
    src_tokens, src_offsets = _flat_tokens(src_doc, src_sents)
    tgt_tokens, tgt_offsets = _flat_tokens(tgt_doc, tgt_sents)

    src_vecs = backend.embed_sentences([src_doc.text[s.start : s.end] for s in src_sents])
    tgt_vecs = backend.embed_sentences([tgt_doc.text[s.start : s.end] for s in tgt_sents])
    beads = align_sentences(src_vecs, tgt_vecs, params)

    src_tok_vecs = backend.embed_tokens(
        [[t.surface for t in src_tokens[src_offsets[i] : src_offsets[i + 1]]]
         for i in range(len(src_sents))]
    )
    tgt_tok_vecs = backend.embed_tokens(
        [[t.surface for t in tgt_tokens[tgt_offsets[i] : tgt_offsets[i + 1]]]
         for i in range(len(tgt_sents))]
    )

    bead_edges = []
    for bead in beads:
        bead_src = [v for i in range(bead.src_start, bead.src_end) for v in src_tok_vecs[i]]
        bead_tgt = [v for j in range(bead.tgt_start, bead.tgt_end) for v in tgt_tok_vecs[j]]
        bead_edges.append(align_words(bead_src, bead_tgt, min_edge_score))

    return DocumentAlignment(
        src_doc, tgt_doc, src_sents, tgt_sents,
        src_tokens, tgt_tokens, src_offsets, tgt_offsets, beads, bead_edges,
    )


def _covered_token_indices(ann: Annotation, tokens: list[Token]) -> list[int]:
    # Overlap, not containment: annotations cut mid-token still project.
    return [i for i, t in enumerate(tokens) if t.start < ann.end and t.end > ann.start]


def project_annotation(ann: Annotation, alignment: DocumentAlignment) -> ProjectionRecord:
    """Project one source annotation through the word-alignment edges."""
    rec = ProjectionRecord(alignment.src_doc.doc_id, ann)
    covered = _covered_token_indices(ann, alignment.src_tokens)
    if not covered:
        return rec

    # Map each bead to its flat source/target token windows once.
    touched_beads = set()
    hit_tgt: set[int] = set()
    scores: list[float] = []
    for k, bead in enumerate(alignment.beads):
        src_lo = alignment.src_sent_offsets[bead.src_start]
        src_hi = alignment.src_sent_offsets[bead.src_end]
        in_bead = [i for i in covered if src_lo <= i < src_hi]
        if not in_bead:
            continue
        touched_beads.add(k)
        if bead.tgt_start == bead.tgt_end:
            continue  # null bead: no target side
        tgt_lo = alignment.tgt_sent_offsets[bead.tgt_start]
        local = {i - src_lo for i in in_bead}
        for edge in alignment.bead_edges[k].edges:
            if edge.src_token in local:
                hit_tgt.add(tgt_lo + edge.tgt_token)
                scores.append(edge.score)

    rec.cross_bead = len(touched_beads) > 1
    if not hit_tgt:
        return rec

    ordered = sorted(hit_tgt)
    rec.glued = ordered[-1] - ordered[0] + 1 != len(ordered)
    start = alignment.tgt_tokens[ordered[0]].start
    end = alignment.tgt_tokens[ordered[-1]].end
    text = alignment.tgt_doc.text
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    rec.tgt_start, rec.tgt_end = start, end
    rec.tgt_surface = text[start:end]
    rec.mean_edge_score = sum(scores) / len(scores)
    return rec


def project_document(
    src_doc: Document,
    tgt_doc: Document,
    src_anns: list[Annotation],
    backend,
    params: AlignParams | None = None,
    min_edge_score: float = -1.0,
    abbreviations=None,
) -> tuple[list[Annotation], list[ProjectionRecord]]:
    """Project every source annotation onto the target document.

    Emitted annotations carry the source label and codes; ids are regenerated
    T1..Tn in emission order. Records with no projection emit no annotation
    but stay in the report.
    """
    alignment = align_documents(
        src_doc, tgt_doc, backend, params, min_edge_score, abbreviations
    )
    records = [project_annotation(ann, alignment) for ann in src_anns]
    emitted: list[Annotation] = []
    for rec in records:
        if not rec.has_projection:
            continue
        emitted.append(
            Annotation(
                ann_id=f"T{len(emitted) + 1}",
                label=rec.src_ann.label,
                start=rec.tgt_start,
                end=rec.tgt_end,
                surface=rec.tgt_surface,
                codes=rec.src_ann.codes,
            )
        )
    return emitted, records


def project_corpus(
    src_corpus: Corpus,
    tgt_texts: Corpus,
    backend,
    params: AlignParams | None = None,
    min_edge_score: float = -1.0,
    abbreviations=None,
    jobs: int = 1,
) -> tuple[Corpus, list[ProjectionRecord], ProjectionSummary]:
    """Project a whole corpus onto its translated texts.

    Target documents missing from ``tgt_texts`` are reported in the summary
    rather than failing the run. Document pairs are independent; ``jobs``
    bounds the worker pool.
    """
    summary = ProjectionSummary()
    tgt_docs = {d.doc_id: d for d in tgt_texts.documents}
    pairs = []
    for src_doc in src_corpus.documents:
        if src_doc.doc_id in tgt_docs:
            pairs.append((src_doc, tgt_docs[src_doc.doc_id]))
        else:
            summary.missing_documents.append(src_doc.doc_id)

    def run(pair):
        src_doc, tgt_doc = pair
        anns, recs = project_document(
            src_doc, tgt_doc, src_corpus.anns(src_doc.doc_id),
            backend, params, min_edge_score, abbreviations,
        )
        return src_doc.doc_id, tgt_doc, anns, recs

    if jobs > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]

    out = Corpus()
    records: list[ProjectionRecord] = []
    for doc_id, tgt_doc, anns, recs in results:
        out.documents.append(tgt_doc)
        out.annotations[doc_id] = anns
        out.extra_lines[doc_id] = []
        records.extend(recs)
        summary.documents += 1
        summary.annotations_in += len(recs)
        summary.annotations_out += len(anns)
        summary.empty_projections += sum(1 for r in recs if not r.has_projection)
    return out, records, summary
