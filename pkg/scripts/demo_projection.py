#!/usr/bin/env python3
"""Walk one Spanish→French pair through alignment, projection, and audit.

Prints the sentence beads, the word-alignment edges of the first bead, and
the projection record with its audit flags — useful for eyeballing how a
span travels across languages.

Usage: python3 scripts/demo_projection.py
"""

from xlproj.audit import audit_record
from xlproj.corpusio import Annotation, Document
from xlproj.embed import MockBackend
from xlproj.project import align_documents, project_document

SRC = Document(
    "demo",
    "El paciente presenta metástasis pulmonares. Se realiza biopsia de la lesión.",
    "es",
)
TGT = Document(
    "demo",
    "Le patient présente des métastases pulmonaires. Une biopsie de la lésion est réalisée.",
    "fr",
)
ANN = Annotation("T1", "MORFOLOGIA_NEOPLASIA", 21, 42, "metástasis pulmonares")


def main() -> None:
    backend = MockBackend(256)
    alignment = align_documents(SRC, TGT, backend)

    print("== sentence beads ==")
    for bead in alignment.beads:
        print(f"  src {bead.src_start}..{bead.src_end}  "
              f"tgt {bead.tgt_start}..{bead.tgt_end}  score {bead.score:.4f}")

    print("== word edges (bead 0) ==")
    src_tokens = alignment.src_tokens
    tgt_tokens = alignment.tgt_tokens
    for edge in alignment.bead_edges[0].edges:
        s = src_tokens[alignment.src_sent_offsets[alignment.beads[0].src_start] + edge.src_token]
        t = tgt_tokens[alignment.tgt_sent_offsets[alignment.beads[0].tgt_start] + edge.tgt_token]
        print(f"  {s.surface!r:>14} -> {t.surface!r:<14} {edge.score:+.3f} [{edge.direction}]")

    _, records = project_document(SRC, TGT, [ANN], backend)
    record = records[0]
    audit_record(record)
    print("== projection ==")
    print(f"  source  {ANN.start}..{ANN.end}  {ANN.surface!r}")
    print(f"  target  {record.tgt_start}..{record.tgt_end}  {record.tgt_surface!r}")
    print(f"  glued={record.glued} cross_bead={record.cross_bead} "
          f"flags={list(record.flags)} severity={record.severity}")


if __name__ == "__main__":
    main()
