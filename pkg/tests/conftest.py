"""Shared generators for synthetic corpora and annotations."""

from __future__ import annotations

import random

from xlproj.corpusio import Annotation, Corpus, Document
from xlproj.segment import tokenize_text

VOCABULARY = [
    "patient", "présente", "métastases", "hépatiques", "carcinome", "canalaire",
    "infiltrant", "tumeur", "maligne", "biopsie", "confirme", "lésion",
    "pulmonaire", "adénocarcinome", "gauche", "droite", "examen", "clinique",
    "révèle", "masse", "suspecte", "ganglions", "axillaires", "traitement",
    "chimiothérapie", "radiothérapie", "évolution", "favorable", "contrôle",
    "scanner", "thoracique", "abdominal", "nodule", "millimètres", "diagnostic",
]

LABELS = ["MORFOLOGIA_NEOPLASIA", "ENFERMEDAD"]
CODES = ["8000/6", "8500/3", "8140/3", "8070/3"]


def make_sentence(rng: random.Random, n_words: int | None = None) -> str:
    n = n_words or rng.randint(4, 9)
    words = [rng.choice(VOCABULARY) for _ in range(n)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def make_document(rng: random.Random, doc_id: str, n_sentences: int | None = None) -> Document:
    n = n_sentences or rng.randint(2, 5)
    return Document(doc_id, " ".join(make_sentence(rng) for _ in range(n)), "fr")


def make_annotations(rng: random.Random, doc: Document, max_anns: int = 4) -> list[Annotation]:
    """Random word-aligned annotations with non-duplicate spans."""
    tokens = [t for t in tokenize_text(doc.text) if any(c.isalnum() for c in t.surface)]
    anns: list[Annotation] = []
    used: set[tuple[int, int]] = set()
    for _ in range(rng.randint(1, max_anns)):
        if not tokens:
            break
        first = rng.randrange(len(tokens))
        span_len = rng.randint(1, 2)
        last = min(first + span_len - 1, len(tokens) - 1)
        start, end = tokens[first].start, tokens[last].end
        if (start, end) in used:
            continue
        used.add((start, end))
        codes = ((("ICD-O", rng.choice(CODES)),) if rng.random() < 0.8 else ())
        anns.append(
            Annotation(
                f"T{len(anns) + 1}", rng.choice(LABELS), start, end,
                doc.text[start:end], codes,
            )
        )
    anns.sort(key=lambda a: (a.start, a.end))
    return [
        Annotation(f"T{i + 1}", a.label, a.start, a.end, a.surface, a.codes)
        for i, a in enumerate(anns)
    ]


def make_corpus(rng: random.Random, n_docs: int, prefix: str = "doc") -> Corpus:
    corpus = Corpus()
    for k in range(n_docs):
        doc = make_document(rng, f"{prefix}{k:03d}")
        corpus.documents.append(doc)
        corpus.annotations[doc.doc_id] = make_annotations(rng, doc)
        corpus.extra_lines[doc.doc_id] = []
    return corpus
