"""Terminology code enrichment from a user-supplied mapping table.

Typical use: adding SNOMED-CT links to an ICD-O annotated corpus. The
mapping data itself (e.g. UMLS-derived) is license-restricted and always an
input, never bundled.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .corpusio import Corpus
from .errors import CorpusIoError, MalformedMapping


@dataclass
class CodeMap:
    """Multimap from one terminology scheme to another."""

    scheme_from: str
    scheme_to: str
    entries: dict[str, list[tuple[str, str]]] = field(default_factory=dict)  # code -> [(code, description)]
    duplicate_rows: int = 0

    def targets(self, code: str) -> list[tuple[str, str]]:
        return self.entries.get(code, [])

    def description(self, code: str) -> str:
        for _, pairs in self.entries.items():
            for to_code, desc in pairs:
                if to_code == code:
                    return desc
        return ""

    def size(self) -> int:
        return sum(len(v) for v in self.entries.values())


def load_mapping(
    path: str, scheme_from: str = "ICD-O", scheme_to: str = "SNOMED"
) -> CodeMap:
    """Load a mapping TSV: ``from_code \\t to_code [\\t description]``.

    A header row starting with the literal ``from_code`` is skipped.
    Duplicate (from, to) rows are dropped and counted.
    """
    cmap = CodeMap(scheme_from, scheme_to)
    seen: set[tuple[str, str]] = set()
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().split("\n")
    except OSError as exc:
        raise CorpusIoError(f"{path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if lineno == 1 and fields[0].strip() == "from_code":
            continue
        if len(fields) not in (2, 3) or not fields[0].strip() or not fields[1].strip():
            raise MalformedMapping(f"{path}:{lineno}: expected 2 or 3 tab fields")
        from_code = fields[0].strip()
        to_code = fields[1].strip()
        description = fields[2].strip() if len(fields) == 3 else ""
        if (from_code, to_code) in seen:
            cmap.duplicate_rows += 1
            continue
        seen.add((from_code, to_code))
        cmap.entries.setdefault(from_code, []).append((to_code, description))
    return cmap


def enrich_corpus(corpus: Corpus, cmap: CodeMap) -> tuple[Corpus, int]:
    """Append mapped codes to every annotation that carries a source-scheme code.

    Pairs already present are not re-added, which makes enrichment idempotent.
    Texts and spans are untouched. Returns the enriched corpus and the number
    of appended (scheme, code) pairs.
    """
    out = Corpus(
        documents=list(corpus.documents),
        annotations={},
        extra_lines={k: list(v) for k, v in corpus.extra_lines.items()},
    )
    added = 0
    for doc_id, anns in corpus.annotations.items():
        new_anns = []
        for ann in anns:
            codes = list(ann.codes)
            present = set(codes)
            for scheme, code in ann.codes:
                if scheme != cmap.scheme_from:
                    continue
                for to_code, _desc in cmap.targets(code):
                    pair = (cmap.scheme_to, to_code)
                    if pair not in present:
                        codes.append(pair)
                        present.add(pair)
                        added += 1
            new_anns.append(replace(ann, codes=tuple(codes)) if len(codes) != len(ann.codes) else ann)
        out.annotations[doc_id] = new_anns
    return out, added
