"""Brat standoff corpus parsing, validation, and serialization.

A corpus is a directory of paired ``<id>.txt`` / ``<id>.ann`` files. All
offsets are Unicode codepoint indices into the document text, never bytes.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field, replace

from .errors import (
    CorpusIoError,
    DanglingNote,
    InvalidAnnotation,
    MalformedLine,
    OffsetOutOfRange,
    SurfaceMismatch,
)

DEFAULT_SCHEME = "ICD-O"

_T_ID = re.compile(r"^T\d+$")


@dataclass(frozen=True)
class Document:
    """One corpus document: immutable text plus identifier and language tag."""

    doc_id: str
    text: str
    lang: str = "und"


@dataclass(frozen=True)
class Annotation:
    """A labeled character span with surface text and terminology codes.

    ``codes`` holds (scheme, code) pairs, e.g. ``("ICD-O", "8000/6")``.
    ``discontinuous`` marks spans that were fragmented in the source file and
    are modeled here as their covering interval; they are never re-emitted as
    fragments.
    """

    ann_id: str
    label: str
    start: int
    end: int
    surface: str
    codes: tuple[tuple[str, str], ...] = ()
    discontinuous: bool = False


@dataclass(frozen=True)
class Violation:
    """One corpus invariant violation; violations are data, not exceptions."""

    kind: str  # offset_out_of_range | surface_mismatch | duplicate_ann_id | missing_document
    doc_id: str
    ann_id: str
    detail: str


@dataclass
class Corpus:
    """Ordered documents plus per-document annotations and opaque extra lines.

    ``extra_lines`` carries standoff line kinds we do not model (R, E, A, ...)
    verbatim so that round-tripping a corpus never destroys data.
    """

    documents: list[Document] = field(default_factory=list)
    annotations: dict[str, list[Annotation]] = field(default_factory=dict)
    extra_lines: dict[str, list[str]] = field(default_factory=dict)

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise KeyError(doc_id)

    def anns(self, doc_id: str) -> list[Annotation]:
        return self.annotations.get(doc_id, [])

    def total_annotations(self) -> int:
        return sum(len(a) for a in self.annotations.values())


def _ann_sort_key(ann: Annotation) -> tuple:
    m = re.match(r"^T(\d+)$", ann.ann_id)
    num = int(m.group(1)) if m else float("inf")
    return (ann.start, ann.end, num, ann.ann_id)


def _parse_code(raw: str, default_scheme: str) -> tuple[str, str]:
    if ":" in raw:
        scheme, value = raw.split(":", 1)
        if scheme and value:
            return (scheme, value)
    return (default_scheme, raw)


def parse_standoff(
    ann_text: str, doc: Document, default_scheme: str = DEFAULT_SCHEME
) -> tuple[list[Annotation], list[str]]:
    """Parse a .ann file into annotations plus verbatim unmodeled lines.

    T-lines become :class:`Annotation`; ``#`` AnnotatorNotes lines attach
    codes to the referenced T-id; every other non-empty line kind is carried
    opaquely for round-tripping.
    """
    anns: dict[str, Annotation] = {}
    order: list[str] = []
    extras: list[str] = []
    for lineno, line in enumerate(ann_text.split("\n"), start=1):
        if not line.strip():
            continue
        if line.startswith("T"):
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedLine(f"line {lineno}: expected 3 tab fields, got {len(parts)}")
            ann_id, span_field, surface = parts
            if not _T_ID.match(ann_id):
                raise MalformedLine(f"line {lineno}: bad T-id {ann_id!r}")
            if ann_id in anns:
                raise MalformedLine(f"line {lineno}: duplicate id {ann_id}")
            head, _, rest = span_field.partition(" ")
            label = head
            if not label or not rest:
                raise MalformedLine(f"line {lineno}: bad span field {span_field!r}")
            fragments = []
            for frag in rest.split(";"):
                nums = frag.split()
                if len(nums) != 2 or not all(n.isdigit() for n in nums):
                    raise MalformedLine(f"line {lineno}: bad offsets {frag!r}")
                fragments.append((int(nums[0]), int(nums[1])))
            start = min(f[0] for f in fragments)
            end = max(f[1] for f in fragments)
            discontinuous = len(fragments) > 1
            if not (0 <= start < end <= len(doc.text)):
                raise OffsetOutOfRange(
                    f"line {lineno}: span {start}..{end} outside document of length {len(doc.text)}"
                )
            if discontinuous:
                # Fragment surfaces cannot match the covering slice; model the
                # covering interval and take its surface from the document.
                surface = doc.text[start:end]
            elif surface != doc.text[start:end]:
                raise SurfaceMismatch(
                    f"line {lineno}: {ann_id} surface {surface!r} != document slice "
                    f"{doc.text[start:end]!r}"
                )
            anns[ann_id] = Annotation(ann_id, label, start, end, surface, (), discontinuous)
            order.append(ann_id)
        elif line.startswith("#"):
            parts = line.split("\t")
            if len(parts) != 3 or not parts[1].startswith("AnnotatorNotes "):
                raise MalformedLine(f"line {lineno}: bad note line {line!r}")
            ref = parts[1][len("AnnotatorNotes "):].strip()
            if ref not in anns:
                raise DanglingNote(f"line {lineno}: note references unknown id {ref!r}")
            code = _parse_code(parts[2], default_scheme)
            existing = anns[ref]
            if code not in existing.codes:
                anns[ref] = replace(existing, codes=existing.codes + (code,))
        else:
            extras.append(line)
    return [anns[ann_id] for ann_id in order], extras


def parse_ann(
    ann_text: str, doc: Document, default_scheme: str = DEFAULT_SCHEME
) -> list[Annotation]:
    """Parse a .ann file, returning only the modeled annotations."""
    anns, _ = parse_standoff(ann_text, doc, default_scheme)
    return anns


def serialize_ann(
    anns: list[Annotation],
    extra_lines: list[str] | None = None,
    default_scheme: str = DEFAULT_SCHEME,
) -> str:
    """Serialize annotations to canonical standoff form.

    T-lines come in ascending (start, end, id) order, then one note line per
    code in T order, then any opaque extra lines. Codes under the default
    scheme are written bare; others as ``scheme:code``. LF line endings.
    """
    lines = []
    ordered = sorted(anns, key=_ann_sort_key)
    for ann in ordered:
        if ann.start >= ann.end:
            raise InvalidAnnotation(f"{ann.ann_id}: start {ann.start} >= end {ann.end}")
        lines.append(f"{ann.ann_id}\t{ann.label} {ann.start} {ann.end}\t{ann.surface}")
    note_n = 0
    for ann in ordered:
        for scheme, code in ann.codes:
            note_n += 1
            value = code if scheme == default_scheme else f"{scheme}:{code}"
            lines.append(f"#{note_n}\tAnnotatorNotes {ann.ann_id}\t{value}")
    if extra_lines:
        lines.extend(extra_lines)
    return "".join(line + "\n" for line in lines)


def load_corpus(directory: str, lang: str = "und", default_scheme: str = DEFAULT_SCHEME) -> Corpus:
    """Load every ``<id>.txt`` (and optional ``<id>.ann``) under a directory."""
    if not os.path.isdir(directory):
        raise CorpusIoError(f"not a directory: {directory}")
    corpus = Corpus()
    names = sorted(os.listdir(directory))
    txt_ids = sorted(n[:-4] for n in names if n.endswith(".txt"))
    orphan = [n for n in names if n.endswith(".ann") and n[:-4] not in txt_ids]
    if orphan:
        raise CorpusIoError(f"{directory}: .ann without matching .txt: {orphan}")
    for doc_id in txt_ids:
        try:
            with open(os.path.join(directory, doc_id + ".txt"), encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise CorpusIoError(f"{doc_id}: {exc}") from exc
        doc = Document(doc_id, text, lang)
        corpus.documents.append(doc)
        ann_path = os.path.join(directory, doc_id + ".ann")
        anns: list[Annotation] = []
        extras: list[str] = []
        if os.path.exists(ann_path):
            try:
                with open(ann_path, encoding="utf-8") as f:
                    ann_text = f.read()
            except OSError as exc:
                raise CorpusIoError(f"{doc_id}: {exc}") from exc
            try:
                anns, extras = parse_standoff(ann_text, doc, default_scheme)
            except (MalformedLine, OffsetOutOfRange, SurfaceMismatch, DanglingNote) as exc:
                raise type(exc)(f"{doc_id}.ann: {exc}") from exc
        corpus.annotations[doc_id] = anns
        corpus.extra_lines[doc_id] = extras
    return corpus


def atomic_write(path: str, data: str) -> None:
    """Write a file atomically (temp file + rename in the same directory)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_corpus(corpus: Corpus, directory: str, default_scheme: str = DEFAULT_SCHEME) -> None:
    """Write a corpus directory in canonical standoff form."""
    os.makedirs(directory, exist_ok=True)
    for doc in corpus.documents:
        atomic_write(os.path.join(directory, doc.doc_id + ".txt"), doc.text)
        ann_text = serialize_ann(
            corpus.anns(doc.doc_id), corpus.extra_lines.get(doc.doc_id), default_scheme
        )
        atomic_write(os.path.join(directory, doc.doc_id + ".ann"), ann_text)


def validate(corpus: Corpus) -> list[Violation]:
    """Check every corpus invariant; an empty result means the corpus is valid."""
    violations = []
    doc_ids = {doc.doc_id for doc in corpus.documents}
    texts = {doc.doc_id: doc.text for doc in corpus.documents}
    for doc_id, anns in corpus.annotations.items():
        if doc_id not in doc_ids:
            violations.append(
                Violation("missing_document", doc_id, "", "annotations without a document")
            )
            continue
        text = texts[doc_id]
        seen: set[str] = set()
        for ann in anns:
            if ann.ann_id in seen:
                violations.append(
                    Violation("duplicate_ann_id", doc_id, ann.ann_id, "id used twice")
                )
            seen.add(ann.ann_id)
            if not (0 <= ann.start < ann.end <= len(text)):
                violations.append(
                    Violation(
                        "offset_out_of_range",
                        doc_id,
                        ann.ann_id,
                        f"span {ann.start}..{ann.end} vs length {len(text)}",
                    )
                )
            elif not ann.discontinuous and ann.surface != text[ann.start:ann.end]:
                violations.append(
                    Violation(
                        "surface_mismatch",
                        doc_id,
                        ann.ann_id,
                        f"{ann.surface!r} != {text[ann.start:ann.end]!r}",
                    )
                )
    return violations
