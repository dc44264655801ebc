"""Detection of badly projected annotations and the TSV review report.

Each flag encodes one error pattern observable on a projection record; the
corpus-level pass adds duplicate-span and singleton-surface flags. Severity
is per flag: mechanically wrong projections are "false", the rest need a
human eye and are "suspicious".
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .corpusio import Annotation
from .errors import MalformedReport
from .project import ProjectionRecord
from .segment import tokenize_text

# Flag codes (closed set).
DUPLICATE = "DUPLICATE"
ADDED_PUNCT = "ADDED_PUNCT"
TOO_SHORT = "TOO_SHORT"
BAD_BOUNDARY_WORD = "BAD_BOUNDARY_WORD"
NO_ALNUM = "NO_ALNUM"
LENGTH_INFLATION = "LENGTH_INFLATION"
SINGLETON = "SINGLETON"
EMPTY_PROJECTION = "EMPTY_PROJECTION"
CROSS_BEAD_GLUE = "CROSS_BEAD_GLUE"

ALL_FLAGS = (
    DUPLICATE, ADDED_PUNCT, TOO_SHORT, BAD_BOUNDARY_WORD, NO_ALNUM,
    LENGTH_INFLATION, SINGLETON, EMPTY_PROJECTION, CROSS_BEAD_GLUE,
)

# false: mechanically wrong; suspicious: needs human judgment.
SEVERITY = {
    DUPLICATE: "false",
    NO_ALNUM: "false",
    EMPTY_PROJECTION: "false",
    ADDED_PUNCT: "suspicious",
    TOO_SHORT: "suspicious",
    BAD_BOUNDARY_WORD: "suspicious",
    LENGTH_INFLATION: "suspicious",
    SINGLETON: "suspicious",
    CROSS_BEAD_GLUE: "suspicious",
}

_SEVERITY_RANK = {"clean": 0, "suspicious": 1, "false": 2}

DEFAULT_STOPLIST = frozenset(
    "et ou de du des le la les l' d' un une à en que qui au aux".split()
)

REPORT_COLUMNS = (
    "doc_id", "src_ann_id", "src_label", "src_start", "src_end", "src_surface",
    "tgt_start", "tgt_end", "tgt_surface", "codes", "mean_edge_score",
    "glued", "cross_bead", "flags", "severity",
)


@dataclass(frozen=True)
class AuditConfig:
    stoplist: frozenset[str] = DEFAULT_STOPLIST
    min_target_len: int = 3
    inflation_abs: int = 2
    inflation_ratio: float = 1.5

    def __post_init__(self):
        if self.min_target_len <= 0 or self.inflation_abs <= 0 or self.inflation_ratio <= 0:
            raise ValueError("audit thresholds must be positive")


def load_stoplist(path: str) -> frozenset[str]:
    """Load a stoplist file: one lowercase word per line."""
    with open(path, encoding="utf-8") as f:
        return frozenset(w.strip().lower() for w in f if w.strip())


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _word_count(text: str) -> int:
    return sum(1 for t in tokenize_text(text) if any(c.isalnum() for c in t.surface))


def audit_record(rec: ProjectionRecord, cfg: AuditConfig | None = None) -> list[str]:
    """Flags whose predicates hold on a single record (no corpus context)."""
    cfg = cfg or AuditConfig()
    if not rec.has_projection:
        return [EMPTY_PROJECTION]
    flags = []
    src = rec.src_ann.surface
    tgt = rec.tgt_surface or ""

    src_punct = {c for c in src if _is_punct(c)}
    if any(_is_punct(c) and c not in src_punct for c in tgt):
        flags.append(ADDED_PUNCT)
    if len(tgt) < cfg.min_target_len <= len(src):
        flags.append(TOO_SHORT)
    tokens = tokenize_text(tgt)
    if tokens and (
        tokens[0].surface.lower() in cfg.stoplist
        or tokens[-1].surface.lower() in cfg.stoplist
    ):
        flags.append(BAD_BOUNDARY_WORD)
    if not any(c.isalnum() for c in tgt):
        flags.append(NO_ALNUM)
    src_words = _word_count(src)
    tgt_words = _word_count(tgt)
    if tgt_words >= src_words + cfg.inflation_abs or (
        src_words > 0 and tgt_words / src_words >= cfg.inflation_ratio
    ):
        flags.append(LENGTH_INFLATION)
    if rec.cross_bead:
        flags.append(CROSS_BEAD_GLUE)
    return flags


def record_severity(flags: list[str]) -> str:
    return max(("clean", *(SEVERITY[f] for f in flags)), key=_SEVERITY_RANK.__getitem__)


def audit_corpus(
    records: list[ProjectionRecord], cfg: AuditConfig | None = None
) -> list[ProjectionRecord]:
    """Audit records in place: per-record flags plus singleton/duplicate passes.

    SINGLETON marks a case-folded target surface occurring exactly once in the
    whole corpus; DUPLICATE marks records sharing (doc_id, target span).
    """
    cfg = cfg or AuditConfig()
    surface_freq: dict[str, int] = {}
    span_freq: dict[tuple, int] = {}
    for rec in records:
        if rec.has_projection:
            key = rec.tgt_surface.casefold()
            surface_freq[key] = surface_freq.get(key, 0) + 1
            span = (rec.doc_id, rec.tgt_start, rec.tgt_end)
            span_freq[span] = span_freq.get(span, 0) + 1
    for rec in records:
        flags = audit_record(rec, cfg)
        if rec.has_projection:
            if surface_freq[rec.tgt_surface.casefold()] == 1:
                flags.append(SINGLETON)
            if span_freq[(rec.doc_id, rec.tgt_start, rec.tgt_end)] > 1:
                flags.append(DUPLICATE)
        rec.flags = flags
        rec.severity = record_severity(flags)
    return records


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")
    )


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _format_codes(codes: tuple[tuple[str, str], ...]) -> str:
    return ";".join(f"{scheme}:{code}" for scheme, code in codes)


def _parse_codes(text: str) -> tuple[tuple[str, str], ...]:
    if not text:
        return ()
    pairs = []
    for item in text.split(";"):
        scheme, sep, code = item.partition(":")
        if not sep:
            raise MalformedReport(f"bad code entry {item!r}")
        pairs.append((scheme, code))
    return tuple(pairs)


def write_report(records: list[ProjectionRecord]) -> str:
    """Serialize audited records to the review TSV (header + one row each)."""
    lines = ["\t".join(REPORT_COLUMNS)]
    for rec in records:
        ann = rec.src_ann
        row = [
            _escape(rec.doc_id),
            _escape(ann.ann_id),
            _escape(ann.label),
            str(ann.start),
            str(ann.end),
            _escape(ann.surface),
            "" if rec.tgt_start is None else str(rec.tgt_start),
            "" if rec.tgt_end is None else str(rec.tgt_end),
            "" if rec.tgt_surface is None else _escape(rec.tgt_surface),
            _escape(_format_codes(ann.codes)),
            repr(rec.mean_edge_score),
            "true" if rec.glued else "false",
            "true" if rec.cross_bead else "false",
            ",".join(rec.flags),
            rec.severity,
        ]
        lines.append("\t".join(row))
    return "".join(line + "\n" for line in lines)


def read_report(text: str) -> list[ProjectionRecord]:
    """Parse a review TSV back into projection records (write's inverse)."""
    lines = text.split("\n")
    if not lines or lines[0] != "\t".join(REPORT_COLUMNS):
        raise MalformedReport("missing or wrong header row")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != len(REPORT_COLUMNS):
            raise MalformedReport(
                f"line {lineno}: expected {len(REPORT_COLUMNS)} columns, got {len(fields)}"
            )
        (doc_id, ann_id, label, s_start, s_end, s_surface, t_start, t_end,
         t_surface, codes, score, glued, cross_bead, flags, severity) = fields
        try:
            ann = Annotation(
                _unescape(ann_id), _unescape(label), int(s_start), int(s_end),
                _unescape(s_surface), _parse_codes(_unescape(codes)),
            )
            has_tgt = t_start != ""
            rec = ProjectionRecord(
                doc_id=_unescape(doc_id),
                src_ann=ann,
                tgt_start=int(t_start) if has_tgt else None,
                tgt_end=int(t_end) if has_tgt else None,
                tgt_surface=_unescape(t_surface) if has_tgt else None,
                glued=glued == "true",
                cross_bead=cross_bead == "true",
                mean_edge_score=float(score),
                flags=flags.split(",") if flags else [],
                severity=severity,
            )
        except ValueError as exc:
            raise MalformedReport(f"line {lineno}: {exc}") from exc
        for flag in rec.flags:
            if flag not in ALL_FLAGS:
                raise MalformedReport(f"line {lineno}: unknown flag {flag!r}")
        if rec.severity not in _SEVERITY_RANK:
            raise MalformedReport(f"line {lineno}: unknown severity {rec.severity!r}")
        records.append(rec)
    return records


def attribute_lines(records: list[ProjectionRecord], emitted_ids: dict[int, str]) -> list[str]:
    """Brat attribute lines tagging emitted annotations false/suspicious.

    ``emitted_ids`` maps record index to the emitted T-id. Clean records get
    no attribute; the red/orange display in Brat comes from these tags.
    """
    lines = []
    n = 0
    for idx, rec in enumerate(records):
        if idx not in emitted_ids or rec.severity == "clean":
            continue
        n += 1
        tag = "False" if rec.severity == "false" else "Suspicious"
        lines.append(f"A{n}\t{tag} {emitted_ids[idx]}")
    return lines
