"""Command-line orchestration of the projection workflow.

Subcommands: project, audit, evaluate, stats, enrich, align-debug.
Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.
Diagnostics go to stderr; data goes to declared files or stdout. Output
files are written atomically so a failed run leaves nothing truncated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import audit as audit_mod
from . import corpusio, enrich, evalstats, project
from .config import load_config
from .embed import make_backend
from .errors import (
    BackendUnavailable,
    BatchTooLarge,
    ConfigError,
    ProtocolError,
    XlprojError,
)
from .segment import split_sentences

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3

_BACKEND_ERRORS = (BackendUnavailable, ProtocolError, BatchTooLarge)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; our usage code is 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _require_dir(path: str, what: str) -> str:
    if not os.path.isdir(path):
        raise corpusio.CorpusIoError(f"{what} directory not found: {path}")
    return path


def _pipeline_config(args):
    return load_config(
        getattr(args, "config", None), os.environ.get("XLPROJ_ENDPOINT") or None
    )


def _emitted_ids_by_doc(records):
    """Per-document mapping of record index -> emitted T-id."""
    grouped: dict[str, list] = {}
    for rec in records:
        grouped.setdefault(rec.doc_id, []).append(rec)
    ids: dict[str, dict[int, str]] = {}
    for doc_id, recs in grouped.items():
        mapping = {}
        n = 0
        for idx, rec in enumerate(recs):
            if rec.has_projection:
                n += 1
                mapping[idx] = f"T{n}"
        ids[doc_id] = mapping
    return grouped, ids


def cmd_project(args) -> int:
    cfg = _pipeline_config(args)
    backend = make_backend(cfg.embed)
    src = corpusio.load_corpus(
        _require_dir(args.src, "source"), default_scheme=cfg.default_scheme
    )
    tgt_texts = corpusio.load_corpus(_require_dir(args.tgt_text, "target text"))
    out_corpus, records, summary = project.project_corpus(
        src, tgt_texts, backend, cfg.align, cfg.min_edge_score,
        cfg.abbreviations, jobs=args.jobs,
    )
    audit_mod.audit_corpus(records, cfg.audit)
    grouped, ids = _emitted_ids_by_doc(records)
    for doc_id, recs in grouped.items():
        out_corpus.extra_lines[doc_id] = audit_mod.attribute_lines(recs, ids[doc_id])
    corpusio.write_corpus(out_corpus, args.out, cfg.default_scheme)
    corpusio.atomic_write(args.report, audit_mod.write_report(records))
    print(
        f"projected {summary.annotations_out}/{summary.annotations_in} annotations "
        f"across {summary.documents} documents "
        f"({summary.empty_projections} empty, "
        f"{len(summary.missing_documents)} target docs missing)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_audit(args) -> int:
    cfg = _pipeline_config(args)
    with open(args.report, encoding="utf-8") as f:
        records = audit_mod.read_report(f.read())
    audit_mod.audit_corpus(records, cfg.audit)
    corpus = corpusio.load_corpus(
        _require_dir(args.corpus, "corpus"), default_scheme=cfg.default_scheme
    )
    grouped, ids = _emitted_ids_by_doc(records)
    for doc_id, recs in grouped.items():
        if doc_id not in corpus.annotations:
            continue
        corpus.extra_lines[doc_id] = audit_mod.attribute_lines(recs, ids[doc_id])
    corpusio.write_corpus(corpus, args.corpus, cfg.default_scheme)
    corpusio.atomic_write(args.report, audit_mod.write_report(records))
    flagged = sum(1 for r in records if r.severity != "clean")
    print(f"audited {len(records)} records, {flagged} flagged", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _pipeline_config(args)
    gold = corpusio.load_corpus(_require_dir(args.gold, "gold"))
    system = corpusio.load_corpus(_require_dir(args.system, "system"))
    total, per_doc = evalstats.match_corpora(gold, system, cfg.label_sensitive)
    metrics = evalstats.compute_metrics(total)
    payload = {
        "counts": {
            "correct": total.correct,
            "partial": total.partial,
            "missing": total.missing,
            "spurious": total.spurious,
        }
    }
    if not args.strict_only:
        payload["relaxed"] = {
            "p": metrics.precision_relaxed,
            "r": metrics.recall_relaxed,
            "f1": metrics.f1_relaxed,
        }
    if not args.relaxed_only:
        payload["strict"] = {
            "p": metrics.precision_strict,
            "r": metrics.recall_strict,
            "f1": metrics.f1_strict,
        }
    corpusio.atomic_write(args.out, json.dumps(payload, indent=2) + "\n")
    tsv_lines = ["doc_id\tcorrect\tpartial\tmissing\tspurious"]
    for doc_id in sorted(per_doc):
        c = per_doc[doc_id]
        tsv_lines.append(f"{doc_id}\t{c.correct}\t{c.partial}\t{c.missing}\t{c.spurious}")
    corpusio.atomic_write(args.out + ".by-doc.tsv", "".join(l + "\n" for l in tsv_lines))
    return EXIT_OK


def cmd_stats(args) -> int:
    cfg = _pipeline_config(args)
    corpus = corpusio.load_corpus(
        _require_dir(args.corpus, "corpus"), default_scheme=cfg.default_scheme
    )
    table = evalstats.corpus_stats(corpus, args.scheme, args.top)
    cmap = enrich.load_mapping(args.map, args.scheme) if args.map else None
    print("code\tdescription\tcount\tmost_frequent")
    for row in table.rows:
        desc = ""
        if cmap is not None:
            targets = cmap.targets(row.code)
            desc = targets[0][1] if targets else ""
        print(f"{row.code}\t{desc}\t{row.count}\t{row.most_frequent_surface}")
    print(
        f"total entities: {table.total_entities}, total codes: {table.total_codes}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_enrich(args) -> int:
    cfg = _pipeline_config(args)
    corpus = corpusio.load_corpus(
        _require_dir(args.corpus, "corpus"), default_scheme=cfg.default_scheme
    )
    cmap = enrich.load_mapping(args.map)
    enriched, added = enrich.enrich_corpus(corpus, cmap)
    corpusio.write_corpus(enriched, args.out, cfg.default_scheme)
    print(f"added {added} codes ({cmap.duplicate_rows} duplicate mapping rows)", file=sys.stderr)
    return EXIT_OK


def cmd_align_debug(args) -> int:
    cfg = _pipeline_config(args)
    backend = make_backend(cfg.embed)

    def read_doc(path):
        with open(path, encoding="utf-8") as f:
            return corpusio.Document(os.path.splitext(os.path.basename(path))[0], f.read())

    src_doc = read_doc(args.src)
    tgt_doc = read_doc(args.tgt)
    src_sents = split_sentences(src_doc, cfg.abbreviations)
    tgt_sents = split_sentences(tgt_doc, cfg.abbreviations)
    src_vecs = backend.embed_sentences([src_doc.text[s.start : s.end] for s in src_sents])
    tgt_vecs = backend.embed_sentences([tgt_doc.text[s.start : s.end] for s in tgt_sents])
    from .sentalign import align_sentences

    beads = align_sentences(src_vecs, tgt_vecs, cfg.align)
    print("doc_id\tsrc_range\ttgt_range\tscore")
    for bead in beads:
        print(
            f"{src_doc.doc_id}\t{bead.src_start}..{bead.src_end}"
            f"\t{bead.tgt_start}..{bead.tgt_end}\t{bead.score:.4f}"
        )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="xlproj", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key/value YAML config file")

    p = sub.add_parser("project", help="project annotations onto translated texts")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt-text", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    add_common(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("audit", help="re-audit a report and retag the corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--report", required=True)
    add_common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("evaluate", help="score a system corpus against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--out", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict-only", action="store_true")
    group.add_argument("--relaxed-only", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="concept frequency table for one scheme")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--map", help="optional mapping TSV for descriptions")
    add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("enrich", help="add mapped terminology codes")
    p.add_argument("--corpus", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("align-debug", help="dump sentence beads for one file pair")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    add_common(p)
    p.set_defaults(func=cmd_align_debug)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _BACKEND_ERRORS as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (XlprojError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
