import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_corpus
from xlproj.corpusio import (
    Annotation,
    Corpus,
    Document,
    load_corpus,
    parse_ann,
    parse_standoff,
    serialize_ann,
    validate,
    write_corpus,
)
from xlproj.errors import (
    CorpusIoError,
    DanglingNote,
    MalformedLine,
    OffsetOutOfRange,
    SurfaceMismatch,
)

DOC = Document("d1", "Le patient métastases hépatiques en évolution.", "fr")


def test_parse_t_line_with_note():
    """A T-line plus AnnotatorNotes yields one annotation with one code."""
    text = "Elle avait  métastases au foie."  # codepoints 12..22 read "métastases"
    doc = Document("d", text[:12] + "métastases" + text[22:], "fr")
    assert doc.text[12:22] == "métastases"
    ann_text = "T1\tMORFOLOGIA_NEOPLASIA 12 22\tmétastases\n#1\tAnnotatorNotes T1\t8000/6\n"
    anns = parse_ann(ann_text, doc)
    assert anns == [
        Annotation("T1", "MORFOLOGIA_NEOPLASIA", 12, 22, "métastases", (("ICD-O", "8000/6"),))
    ]


def test_parse_empty_file():
    assert parse_ann("", DOC) == []


def test_parse_offsets_are_codepoints_not_bytes():
    """Diacritics must not shift spans: offsets count Unicode scalars."""
    doc = Document("d", "présente des métastases", "fr")
    anns = parse_ann("T1\tX 13 23\tmétastases\n", doc)
    assert anns[0].surface == "métastases"


def test_parse_scheme_prefixed_code():
    doc = Document("d", "tumeur", "fr")
    anns = parse_ann("T1\tX 0 6\ttumeur\n#1\tAnnotatorNotes T1\tSNOMED:14799000\n", doc)
    assert anns[0].codes == (("SNOMED", "14799000"),)


def test_parse_discontinuous_span_becomes_covering_interval():
    doc = Document("d", "une tumeur très maligne ici", "fr")
    anns = parse_ann("T1\tX 4 10;16 23\ttumeur maligne\n", doc)
    assert (anns[0].start, anns[0].end) == (4, 23)
    assert anns[0].discontinuous
    assert anns[0].surface == doc.text[4:23]


def test_parse_errors():
    with pytest.raises(MalformedLine):
        parse_ann("T1\tonly-two-fields\n", DOC)
    with pytest.raises(OffsetOutOfRange):
        parse_ann("T1\tX 0 999\twhatever\n", DOC)
    with pytest.raises(SurfaceMismatch):
        parse_ann("T1\tX 0 2\txx\n", DOC)
    with pytest.raises(DanglingNote):
        parse_ann("#1\tAnnotatorNotes T9\t8000/6\n", DOC)


def test_unknown_line_kinds_round_trip():
    doc = Document("d", "tumeur maligne", "fr")
    text = "T1\tX 0 6\ttumeur\nR1\tCause Arg1:T1 Arg2:T1\n"
    anns, extras = parse_standoff(text, doc)
    assert extras == ["R1\tCause Arg1:T1 Arg2:T1"]
    assert serialize_ann(anns, extras) == text


def test_serialize_empty():
    assert serialize_ann([]) == ""


def test_serialize_two_codes_two_note_lines():
    ann = Annotation("T1", "X", 0, 6, "tumeur", (("ICD-O", "8000/6"), ("SNOMED", "123")))
    out = serialize_ann([ann])
    assert out == (
        "T1\tX 0 6\ttumeur\n"
        "#1\tAnnotatorNotes T1\t8000/6\n"
        "#2\tAnnotatorNotes T1\tSNOMED:123\n"
    )


def test_three_annotations_parse_serialize_parse_identity():
    """parse -> serialize -> parse is stable field-by-field."""
    doc = Document("d", "tumeur maligne avec métastases hépatiques", "fr")
    text = (
        "T1\tA 0 6\ttumeur\n"
        "T2\tB 7 14\tmaligne\n"
        "T3\tA 20 30\tmétastases\n"
        "#1\tAnnotatorNotes T3\t8000/6\n"
    )
    first = parse_ann(text, doc)
    second = parse_ann(serialize_ann(first), doc)
    assert first == second


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_property_generated_corpora(seed):
    """parse(serialize(X)) == X for generated annotation sets."""
    corpus = make_corpus(random.Random(seed), 1)
    doc = corpus.documents[0]
    anns = corpus.anns(doc.doc_id)
    assert parse_ann(serialize_ann(anns), doc) == anns


def test_load_corpus_empty_dir(tmp_path):
    corpus = load_corpus(str(tmp_path))
    assert corpus.documents == []


def test_load_corpus_txt_without_ann(tmp_path):
    (tmp_path / "a.txt").write_text("tumeur", encoding="utf-8")
    corpus = load_corpus(str(tmp_path))
    assert len(corpus.documents) == 1
    assert corpus.anns("a") == []


def test_load_corpus_orphan_ann_fails(tmp_path):
    (tmp_path / "a.ann").write_text("", encoding="utf-8")
    with pytest.raises(CorpusIoError):
        load_corpus(str(tmp_path))


def test_load_corpus_counts_match_line_count_oracle(tmp_path):
    """Total parsed annotations equal an independent T-line count."""
    rng = random.Random(7)
    corpus = make_corpus(rng, 3)
    write_corpus(corpus, str(tmp_path))
    # Oracle: count lines starting with "T" across all .ann files.
    t_lines = 0
    for path in tmp_path.glob("*.ann"):
        t_lines += sum(
            1 for line in path.read_text(encoding="utf-8").splitlines() if line.startswith("T")
        )
    loaded = load_corpus(str(tmp_path), "fr")
    assert len(loaded.documents) == 3
    assert loaded.total_annotations() == t_lines


def test_load_corpus_parse_error_names_document(tmp_path):
    (tmp_path / "bad.txt").write_text("abc", encoding="utf-8")
    (tmp_path / "bad.ann").write_text("T1\tX 0 99\tabc\n", encoding="utf-8")
    with pytest.raises(OffsetOutOfRange, match="bad.ann"):
        load_corpus(str(tmp_path))


def test_validate_fresh_corpus_is_clean():
    corpus = make_corpus(random.Random(1), 4)
    assert validate(corpus) == []


def test_validate_offset_out_of_range():
    doc = Document("d", "abc", "fr")
    corpus = Corpus([doc], {"d": [Annotation("T1", "X", 0, 99, "abc")]})
    kinds = [v.kind for v in validate(corpus)]
    assert kinds == ["offset_out_of_range"]


def test_validate_single_fault_injection():
    """Mutating one surface yields exactly one surface_mismatch violation."""
    corpus = make_corpus(random.Random(3), 2)
    doc_id = corpus.documents[0].doc_id
    anns = corpus.annotations[doc_id]
    bad = anns[0]
    anns[0] = Annotation(bad.ann_id, bad.label, bad.start, bad.end, bad.surface + "X", bad.codes)
    violations = validate(corpus)
    assert len(violations) == 1
    assert violations[0].kind == "surface_mismatch"
    assert violations[0].doc_id == doc_id
    assert violations[0].ann_id == bad.ann_id


def test_validate_duplicate_ann_id():
    doc = Document("d", "abcdef", "fr")
    anns = [Annotation("T1", "X", 0, 2, "ab"), Annotation("T1", "X", 3, 5, "de")]
    corpus = Corpus([doc], {"d": anns})
    assert [v.kind for v in validate(corpus)] == ["duplicate_ann_id"]
