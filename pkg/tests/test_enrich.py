import random

import pytest

from conftest import make_corpus
from xlproj.corpusio import Annotation, Corpus, Document
from xlproj.enrich import enrich_corpus, load_mapping
from xlproj.errors import MalformedMapping


def write_map(tmp_path, content, name="map.tsv"):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return str(path)


def test_load_empty_mapping(tmp_path):
    cmap = load_mapping(write_map(tmp_path, ""))
    assert cmap.entries == {} and cmap.size() == 0


def test_load_single_row_with_description(tmp_path):
    cmap = load_mapping(
        write_map(tmp_path, "8000/6\t14799000\tNeoplasm, metastatic (morphologic abnormality)\n")
    )
    assert cmap.targets("8000/6") == [
        ("14799000", "Neoplasm, metastatic (morphologic abnormality)")
    ]


def test_header_row_detected(tmp_path):
    cmap = load_mapping(write_map(tmp_path, "from_code\tto_code\tdescription\nA\tB\n"))
    assert cmap.size() == 1


def test_duplicate_row_deduplicated_with_warning(tmp_path):
    cmap = load_mapping(write_map(tmp_path, "A\tB\nA\tB\n"))
    assert cmap.size() == 1
    assert cmap.duplicate_rows == 1


def test_one_to_many_mapping(tmp_path):
    cmap = load_mapping(write_map(tmp_path, "A\tX\nA\tY\n"))
    assert [t for t, _ in cmap.targets("A")] == ["X", "Y"]


def test_malformed_mapping(tmp_path):
    with pytest.raises(MalformedMapping):
        load_mapping(write_map(tmp_path, "only-one-field\n"))
    with pytest.raises(MalformedMapping):
        load_mapping(write_map(tmp_path, "a\tb\tc\td\n"))


def corpus_with_codes(code_lists):
    doc = Document("d", "x" * 100, "fr")
    anns = [
        Annotation(f"T{i + 1}", "X", i * 10, i * 10 + 5, "x" * 5, tuple(codes))
        for i, codes in enumerate(code_lists)
    ]
    return Corpus([doc], {"d": anns})


def test_enrich_empty_map_is_noop(tmp_path):
    corpus = corpus_with_codes([[("ICD-O", "A")]])
    cmap = load_mapping(write_map(tmp_path, ""))
    enriched, added = enrich_corpus(corpus, cmap)
    assert added == 0
    assert enriched.annotations == corpus.annotations


def test_enrich_one_to_many_arithmetic(tmp_path):
    """2 annotations with code A, map A -> {X, Y}: 4 codes appended."""
    corpus = corpus_with_codes([[("ICD-O", "A")], [("ICD-O", "A")]])
    cmap = load_mapping(write_map(tmp_path, "A\tX\nA\tY\n"))
    before = sum(len(a.codes) for anns in corpus.annotations.values() for a in anns)
    enriched, added = enrich_corpus(corpus, cmap)
    after = sum(len(a.codes) for anns in enriched.annotations.values() for a in anns)
    assert added == 4
    assert after == before + added


def test_enrich_idempotent(tmp_path):
    corpus = corpus_with_codes([[("ICD-O", "A")], [("ICD-O", "B")], []])
    cmap = load_mapping(write_map(tmp_path, "A\tX\nB\tY\nB\tZ\n"))
    once, added_once = enrich_corpus(corpus, cmap)
    twice, added_twice = enrich_corpus(once, cmap)
    assert added_once == 3
    assert added_twice == 0
    assert twice.annotations == once.annotations


def test_enrich_preserves_texts_and_spans(tmp_path):
    rng = random.Random(19)
    corpus = make_corpus(rng, 4)
    cmap = load_mapping(write_map(tmp_path, "8000/6\t14799000\n8500/3\t1162814007\n"))
    enriched, _ = enrich_corpus(corpus, cmap)
    assert enriched.documents == corpus.documents
    for doc_id in corpus.annotations:
        for old, new in zip(corpus.annotations[doc_id], enriched.annotations[doc_id]):
            assert (old.start, old.end, old.label, old.surface) == (
                new.start, new.end, new.label, new.surface
            )
            assert new.codes[: len(old.codes)] == old.codes


def test_enrich_skips_existing_pairs(tmp_path):
    corpus = corpus_with_codes([[("ICD-O", "A"), ("SNOMED", "X")]])
    cmap = load_mapping(write_map(tmp_path, "A\tX\nA\tY\n"))
    enriched, added = enrich_corpus(corpus, cmap)
    assert added == 1
    assert enriched.annotations["d"][0].codes == (
        ("ICD-O", "A"), ("SNOMED", "X"), ("SNOMED", "Y"),
    )


def test_published_accounting_identity():
    """Documented accounting: existing + newly mapped = final code total."""
    existing_snomed = 5132
    added_by_mapping = 15457
    assert existing_snomed + added_by_mapping == 20589
