import io

import pytest

from corpusforge.corpus.model import EDU, MarkupSpan, RSTNode, Sentence
from corpusforge.discourse import (constrain_segmentation, edu_boundaries, featurize_edus, read_boundaries,
                                   validate_rst_tree)
from corpusforge.sentences import AlignmentError, split_sentences
from corpusforge.tokenizer import tokenize


def spans(edus):
    return [(e.first_token, e.last_token) for e in edus]


def test_split_at_sentence_start():
    toks = tokenize("It rained . We left .")
    sents = [Sentence(0, 2), Sentence(3, 5)]
    assert spans(constrain_segmentation([0], sents, [], toks)) == [(0, 2), (3, 5)]


def test_heading_split_from_following_text():
    text = "Results\n\nThe test passed"
    markup = [MarkupSpan("heading", 0, 7), MarkupSpan("paragraph", 9, len(text))]
    toks = tokenize(text, markup)
    # one sentence on purpose, so only the heading edge forces the split
    edus = constrain_segmentation([0], [Sentence(0, 3)], markup, toks)
    assert spans(edus) == [(0, 0), (1, 3)]


def test_aligned_candidates_unchanged():
    toks = tokenize("a b c . d e .")
    sents = split_sentences(toks)
    edus = constrain_segmentation([0, 2, 4], sents, [], toks)
    assert edu_boundaries(edus) == [0, 2, 4]
    assert [e.id for e in edus] == [1, 2, 3]


def test_out_of_range_candidate():
    toks = tokenize("a b")
    with pytest.raises(ValueError):
        constrain_segmentation([5], [Sentence(0, 1)], [], toks)


def test_empty_document():
    assert constrain_segmentation([], [], [], []) == []


def test_features_for_heading_at_start():
    text = "Results\n\nThe test passed today"
    markup = [MarkupSpan("heading", 0, 7), MarkupSpan("paragraph", 9, len(text))]
    toks = tokenize(text, markup)
    sents = [Sentence(0, 0, "frag"), Sentence(1, 4, "decl")]
    edus = constrain_segmentation([], sents, markup, toks)
    table = featurize_edus(edus, markup, "academic", sents, toks)
    first = dict(zip(table.columns, table.rows[0]))
    assert first["is_heading"] == 1 and first["starts_paragraph"] == 1 and first["decile"] == 0
    assert first["genre_academic"] == 1 and first["stype_frag"] == 1 and first["len_1-3"] == 1
    second = dict(zip(table.columns, table.rows[1]))
    assert second["is_heading"] == 0 and second["ends_paragraph"] == 1 and second["decile"] == 5
    assert "sentiment" not in table.columns


def test_external_columns():
    toks = tokenize("a b . c d .")
    sents = split_sentences(toks)
    edus = constrain_segmentation([], sents, [], toks)
    table = featurize_edus(edus, [], "news", sents, toks, {"sentiment": [0.5, -0.25]})
    assert table.column("sentiment") == [0.5, -0.25]
    buf = io.StringIO()
    table.write_tsv(buf)
    assert buf.getvalue().splitlines()[2].endswith("\t-0.25")
    with pytest.raises(AlignmentError):
        featurize_edus(edus, [], "news", sents, toks, {"sentiment": [0.1]})


def test_read_boundaries():
    assert read_boundaries(io.StringIO("0\n4\n\n9\n")) == [0, 4, 9]


def test_validate_rst_tree():
    edus = [EDU(1, 0, 1), EDU(2, 2, 3)]
    good = RSTNode(1, 2, "root", "", [RSTNode(1, 1, "nucleus", "span"), RSTNode(2, 2, "satellite", "elaboration")])
    assert validate_rst_tree(good, edus) == []
    bad = RSTNode(1, 2, "root", "", [RSTNode(1, 1, "nucleus", "span"), RSTNode(2, 2, "satellite", "joint")])
    assert [v.rule for v in validate_rst_tree(bad, edus)] == ["rst.relation_class"]
