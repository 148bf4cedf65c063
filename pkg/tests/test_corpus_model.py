import io
import json
import random

import pytest

import fuzz
from corpusforge.corpus.blocks import parse_blocks
from corpusforge.corpus.io import (chains_from_mentions, document_from_dict, document_to_dict,
                                   read_entity_layer, read_manifest, read_token_layer, write_entity_layer,
                                   write_manifest, write_token_layer)
from corpusforge.corpus.model import EDU, Document, EntityMention, Genre, MarkupSpan, RSTNode, Sentence
from corpusforge.corpus.rst import RSTFormatError, check_tree, format_tree, parse_tree
from corpusforge.corpus.standoff import (CorruptBundleError, HashMismatchError, StandoffBundle,
                                         apply_lemma_edit, lemma_edit, rehydrate, text_digest, to_standoff)
from corpusforge.corpus.validate import validate_document
from corpusforge.corpus.validation import InvalidDocumentError
from corpusforge.tokenizer import tokenize


def ten_token_doc():
    text = "Anna saw the old mill by the river ."
    doc = Document("d1", "news", "test", text + " Yes", [MarkupSpan("paragraph", 0, len(text) + 4)])
    doc.tokens = tokenize(doc.raw_text, doc.markup)
    doc.sentences = [Sentence(0, 8, "decl"), Sentence(9, 9, "intj")]
    return doc


def rules(report):
    return [v.rule for v in report]


def test_valid_ten_token_doc_has_empty_report():
    doc = ten_token_doc()
    assert len(doc.tokens) == 10
    assert rules(validate_document(doc)) == []


def test_token_past_text_end():
    doc = ten_token_doc()
    doc.tokens[-1].end = len(doc.raw_text) + 3
    assert rules(validate_document(doc)) == ["token.bounds"]


def test_edu_spanning_two_sentences():
    doc = ten_token_doc()
    doc.edus = [EDU(1, 0, 4), EDU(2, 5, 9)]
    assert rules(validate_document(doc)) == ["edu.sentence_bound"]


def test_validation_is_pure():
    rng = random.Random(3)
    doc = fuzz.annotated_doc(rng)
    doc.sentences[0].stype = "bogus"
    assert validate_document(doc) == validate_document(doc)


def test_genre_enum():
    assert Document("x", "fiction", "", "").genre is Genre.FICTION
    with pytest.raises(ValueError):
        Document("x", "poetry", "", "")


# -- stand-off ------------------------------------------------------------------

def test_standoff_digest_and_round_trip():
    doc = fuzz.annotated_doc(random.Random(1))
    bundle = to_standoff(doc)
    assert bundle.text_hash == text_digest(doc.raw_text)
    assert rehydrate(bundle, doc.raw_text) == doc


def test_standoff_edited_text():
    doc = fuzz.annotated_doc(random.Random(2), "abc")
    bundle = to_standoff(doc)
    with pytest.raises(HashMismatchError) as err:
        rehydrate(bundle, doc.raw_text + " ")
    assert "abc" in str(err.value)


def test_standoff_rejects_invalid_document():
    doc = ten_token_doc()
    doc.tokens[0].end = 999
    with pytest.raises(InvalidDocumentError):
        to_standoff(doc)


def test_standoff_out_of_bounds_offset():
    doc = ten_token_doc()
    data = json.loads(to_standoff(doc).to_json())
    data["tokens"][0]["end"] = 10_000
    bundle = StandoffBundle.from_json(json.dumps(data))
    with pytest.raises(CorruptBundleError):
        rehydrate(bundle, doc.raw_text)


def test_standoff_size_independent_of_text():
    a = Document("a", "forum", "s", "abc defg hi.", [MarkupSpan("paragraph", 0, 12)])
    b = Document("a", "forum", "s", "xyz qrst uv.", [MarkupSpan("paragraph", 0, 12)])
    for d in (a, b):
        d.tokens = tokenize(d.raw_text, d.markup)
    ja, jb = json.loads(to_standoff(a).to_json()), json.loads(to_standoff(b).to_json())
    ja.pop("text_hash")
    jb.pop("text_hash")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_standoff_wrong_format():
    with pytest.raises(CorruptBundleError):
        StandoffBundle.from_json('{"format": "other"}')


@pytest.mark.parametrize("form,lemma", [("walked", "walk"), ("Went", "go"), ("The", "the"),
                                        ("mice", "mouse"), ("x", None), ("ran", "ran")])
def test_lemma_edit_round_trip(form, lemma):
    assert apply_lemma_edit(form, lemma_edit(form, lemma)) == lemma


def test_lemma_edit_hides_form():
    edit = lemma_edit("Parliament", "parliament")
    assert "arliament" not in json.dumps(edit)


# -- io -------------------------------------------------------------------------

def test_document_dict_round_trip():
    doc = fuzz.annotated_doc(random.Random(4))
    assert document_from_dict(json.loads(json.dumps(document_to_dict(doc)))) == doc


def test_token_layer_round_trip():
    doc = fuzz.annotated_doc(random.Random(5))
    buf = io.StringIO()
    write_token_layer(doc, buf)
    back = read_token_layer(io.StringIO(buf.getvalue()), doc.raw_text)
    assert back.tokens == doc.tokens
    assert back.sentences == doc.sentences
    assert sorted(back.arcs, key=lambda a: a.dependent) == sorted(doc.arcs, key=lambda a: a.dependent)
    assert back.markup == doc.markup


def test_entity_layer_round_trip():
    ms = [EntityMention("m1", 0, 1, "person", "c1"), EntityMention("m2", 3, 3, "place", None),
          EntityMention("m3", 5, 5, "person", "c1")]
    buf = io.StringIO()
    write_entity_layer(ms, buf)
    back, chains = read_entity_layer(io.StringIO(buf.getvalue()))
    assert back == ms
    assert [(c.id, c.mentions) for c in chains] == [("c1", ["m1", "m3"])]


def test_chains_in_text_order():
    ms = [EntityMention("m1", 4, 4, "person", "b"), EntityMention("m2", 0, 0, "person", "a"),
          EntityMention("m3", 2, 2, "person", "b")]
    assert [(c.id, c.mentions) for c in chains_from_mentions(ms)] == [("a", ["m2"]), ("b", ["m3", "m1"])]


def test_manifest_paths_resolve(tmp_path):
    path = tmp_path / "m.jsonl"
    write_manifest([{"id": "a", "genre": "news", "path": "src/a.txt"}], str(path))
    (entry,) = read_manifest(str(path))
    assert entry["path"] == str(tmp_path / "src" / "a.txt")


# -- rst ------------------------------------------------------------------------

def figure_tree():
    # background satellite, then a joint of two EDUs under an elaboration
    return RSTNode(1, 4, "root", "", [
        RSTNode(1, 1, "satellite", "background"),
        RSTNode(2, 4, "nucleus", "span", [
            RSTNode(2, 3, "nucleus", "span", [
                RSTNode(2, 2, "nucleus", "joint"),
                RSTNode(3, 3, "nucleus", "joint"),
            ]),
            RSTNode(4, 4, "satellite", "elaboration"),
        ]),
    ])


def edus(n):
    return [EDU(i, i - 1, i - 1) for i in range(1, n + 1)]


def test_valid_tree():
    assert check_tree(figure_tree(), edus(4)) == []


def test_tiling_gap():
    tree = RSTNode(1, 5, "root", "", [RSTNode(1, 2, "nucleus", "span", [RSTNode(1, 1, "nucleus", "joint"),
                                                                          RSTNode(2, 2, "nucleus", "joint")]),
                                      RSTNode(4, 5, "satellite", "elaboration",
                                              [RSTNode(4, 4, "nucleus", "joint"), RSTNode(5, 5, "nucleus", "joint")])])
    assert "rst.tiling_gap" in rules(check_tree(tree, edus(5)))


def test_satellite_only_node():
    tree = RSTNode(1, 2, "root", "", [RSTNode(1, 1, "satellite", "background"),
                                      RSTNode(2, 2, "satellite", "elaboration")])
    assert "rst.no_nucleus" in rules(check_tree(tree, edus(2)))


def test_tree_text_round_trip():
    tree = figure_tree()
    assert parse_tree(format_tree(tree)) == tree


def test_tree_parse_error():
    with pytest.raises(RSTFormatError):
        parse_tree("(1-2 R")


# -- blocks ---------------------------------------------------------------------

def test_parse_blocks():
    text, markup = parse_blocks("= Title\n\nSome **bold** text.\n\n@ann: hi there\n\n! A caption")
    assert text == "Title\n\nSome bold text.\n\nhi there\n\nA caption"
    kinds = [(m.kind, text[m.start:m.end]) for m in markup]
    assert ("heading", "Title") in kinds
    assert ("bold", "bold") in kinds
    assert ("speaker", "hi there") in kinds
    assert ("caption", "A caption") in kinds
