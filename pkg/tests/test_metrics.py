import itertools
import random

import pytest

import fuzz
from corpusforge.corpus.model import DepArc, Document, EntityMention, RSTNode, Token
from corpusforge.metrics import (PRF, CorefInputError, MissingLayerError, SegmentationMismatchError,
                                 max_weight_assignment, score_attachment, score_coref, score_corpus,
                                 score_nested_entities, score_rst, score_tagging, score_tokenization)
from corpusforge.sentences import AlignmentError

TOL = 1e-12


def close(a, b):
    return abs(a - b) < TOL


# -- tokenization / tagging / attachment --------------------------------------------

def test_tokenization_identity():
    s = score_tokenization([(0, 2), (3, 5)], [(0, 2), (3, 5)])
    assert (s.precision, s.recall, s.f1) == (1, 1, 1)


def test_tokenization_one_boundary_off():
    s = score_tokenization([(0, 2), (3, 5), (6, 8)], [(0, 2), (3, 5), (6, 9)])
    assert close(s.precision, 2 / 3) and close(s.recall, 2 / 3) and close(s.f1, 2 / 3)


def test_tokenization_merged_span_scores_zero():
    s = score_tokenization([(0, 2), (2, 4)], [(0, 4)])
    assert (s.precision, s.recall) == (0, 0)
    b = score_tokenization([(0, 2), (2, 4)], [(0, 4)], mode="boundary")
    assert close(b.precision, 1) and close(b.recall, 2 / 3)
    with pytest.raises(ValueError):
        score_tokenization([], [], mode="chars")


def test_tagging():
    assert score_tagging(list("abcd"), list("abcd")).value == 1.0
    assert score_tagging(list("abcd"), list("abcx")).value == 0.75
    with pytest.raises(AlignmentError):
        score_tagging([], [])
    with pytest.raises(AlignmentError):
        score_tagging(["a"], ["a", "b"])


def test_attachment():
    gold = [DepArc(0, 1, "nsubj"), DepArc(1, None, "root"), DepArc(2, 1, "obj")]
    s = score_attachment(gold, gold)
    assert (s.uas, s.las) == (1, 1)
    s = score_attachment(gold, [(0, 1, "nsubj"), (1, None, "root"), (2, 1, "iobj")])
    assert s.uas == 1 and close(s.las, 2 / 3)
    s = score_attachment(gold, [(0, 2, "nsubj"), (1, 0, "root"), (2, None, "obj")])
    assert (s.uas, s.las) == (0, 0)
    with pytest.raises(AlignmentError):
        score_attachment(gold, gold[:2])


# -- coreference ----------------------------------------------------------------

def test_coref_fixture():
    s = score_coref([["a", "b", "c"]], [["a", "b"], ["c"]], keep_singletons=True)
    assert close(s.muc.precision, 1) and close(s.muc.recall, 1 / 2) and close(s.muc.f1, 2 / 3)
    assert close(s.b3.precision, 1) and close(s.b3.recall, 5 / 9) and close(s.b3.f1, 5 / 7)
    assert close(s.ceaf_e.precision, 0.4) and close(s.ceaf_e.recall, 0.8) and close(s.ceaf_e.f1, 8 / 15)
    assert abs(s.avg_f1 - 0.6381) < 1e-4


def test_coref_identity():
    chains = [["a", "b"], ["c", "d", "e"], ["f"]]
    s = score_coref(chains, chains)
    assert s.muc.f1 == s.b3.f1 == s.ceaf_e.f1 == s.avg_f1 == 1


def test_coref_swap_symmetry():
    rng = random.Random(8)
    for _ in range(200):
        key, resp = fuzz.coref_config(rng)
        a, b = score_coref(key, resp, keep_singletons=True), score_coref(resp, key, keep_singletons=True)
        for x, y in zip((a.muc, a.b3, a.ceaf_e), (b.muc, b.b3, b.ceaf_e)):
            assert close(x.precision, y.recall) and close(x.recall, y.precision) and close(x.f1, y.f1)


def test_coref_duplicate_mention():
    with pytest.raises(CorefInputError):
        score_coref([["a", "b"], ["b", "c"]], [["a", "b", "c"]])


def test_twinless_drop_flag():
    keep = score_coref([["a", "b", "x"]], [["a", "b"]])
    drop = score_coref([["a", "b", "x"]], [["a", "b"]], twinless="drop")
    assert keep.b3.recall < 1 and drop.b3.recall == 1
    with pytest.raises(ValueError):
        score_coref([], [], twinless="maybe")


def test_prf_empty_sides():
    assert PRF(0, 0, 0, 0).f1 == 1.0
    assert PRF(0, 0, 0, 3).precision == 0.0


# -- nested entities ------------------------------------------------------------

def test_nested_entities():
    gold = [EntityMention("g1", 1, 5, "organization"), EntityMention("g2", 2, 3, "person")]
    assert score_nested_entities(gold, gold).f1 == 1
    s = score_nested_entities(gold, [(2, 3, "person")])
    assert (s.precision, s.recall) == (1, 0.5)
    assert score_nested_entities(gold, [(2, 3, "place")]).precision == 0


# -- rst ------------------------------------------------------------------------

def three_edu_tree(nuc3="satellite", rel3="elaboration"):
    return RSTNode(1, 3, "root", "", [
        RSTNode(1, 2, "nucleus", "span", [RSTNode(1, 1, "nucleus", "joint"), RSTNode(2, 2, "nucleus", "joint")]),
        RSTNode(3, 3, nuc3, rel3),
    ])


def test_rst_identity():
    s = score_rst(three_edu_tree(), three_edu_tree())
    assert (s.span, s.nuclearity, s.relation) == (1, 1, 1)


def test_rst_one_flip():
    s = score_rst(three_edu_tree(), three_edu_tree(nuc3="nucleus"))
    assert (s.span, s.nuclearity, s.relation) == (1.0, 0.75, 1.0)


def test_rst_relabel():
    s = score_rst(three_edu_tree(), three_edu_tree(rel3="background"))
    assert (s.span, s.nuclearity, s.relation) == (1.0, 1.0, 0.75)


def test_rst_segmentation_mismatch():
    other = RSTNode(1, 2, "root", "", [RSTNode(1, 1, "nucleus", "joint"), RSTNode(2, 2, "nucleus", "joint")])
    with pytest.raises(SegmentationMismatchError):
        score_rst(three_edu_tree(), other)


# -- assignment -----------------------------------------------------------------

def brute_force(w):
    n, m = len(w), len(w[0])
    if n <= m:
        return max(sum(w[i][j] for i, j in enumerate(p)) for p in itertools.permutations(range(m), n))
    return max(sum(w[i][j] for j, i in enumerate(p)) for p in itertools.permutations(range(n), m))


def test_assignment_matches_permutations():
    rng = random.Random(5)
    for _ in range(300):
        n, m = rng.randint(1, 6), rng.randint(1, 6)
        w = [[rng.choice([0, 0.25, 0.5, 1, rng.random()]) for _ in range(m)] for _ in range(n)]
        total, pairs = max_weight_assignment(w)
        assert abs(total - brute_force(w)) < 1e-9
        assert len({i for i, _ in pairs}) == len({j for _, j in pairs}) == min(n, m)
    assert max_weight_assignment([]) == (0.0, [])
    with pytest.raises(ValueError):
        max_weight_assignment([[1, 2], [3]])


# -- corpus reports ---------------------------------------------------------------

def tagged(doc_id, tags):
    doc = Document(doc_id, "news", "t", " ".join("w" * len(tags)))
    doc.tokens = [Token(i, 2 * i, 2 * i + 1, "w", xpos=t) for i, t in enumerate(tags)]
    return doc


def test_score_corpus_micro_average():
    gold = {"a": tagged("a", ["NN", "VB"]), "b": tagged("b", ["NN"] * 8), "c": tagged("c", ["DT"])}
    pred = {"a": tagged("a", ["NN", "NN"]), "b": tagged("b", ["NN"] * 8), "z": tagged("z", ["DT"])}
    report = score_corpus("xpos", gold, pred)
    assert report["documents"]["a"]["accuracy"] == 0.5
    assert report["corpus"]["accuracy"] == 0.9
    assert report["missing_pred"] == ["c"] and report["missing_gold"] == ["z"]


def test_score_corpus_missing_layer():
    gold = {"a": tagged("a", ["NN"])}
    with pytest.raises(MissingLayerError):
        score_corpus("deps", gold, gold)
    with pytest.raises(ValueError):
        score_corpus("sentiment", gold, gold)
