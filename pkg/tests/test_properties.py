"""Property tests for the invariants each module promises."""

import random

from hypothesis import given
from hypothesis import strategies as st

import fuzz
import oracles
from corpusforge.acquisition import (NoAnchorError, NoRootError, ThreadNode, TooShortError, UnreachableSizeError, apply_snippet,
                                     count_words, extract_snippet, sample_thread, screen_forum)
from corpusforge.corpus.model import SENTENCE_TYPES, CorefChain, EntityMention
from corpusforge.corpus.rst import check_tree
from corpusforge.corpus.standoff import rehydrate, to_standoff
from corpusforge.corpus.validate import validate_document
from corpusforge.discourse import constrain_segmentation, edu_boundaries
from corpusforge.ensemble import BasePredictions, majority_vote
from corpusforge.entities import NerPrediction, drop_singletons, harmonize_chain_types, inject_types
from corpusforge.metrics import (score_attachment, score_coref, score_nested_entities, score_rst,
                                 score_tokenization)
from corpusforge.sentences import classify_sentence_type, forced_boundaries, split_sentences
from corpusforge.tokenizer import apply_rules, load_rules, reconstruct, tokenize

seeds = st.integers(0, 2**32 - 1)
RULES = load_rules()


# -- tokenizer ------------------------------------------------------------------

@given(st.text(max_size=200))
def test_reconstruction_on_arbitrary_text(text):
    toks = tokenize(text)
    assert reconstruct(text, toks) == text
    assert all(t.end > t.start for t in toks)
    assert all(a.end <= b.start for a, b in zip(toks, toks[1:]))


@given(seeds, st.sampled_from(["travel", "news"]))
def test_rules_idempotent(seed, genre):
    text = fuzz.random_text(random.Random(seed))
    once = apply_rules(tokenize(text), RULES, genre=genre)
    assert apply_rules(once, RULES, genre=genre) == once
    assert reconstruct(text, once) == text


# -- corpus model ---------------------------------------------------------------

@given(seeds)
def test_standoff_round_trip(seed):
    doc = fuzz.annotated_doc(random.Random(seed))
    assert rehydrate(to_standoff(doc), doc.raw_text) == doc


@given(seeds)
def test_validation_pure_and_clean_on_generated_docs(seed):
    doc = fuzz.annotated_doc(random.Random(seed))
    first = validate_document(doc)
    assert first == [] and validate_document(doc) == first


@given(seeds)
def test_rst_leaves_match_edus(seed):
    doc = fuzz.annotated_doc(random.Random(seed))
    leaves = [n for n in doc.rst.iter_nodes() if not n.children]
    assert [n.span for n in leaves] == [(e.id, e.id) for e in doc.edus]
    assert check_tree(doc.rst, doc.edus) == []


# -- sentences --------------------------------------------------------------------

@given(seeds)
def test_sentences_respect_markup(seed):
    doc = fuzz.paragraphs_doc(random.Random(seed))
    toks = tokenize(doc.raw_text, doc.markup)
    sents = split_sentences(toks, markup=doc.markup)
    starts = {s.first_token for s in sents}
    assert forced_boundaries(toks, doc.markup) <= starts
    assert [s.first_token for s in sents[1:]] == [s.last_token + 1 for s in sents[:-1]]


@given(st.lists(st.tuples(st.sampled_from(fuzz.WORDS + ("?", "!", ".", "to", "because")),
                          st.sampled_from(["NN", "VB", "VBZ", "WRB", "UH", ".", "TO", "IN", None])),
                max_size=8))
def test_classification_total(pairs):
    forms, tags = [p[0] for p in pairs], [p[1] for p in pairs]
    assert classify_sentence_type(forms, tags) in SENTENCE_TYPES


# -- acquisition ------------------------------------------------------------------

@given(seeds, st.integers(0, 1000))
def test_snippet_bounds(seed, pick):
    rng = random.Random(seed)
    doc = fuzz.paragraphs_doc(rng, n_blocks=rng.randint(2, 30))
    try:
        snip = extract_snippet(doc, pick, min_words=20, cap_words=60)
    except (TooShortError, NoAnchorError):
        return
    sub = apply_snippet(doc, snip)
    assert sub.markup[-1].kind != "heading"
    total = count_words(doc.raw_text, doc.markup, 0, len(doc.raw_text))
    if total > 60:
        largest = max(count_words(sub.raw_text, sub.markup, m.start, m.end) for m in sub.markup)
        assert 20 <= snip.word_count <= 60 + largest
    assert extract_snippet(doc, pick, min_words=20, cap_words=60) == snip


@given(st.lists(st.sampled_from(["word", "https://a.org", "x@y.org", "www.b.com", "more"]), max_size=60),
       st.randoms(use_true_random=False))
def test_forum_screen_order_independent(tokens, rnd):
    shuffled = list(tokens)
    rnd.shuffle(shuffled)
    a = screen_forum(ThreadNode("t", "u", " ".join(tokens)))
    b = screen_forum(ThreadNode("t", "u", " ".join(shuffled)))
    assert (a.accepted, a.reason, a.counts) == (b.accepted, b.reason, b.counts)


def random_thread(rng, depth=0):
    n_children = rng.randint(0, 4) if depth < 3 else 0
    kids = [random_thread(rng, depth + 1) for _ in range(n_children)]
    return ThreadNode(f"p{rng.randrange(10**9)}", "u", " ".join(["w"] * rng.randint(5, 260)), kids)


@given(seeds, seeds)
def test_thread_sample_size(tree_seed, pick):
    roots = [random_thread(random.Random(tree_seed))]
    try:
        snip = sample_thread(roots, pick)
    except (NoRootError, UnreachableSizeError):
        return
    assert 500 <= snip.word_count <= 1000
    assert sample_thread(roots, pick) == snip


# -- ensemble ---------------------------------------------------------------------

@given(st.lists(st.lists(st.sampled_from(["NN", "VB", "JJ"]), min_size=4, max_size=4), min_size=1, max_size=20),
       st.permutations(range(4)))
def test_vote_permutation_invariant(rows, perm):
    names = ["a", "b", "c", "d"]
    base = BasePredictions(names, [("d", i, tuple(r)) for i, r in enumerate(rows)])
    moved = BasePredictions([names[p] for p in perm],
                            [("d", i, tuple(r[p] for p in perm)) for i, r in enumerate(rows)])
    assert majority_vote(base, names) == majority_vote(moved, names)


# -- entities ---------------------------------------------------------------------

def partition(chains):
    return sorted(sorted(c.mentions) for c in chains)


@given(seeds)
def test_inject_then_harmonize(seed):
    rng = random.Random(seed)
    mentions, chains = fuzz.nested_mentions(rng, 30)
    ner = [NerPrediction(m.first_token, m.last_token, rng.choice(["person", "place", "event"]), rng.random())
           for m in mentions if rng.random() < 0.5]
    typed = inject_types(mentions, ner)
    assert [(m.id, m.span, m.chain) for m in typed] == [(m.id, m.span, m.chain) for m in mentions]
    out = harmonize_chain_types(typed, chains)
    by_id = {m.id: m for m in out}
    assert all(len({by_id[i].etype for i in c.mentions}) == 1 for c in chains)


@given(st.lists(st.integers(1, 5), max_size=8))
def test_drop_singletons_idempotent(sizes):
    chains = [CorefChain(f"c{k}", [f"m{k}_{i}" for i in range(n)]) for k, n in enumerate(sizes)]
    once = drop_singletons(chains)
    assert drop_singletons(once) == once
    assert all(len(c.mentions) > 1 for c in once)


# -- discourse --------------------------------------------------------------------

@given(seeds)
def test_constrain_refines_and_is_idempotent(seed):
    cands, sents, markup, toks = fuzz.edu_triple(random.Random(seed))
    edus = constrain_segmentation(cands, sents, markup, toks)
    bounds = edu_boundaries(edus)
    assert set(cands) <= set(bounds)
    assert {s.first_token for s in sents} <= set(bounds)
    assert constrain_segmentation(bounds, sents, markup, toks) == edus


# -- metrics ----------------------------------------------------------------------

def in_unit(prf):
    return all(0 <= x <= 1 for x in (prf.precision, prf.recall, prf.f1))


@given(seeds, st.booleans())
def test_coref_matches_oracle_and_swaps(seed, keep):
    key, resp = fuzz.coref_config(random.Random(seed))
    got = score_coref(key, resp, keep_singletons=keep)
    for prf, ref in zip((got.muc, got.b3, got.ceaf_e), oracles.coref_all(key, resp, keep)):
        assert in_unit(prf)
        assert abs(prf.precision - ref[0]) < 1e-12 and abs(prf.recall - ref[1]) < 1e-12
    back = score_coref(resp, key, keep_singletons=keep)
    for a, b in zip((got.muc, got.b3, got.ceaf_e), (back.muc, back.b3, back.ceaf_e)):
        assert abs(a.precision - b.recall) < 1e-12 and abs(a.f1 - b.f1) < 1e-12


spans = st.lists(st.tuples(st.integers(0, 20), st.integers(0, 5)).map(lambda t: (t[0], t[0] + t[1])),
                 max_size=12, unique=True)


@given(spans, spans)
def test_tokenization_swap(gold, pred):
    a, b = score_tokenization(gold, pred), score_tokenization(pred, gold)
    assert in_unit(a) and (a.precision, a.recall, a.f1) == (b.recall, b.precision, b.f1)


@given(seeds, seeds)
def test_nested_entities_swap(s1, s2):
    g, _ = fuzz.nested_mentions(random.Random(s1), 12)
    p, _ = fuzz.nested_mentions(random.Random(s2), 12)
    a, b = score_nested_entities(g, p), score_nested_entities(p, g)
    assert in_unit(a) and (a.precision, a.recall) == (b.recall, b.precision)
    assert score_nested_entities(g, g).f1 == 1


@given(st.lists(st.tuples(st.integers(-1, 6), st.sampled_from(["nsubj", "obj", "root"]),
                          st.integers(-1, 6), st.sampled_from(["nsubj", "obj", "root"])), min_size=1, max_size=7))
def test_las_not_above_uas(rows):
    gold = [(i, h, r) for i, (h, r, _, _) in enumerate(rows)]
    pred = [(i, h, r) for i, (_, _, h, r) in enumerate(rows)]
    s = score_attachment(gold, pred)
    assert 0 <= s.las <= s.uas <= 1
    assert (s.uas, s.las) == oracles.attachment(gold, pred)


@given(seeds, st.integers(1, 9))
def test_rst_scores_ordered(seed, n):
    rng = random.Random(seed)
    g, p = fuzz.random_tree(rng, n), fuzz.random_tree(rng, n)
    s = score_rst(g, p)
    assert 0 <= s.relation <= s.nuclearity <= s.span <= 1
    same = score_rst(g, g)
    assert (same.span, same.nuclearity, same.relation) == (1, 1, 1)
