"""Seeded generators for fuzz and acceptance tests."""

import random
import string

from corpusforge.corpus.model import (EDU, GENRES, CorefChain, DepArc, Document, EntityMention,
                                      MarkupSpan, RSTNode, Sentence)
from corpusforge.corpus.rst import RELATIONS
from corpusforge.sentences import split_sentences
from corpusforge.tokenizer import tokenize

MONO = sorted(r for r, c in RELATIONS.items() if c == "mono")
MULTI = sorted(r for r, c in RELATIONS.items() if c == "multi")

WORDS = ("the", "river", "Anna", "walked", "quickly", "don't", "9AM", "e-mail", "Dr.", "U.S.",
         "café", "naïve", "3.5", "it's", "well-known", "(see", "below)", "42nd", "über", "O'Neil",
         "www.example.org", "a@b.co", "...", "--", "x", "NASA", "go!", "why?", "Zoë", "İstanbul")
SPACES = (" ", " ", " ", "  ", "\n", "\t", " ", " ", "\n\n")


def coref_config(rng, max_mentions=8, max_chains=4):
    """Random gold/pred partitions over overlapping mention pools."""
    pool = list(string.ascii_lowercase[:max_mentions])

    def side():
        members = rng.sample(pool, rng.randint(0, max_mentions))
        n = rng.randint(1, max_chains)
        chains = [[] for _ in range(n)]
        for m in members:
            chains[rng.randrange(n)].append(m)
        return [c for c in chains if c]

    return side(), side()


def random_text(rng, n_words=None):
    n = rng.randint(0, 40) if n_words is None else n_words
    parts = []
    for _ in range(n):
        if rng.random() < 0.15:
            parts.append("".join(rng.choice(string.printable[:94]) for _ in range(rng.randint(1, 6))))
        else:
            parts.append(rng.choice(WORDS))
        parts.append(rng.choice(SPACES))
    text = "".join(parts)
    if rng.random() < 0.3:
        text = rng.choice(SPACES) + text
    return text


def paragraphs_doc(rng, doc_id="d", genre=None, n_blocks=None):
    """A document of headings and paragraphs joined by blank lines."""
    genre = genre or rng.choice(GENRES)
    blocks = []
    for _ in range(n_blocks or rng.randint(1, 8)):
        if rng.random() < 0.3:
            blocks.append(("heading", " ".join(rng.choice(WORDS[:5]) for _ in range(rng.randint(1, 4)))))
        else:
            words = []
            for _ in range(rng.randint(3, 20)):
                w = rng.choice(WORDS)
                words.append(w)
                if rng.random() < 0.15:
                    words[-1] += "."
            blocks.append(("paragraph", " ".join(words) + "."))
    text, markup = "", []
    for kind, body in blocks:
        if text:
            text += "\n\n"
        markup.append(MarkupSpan(kind, len(text), len(text) + len(body)))
        text += body
    return Document(doc_id, genre, "fuzz", text, markup)


def annotated_doc(rng, doc_id="d", genre=None):
    """A document with every layer filled and valid."""
    doc = paragraphs_doc(rng, doc_id, genre)
    toks = tokenize(doc.raw_text, doc.markup)
    for t in toks:
        t.xpos = rng.choice(("NN", "VB", "DT", "JJ", "."))
        t.upos = rng.choice(("NOUN", "VERB", "DET", "ADJ", "PUNCT"))
        t.lemma = rng.choice((t.form.lower(), t.form, None, t.form[:-1] or t.form, "be"))
        t.feats = rng.choice((None, "Number=Sing", "Tense=Past|VerbForm=Fin"))
    doc.tokens = toks
    doc.sentences = split_sentences(toks, markup=doc.markup)
    for s in doc.sentences:
        s.stype = rng.choice(("decl", "q", "frag", "other"))
    arcs = []
    for s in doc.sentences:
        ids = list(range(s.first_token, s.last_token + 1))
        root = rng.choice(ids)
        for i in ids:
            arcs.append(DepArc(i, None if i == root else rng.choice([j for j in ids if j != i] or [root]),
                               "root" if i == root else rng.choice(("nsubj", "obj", "det", "punct"))))
    doc.arcs = arcs
    mentions, chains = nested_mentions(rng, len(toks))
    doc.mentions, doc.chains = mentions, chains
    bounds = sorted({s.first_token for s in doc.sentences}
                    | {rng.randrange(len(toks)) for _ in range(len(toks) // 5)} | {0})
    doc.edus = [EDU(k + 1, a, b - 1) for k, (a, b) in enumerate(zip(bounds, bounds[1:] + [len(toks)]))]
    doc.rst = random_tree(rng, len(doc.edus))
    return doc


def nested_mentions(rng, n_tokens, etypes=("person", "place", "organization", "abstract")):
    """Properly nested (never crossing) mentions with chains in text order."""
    spans = set()
    for _ in range(rng.randint(0, min(10, n_tokens))):
        a = rng.randrange(n_tokens)
        b = min(n_tokens - 1, a + rng.randint(0, 3))
        if all(not (x < a <= y < b or a < x <= b < y) for x, y in spans):
            spans.add((a, b))
    spans = sorted(spans, key=lambda s: (s[0], -s[1]))
    n_chains = max(1, len(spans) // 2)
    mentions = []
    for k, (a, b) in enumerate(spans):
        chain = f"c{rng.randrange(n_chains) + 1}"
        mentions.append(EntityMention(f"m{k + 1}", a, b, rng.choice(etypes), chain))
    members = {}
    for m in mentions:
        members.setdefault(m.chain, []).append(m.id)
    chains = [CorefChain(cid, ids) for cid, ids in sorted(members.items())]
    return mentions, chains


def random_tree(rng, n_edus, first=1, last=None):
    """A valid RST tree over EDUs first..last with typed relations."""
    last = n_edus if last is None else last
    root = _subtree(rng, first, last, "root", "")
    return root


def _subtree(rng, a, b, nuc, rel):
    node = RSTNode(a, b, nuc, rel)
    if a == b:
        return node
    width = b - a + 1
    k = rng.randint(2, min(4, width))
    cuts = sorted(rng.sample(range(a + 1, b + 1), k - 1))
    spans = list(zip([a] + cuts, [c - 1 for c in cuts] + [b]))
    if rng.random() < 0.6:
        head = rng.randrange(k)
        for i, (x, y) in enumerate(spans):
            if i == head:
                node.children.append(_subtree(rng, x, y, "nucleus", "span"))
            else:
                node.children.append(_subtree(rng, x, y, "satellite", rng.choice(MONO)))
    else:
        label = rng.choice(MULTI)
        node.children = [_subtree(rng, x, y, "nucleus", label) for x, y in spans]
    return node


def edu_triple(rng):
    """(candidates, sentences, markup, tokens) for a random short text."""
    doc = paragraphs_doc(rng)
    kinds = ("heading", "paragraph", "caption", "speaker")
    # relabel some blocks so captions and speaker turns appear too
    doc.markup = [MarkupSpan(rng.choice(kinds), m.start, m.end) for m in doc.markup]
    toks = tokenize(doc.raw_text, doc.markup)
    sents = split_sentences(toks, markup=doc.markup)
    cands = sorted(rng.sample(range(len(toks)), rng.randint(0, len(toks)))) if toks else []
    return cands, sents, doc.markup, toks


def sentences_from_bounds(bounds, n):
    bounds = sorted(set(bounds) | {0})
    return [Sentence(a, b - 1) for a, b in zip(bounds, bounds[1:] + [n])]
