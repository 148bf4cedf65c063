"""Regenerate the bundled mini-corpus inputs.

Writes, next to ``sources/``: manifest.jsonl, config.toml, simulated base
tagger predictions, a fold plan and stack model trained on them, coreference
and NER layers, and candidate EDU boundaries. The external systems (taggers,
coreferencer, NER, segmenter) are simulated with simple seeded heuristics so
the pipeline has realistic inputs to consume.

    python scripts/build_minicorpus.py
"""

from __future__ import annotations

import json
import os
import random
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "src"))

from corpusforge.corpus.io import read_document, write_manifest  # noqa: E402
from corpusforge.corpus.model import EntityMention  # noqa: E402
from corpusforge.corpus.io import save_entity_layer  # noqa: E402
from corpusforge.ensemble import (BasePredictions, GBDTParams, assemble_stack_matrix, fit_meta,  # noqa: E402
                                  make_folds, save_predictions)
from corpusforge.entities import NerPrediction, save_ner  # noqa: E402
from corpusforge.pipeline import PipelineConfig, run_pipeline  # noqa: E402

ROOT = os.path.join(HERE, "..", "src", "corpusforge", "data", "minicorpus")
SEED = 13

CONFIG = """\
# Mini-corpus run: all stages over the 16 bundled snippets.
# Snippets are short, so the word thresholds are scaled down.

[run]
manifest = "manifest.jsonl"
out_dir = "out"
stages = ["acquire", "tokenize", "split", "tag", "merge-entities", "constrain-edus", "validate"]
seed = 13
workers = 1

[acquire]
min_words = 50
cap_words = 1000
anchor_policy = "heading"
max_link_ratio = 0.10
max_email_count = 5

[tag]
model = "stack_model.json"
predictions = "base_predictions.tsv"

[entities]
coref_dir = "coref"
ner_dir = "ner"

[edus]
candidates_dir = "edus"
"""

CLOSED = {
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT", "each": "DT", "no": "DT",
    "every": "DT", "both": "DT", "some": "DT", "all": "DT", "these": "DT", "those": "DT",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC",
    "of": "IN", "in": "IN", "on": "IN", "at": "IN", "by": "IN", "for": "IN", "with": "IN",
    "from": "IN", "into": "IN", "after": "IN", "before": "IN", "during": "IN", "under": "IN",
    "about": "IN", "across": "IN", "than": "IN", "if": "IN", "because": "IN", "while": "IN",
    "over": "IN", "until": "IN", "above": "IN", "near": "IN", "like": "IN", "whether": "IN",
    "to": "TO", "not": "RB", "n't": "RB", "also": "RB", "still": "RB", "then": "RB",
    "there": "EX", "here": "RB", "again": "RB", "only": "RB", "already": "RB", "often": "RB",
    "i": "PRP", "you": "PRP", "he": "PRP", "she": "PRP", "it": "PRP", "we": "PRP", "they": "PRP",
    "me": "PRP", "him": "PRP", "us": "PRP", "them": "PRP", "her": "PRP$", "his": "PRP$",
    "my": "PRP$", "your": "PRP$", "our": "PRP$", "their": "PRP$", "its": "PRP$",
    "is": "VBZ", "was": "VBD", "were": "VBD", "are": "VBP", "be": "VB", "been": "VBN",
    "has": "VBZ", "had": "VBD", "have": "VBP", "do": "VBP", "does": "VBZ", "did": "VBD",
    "can": "MD", "could": "MD", "would": "MD", "should": "MD", "will": "MD", "may": "MD",
    "what": "WP", "who": "WP", "which": "WDT", "how": "WRB", "when": "WRB", "where": "WRB",
    "why": "WRB", "'s": "POS", "yes": "UH", "thanks": "UH",
}
PUNCT = {".": ".", "!": ".", "?": ".", ",": ",", ":": ":", ";": ":", "-": "HYPH", "–": ":",
         '"': "``", "(": "-LRB-", ")": "-RRB-", "...": ":"}
PRONOUNS = {"he", "she", "him", "her", "his"}


def reference_tag(form: str, first_in_sentence: bool) -> str:
    low = form.lower()
    if form in PUNCT:
        return PUNCT[form]
    if low in CLOSED:
        return CLOSED[low]
    if any(c.isdigit() for c in form):
        return "CD"
    if form[0].isupper() and not first_in_sentence:
        return "NNP"
    if low.endswith("ly"):
        return "RB"
    if low.endswith("ing"):
        return "VBG"
    if low.endswith("ed"):
        return "VBD"
    if low.endswith("s") and len(low) > 3 and not low.endswith("ss"):
        return "NNS"
    return "NN"


CONFUSE = {"NN": "JJ", "NNS": "VBZ", "NNP": "NN", "VBD": "VBN", "VBG": "NN", "RB": "JJ",
           "IN": "RB", "DT": "IN", "CD": "NNP", "JJ": "NN", "VB": "VBP", "VBP": "VB"}


def shape_class(form: str) -> int:
    if any(c.isdigit() for c in form):
        return 1
    if form[:1].isupper():
        return 0
    if len(form) > 5:
        return 2
    return 3


def simulate(ref, forms, rng):
    """Four taggers, each unreliable on one token shape class."""
    cols = []
    for j in range(4):
        col = []
        for tag, form in zip(ref, forms):
            weak = shape_class(form) == j
            if weak and tag in CONFUSE and rng.random() < 0.3:
                col.append(CONFUSE[tag])
            elif rng.random() < 0.02 and tag in CONFUSE:
                col.append(CONFUSE[tag])
            else:
                col.append(tag)
        cols.append(col)
    return cols


def entity_layers(doc, rng):
    toks = doc.tokens
    starts = {s.first_token for s in doc.sentences}
    mentions = []
    last_person = None
    chain_of = {}
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.form[:1].isupper() and t.form.isalpha() and i not in starts and t.form.lower() not in CLOSED:
            j = i
            while j + 1 < len(toks) and toks[j + 1].form[:1].isupper() and toks[j + 1].form.isalpha():
                j += 1
            name = " ".join(x.form for x in toks[i:j + 1])
            chain = chain_of.setdefault(name, f"c{len(chain_of) + 1}")
            mentions.append([i, j, "abstract", chain])
            last_person = chain
            i = j + 1
            continue
        if t.form.lower() in PRONOUNS and last_person is not None:
            mentions.append([i, i, "person", last_person])
        i += 1
    ms = [EntityMention(f"m{k + 1}", a, b, et, ch) for k, (a, b, et, ch) in enumerate(mentions)]
    ner = []
    for m in ms:
        if m.first_token == m.last_token and toks[m.first_token].form.lower() in PRONOUNS:
            continue
        prev = toks[m.first_token - 1].form.lower() if m.first_token else ""
        etype = "place" if prev in ("in", "to", "from", "at") else "person"
        ner.append(NerPrediction(m.first_token, m.last_token, etype, round(rng.uniform(0.6, 0.99), 2)))
        if rng.random() < 0.2 and m.last_token + 1 < len(toks):
            # a near-miss span that must not be injected
            ner.append(NerPrediction(m.first_token, m.last_token + 1, "organization", 0.5))
    return ms, ner


def edu_candidates(doc):
    cands = []
    for k, t in enumerate(doc.tokens[:-1]):
        if t.form == ",":
            cands.append(k + 1)
        elif t.form.lower() in ("because", "while", "but", "when") and k > 0:
            cands.append(k)
    return sorted(set(cands))


def main():
    rng = random.Random(SEED)
    src = os.path.join(ROOT, "sources")
    entries = []
    for name in sorted(os.listdir(src)):
        doc_id = os.path.splitext(name)[0]
        genre = doc_id.rsplit("_", 1)[0]
        e = {"id": doc_id, "genre": genre, "source": f"minicorpus/{name}", "path": f"sources/{name}"}
        if genre == "fiction":
            e["keywords"] = ["fiction", "short story"]
        entries.append(e)
    write_manifest(entries, os.path.join(ROOT, "manifest.jsonl"))
    with open(os.path.join(ROOT, "config.toml"), "w", encoding="utf-8") as f:
        f.write(CONFIG)

    tmp = tempfile.mkdtemp()
    try:
        cfg = PipelineConfig.from_toml(os.path.join(ROOT, "config.toml"), out_dir=tmp)
        cfg.stages = ["acquire", "tokenize", "split"]
        report = run_pipeline(cfg)
        assert report.hard_errors == 0 and not report.rejects, report.to_dict()
        docs = {e["id"]: read_document(os.path.join(tmp, "docs", e["id"], "document.json")) for e in entries}
    finally:
        shutil.rmtree(tmp)

    names = ["tagger1", "tagger2", "tagger3", "tagger4"]
    plan = make_folds([(e["id"], e["genre"]) for e in entries], k=4, seed=SEED)
    with open(os.path.join(ROOT, "fold_plan.json"), "w", encoding="utf-8") as f:
        json.dump(plan.to_dict(), f, indent=1, sort_keys=True)
        f.write("\n")
    all_rows = []
    fold_rows = {k: [] for k in range(plan.k)}
    gold = {}
    for doc_id, doc in docs.items():
        starts = {s.first_token for s in doc.sentences}
        ref = [reference_tag(t.form, t.index in starts) for t in doc.tokens]
        for t, tag in zip(doc.tokens, ref):
            t.xpos = tag
        gold[doc_id] = doc.tokens
        cols = simulate(ref, [t.form for t in doc.tokens], rng)
        for k in range(len(doc.tokens)):
            row = (doc_id, k, tuple(c[k] for c in cols))
            all_rows.append(row)
            fold_rows[plan.assignment[doc_id]].append(row)
    save_predictions(BasePredictions(names, all_rows), os.path.join(ROOT, "base_predictions.tsv"))
    folds = [BasePredictions(names, rows, k) for k, rows in fold_rows.items()]
    matrix = assemble_stack_matrix(folds, None, gold, plan)
    model = fit_meta(matrix, GBDTParams(n_rounds=30, max_depth=3, seed=SEED))
    model.save(os.path.join(ROOT, "stack_model.json"))
    print(f"stack model: {len(matrix)} rows, train accuracy {model.train_accuracy:.3f}")

    for sub in ("coref", "ner", "edus"):
        os.makedirs(os.path.join(ROOT, sub), exist_ok=True)
    for doc_id, doc in docs.items():
        ms, ner = entity_layers(doc, rng)
        save_entity_layer(ms, os.path.join(ROOT, "coref", doc_id + ".tsv"))
        save_ner(ner, os.path.join(ROOT, "ner", doc_id + ".tsv"))
        with open(os.path.join(ROOT, "edus", doc_id + ".txt"), "w", encoding="utf-8") as f:
            f.writelines(f"{b}\n" for b in edu_candidates(doc))
    total = sum(len(d.tokens) for d in docs.values())
    print(f"{len(docs)} documents, {total} tokens")


if __name__ == "__main__":
    main()
