"""Synthetic tagging corpora with simulated base taggers.

Tokens fall into shape classes (title case, all caps, digit-bearing,
lowercase, punctuation). Tagger ``i`` is unreliable on shape class ``i``
and tagger ``i - 1`` shares that weakness with the same wrong tag, so two
of four taggers agree on an error there. A majority vote with tagger-order
tie-breaking picks the wrong side of those ties half the time, while a
model that sees the token shape can learn whom to trust.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List

from ..corpus.model import Token
from .predictions import BasePredictions

SHAPE_CLASSES = ("title", "upper", "digit", "lower", "punct")

_GOLD = {
    "title": (("NNP", 6), ("NN", 2), ("JJ", 1), ("VB", 1)),
    "upper": (("NNP", 5), ("NN", 2), ("CD", 1), ("UH", 1)),
    "digit": (("CD", 6), ("NN", 2), ("JJ", 1), ("NNP", 1)),
    "lower": (("NN", 4), ("VB", 2), ("JJ", 2), ("RB", 1), ("IN", 2), ("DT", 2)),
    "punct": (("." , 3), (",", 4), (":", 1)),
}
TAGSET = sorted({t for opts in _GOLD.values() for t, _ in opts})

# wrong tag used by a tagger that errs systematically on a gold tag
_CONFUSE = {"NNP": "NN", "NN": "JJ", "JJ": "NN", "VB": "NN", "CD": "NNP", "UH": "NNP",
            "RB": "JJ", "IN": "RB", "DT": "IN", ".": ":", ",": ":", ":": ","}

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _form(cls: str, rng: random.Random) -> str:
    n = rng.randint(2, 9)
    word = "".join(rng.choice(_LETTERS) for _ in range(n))
    if cls == "title":
        return word.capitalize()
    if cls == "upper":
        return word.upper()[: max(2, n // 2)]
    if cls == "digit":
        return str(rng.randint(1, 2099)) + rng.choice(["", "", "s", "th", "km"])
    if cls == "punct":
        return rng.choice([".", ",", ";", ":", "!", "?", "-"])
    return word


@dataclass
class SyntheticCorpus:
    gold: Dict[str, List[Token]]
    predictions: BasePredictions

    def split(self, train_fraction: float = 0.8):
        """Document-level split in id order; returns (train, test) corpora."""
        ids = sorted(self.gold)
        cut = int(round(len(ids) * train_fraction))
        return self.subset(ids[:cut]), self.subset(ids[cut:])

    def subset(self, doc_ids) -> "SyntheticCorpus":
        keep = set(doc_ids)
        idx = [k for k, r in enumerate(self.predictions.rows) if r[0] in keep]
        p = self.predictions
        preds = BasePredictions(list(p.tagger_names), [p.rows[k] for k in idx], p.fold_id,
                                [p.forms[k] for k in idx] if p.forms is not None else None)
        return SyntheticCorpus({d: self.gold[d] for d in sorted(keep)}, preds)

    def gold_tags(self) -> List[str]:
        index = {(d, t.index): t.xpos for d, toks in self.gold.items() for t in toks}
        return [index[(d, i)] for d, i, _ in self.predictions.rows]


def generate_corpus(n_tokens: int = 10_000, n_taggers: int = 4, doc_size: int = 200,
                    weak_error: float = 0.45, noise: float = 0.02, seed: int = 0) -> SyntheticCorpus:
    if n_taggers < 2:
        raise ValueError("need at least two simulated taggers")
    rng = random.Random(seed)
    names = [f"tagger{i + 1}" for i in range(n_taggers)]
    gold: Dict[str, List[Token]] = {}
    rows, forms = [], []
    weights = (3, 2, 2, 6, 3)
    n_docs = max(1, -(-n_tokens // doc_size))
    made = 0
    for d in range(n_docs):
        doc_id = f"syn{d:04d}"
        toks = []
        offset = 0
        for i in range(min(doc_size, n_tokens - made)):
            cls_ix = rng.choices(range(len(SHAPE_CLASSES)), weights)[0]
            cls = SHAPE_CLASSES[cls_ix]
            opts = _GOLD[cls]
            tag = rng.choices([t for t, _ in opts], [w for _, w in opts])[0]
            form = _form(cls, rng)
            toks.append(Token(i, offset, offset + len(form), form, xpos=tag))
            offset += len(form) + 1
            # shape class c is a weak spot for taggers c and c-1 (mod K)
            weak = {cls_ix % n_taggers, (cls_ix - 1) % n_taggers} if cls != "punct" else set()
            systematic = rng.random() < weak_error
            out = []
            for j in range(n_taggers):
                if j in weak and systematic:
                    out.append(_CONFUSE[tag])
                elif rng.random() < noise:
                    out.append(rng.choice(TAGSET))
                else:
                    out.append(tag)
            rows.append((doc_id, i, tuple(out)))
            forms.append(form)
        made += len(toks)
        gold[doc_id] = toks
        if made >= n_tokens:
            break
    return SyntheticCorpus(gold, BasePredictions(names, rows, None, forms))
