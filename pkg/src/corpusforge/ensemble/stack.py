"""Meta-learner over base tagger columns, and the majority-vote baseline.

Model file schema (JSON, ``format = "corpusforge-stack"``, ``version = 1``)::

    tagger_names   ordered base tagger names the model expects
    tags_only      true if shape features were excluded
    features       feature column names (taggers, then shape features)
    categories     per feature, the category strings seen in training; a
                   category's position is its integer code
    labels         label inventory; class index -> xpos
    seen           sorted list of K-tag tuples observed in training
    train_accuracy accuracy of the fitted model on its training matrix
    booster        n_classes, ncats, base_score, params, and
                   trees[round][class] = {feature, category, left, right, value}
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from .gbdt import Booster, GBDTParams
from .matrix import SHAPE_FEATURES, StackMatrix, shape_features
from .predictions import BasePredictions

FORMAT = "corpusforge-stack"
VERSION = 1


class SchemaError(ValueError):
    pass


@dataclass
class StackModel:
    tagger_names: List[str]
    tags_only: bool
    categories: List[List[str]]
    labels: List[str]
    booster: Booster
    seen: Set[Tuple[str, ...]] = field(default_factory=set)
    train_accuracy: float = 0.0

    @property
    def features(self) -> List[str]:
        return list(self.tagger_names) + ([] if self.tags_only else list(SHAPE_FEATURES))

    def encode(self, rows: Sequence[Tuple[str, ...]]) -> np.ndarray:
        lookup = [{c: i for i, c in enumerate(cats)} for cats in self.categories]
        X = np.full((len(rows), len(self.categories)), -1, dtype=np.int64)
        for r, row in enumerate(rows):
            for f, v in enumerate(row):
                X[r, f] = lookup[f].get(v, -1)
        return X

    def to_dict(self) -> dict:
        return {"format": FORMAT, "version": VERSION,
                "tagger_names": self.tagger_names, "tags_only": self.tags_only,
                "features": self.features, "categories": self.categories,
                "labels": self.labels, "seen": sorted(list(t) for t in self.seen),
                "train_accuracy": self.train_accuracy, "booster": self.booster.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "StackModel":
        if d.get("format") != FORMAT or d.get("version") != VERSION:
            raise SchemaError(f"unsupported model file {d.get('format')!r} v{d.get('version')}")
        return cls(list(d["tagger_names"]), bool(d["tags_only"]), d["categories"], d["labels"],
                   Booster.from_dict(d["booster"]), {tuple(t) for t in d["seen"]},
                   float(d["train_accuracy"]))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path: str) -> "StackModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def fit_meta(matrix: StackMatrix, params: Optional[GBDTParams] = None,
             tags_only: bool = False) -> StackModel:
    if len(matrix) == 0:
        raise ValueError("empty stack matrix")
    params = params or GBDTParams()
    rows = matrix.feature_rows(tags_only)
    nfeat = len(rows[0])
    categories = [sorted({r[f] for r in rows}) for f in range(nfeat)]
    labels = sorted(set(matrix.gold))
    label_ix = {t: i for i, t in enumerate(labels)}
    y = np.array([label_ix[t] for t in matrix.gold], dtype=np.int64)
    model = StackModel(list(matrix.tagger_names), tags_only, categories, labels,
                       Booster(len(labels), [len(c) for c in categories], [0.0] * len(labels)),
                       set(matrix.tags))
    X = model.encode(rows)
    model.booster = Booster.fit(X, y, len(labels), [len(c) for c in categories], params)
    pred = model.booster.predict(X)
    model.train_accuracy = float(np.mean(pred == y))
    return model


def majority_vote(base: BasePredictions, priority: Optional[Sequence[str]] = None) -> List[str]:
    """Modal tag per token; ties go to the earliest tagger in ``priority``."""
    if priority is None:
        priority = base.tagger_names
    if sorted(priority) != sorted(base.tagger_names):
        raise SchemaError(f"priority {list(priority)} is not a permutation of {base.tagger_names}")
    order = [base.tagger_names.index(name) for name in priority]
    return [_vote(tags, order) for _, _, tags in base.rows]


def _vote(tags: Sequence[str], order: Sequence[int], allowed=None) -> Optional[str]:
    counts = Counter(t for t in tags if allowed is None or t in allowed)
    if not counts:
        return None
    top = max(counts.values())
    for j in order:
        if counts.get(tags[j]) == top:
            return tags[j]
    return None


def apply_ensemble(base: BasePredictions, model: StackModel,
                   forms: Optional[Sequence[str]] = None) -> List[str]:
    """Tag each token with the meta-learner.

    Rows whose K-tag combination never occurred in training fall back to a
    majority vote restricted to the model's label inventory (tagger order as
    priority); if no base tag is in the inventory the model's own prediction
    is kept.
    """
    if list(base.tagger_names) != list(model.tagger_names):
        raise SchemaError(f"tagger order {base.tagger_names} does not match model {model.tagger_names}")
    if not base.rows:
        return []
    tags = [r[2] for r in base.rows]
    if model.tags_only:
        rows = tags
    else:
        forms = forms if forms is not None else base.forms
        if forms is None or len(forms) != len(tags):
            raise SchemaError("model uses shape features; token forms are required")
        rows = [t + shape_features(f) for t, f in zip(tags, forms)]
    pred = model.booster.predict(model.encode(rows))
    out = [model.labels[i] for i in pred]
    allowed = set(model.labels)
    order = list(range(base.k))
    for i, t in enumerate(tags):
        if t not in model.seen:
            fallback = _vote(t, order, allowed)
            if fallback is not None:
                out[i] = fallback
    return out


# PTB xpos -> UD UPOS, used to derive UPOS from ensembled xpos
PTB_TO_UPOS = {
    "CC": "CCONJ", "CD": "NUM", "DT": "DET", "EX": "PRON", "FW": "X", "IN": "ADP",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ", "LS": "X", "MD": "AUX", "NN": "NOUN",
    "NNS": "NOUN", "NNP": "PROPN", "NNPS": "PROPN", "PDT": "DET", "POS": "PART",
    "PRP": "PRON", "PRP$": "PRON", "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "RP": "ADP",
    "SYM": "SYM", "TO": "PART", "UH": "INTJ", "VB": "VERB", "VBD": "VERB", "VBG": "VERB",
    "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB", "WDT": "PRON", "WP": "PRON", "WP$": "PRON",
    "WRB": "ADV", ".": "PUNCT", ",": "PUNCT", ":": "PUNCT", "``": "PUNCT", "''": "PUNCT",
    "-LRB-": "PUNCT", "-RRB-": "PUNCT", "HYPH": "PUNCT", "NFP": "PUNCT", "$": "SYM",
    "#": "SYM", "ADD": "X", "AFX": "ADJ", "GW": "X", "XX": "X",
}


def to_upos(xpos: str) -> str:
    return PTB_TO_UPOS.get(xpos, "X")
