"""Per-document and corpus-level (micro-averaged) score reports over Documents."""

from __future__ import annotations

from functools import reduce
from operator import add
from typing import Callable, Dict, Mapping

from ..corpus.model import Document
from .coref import chains_as_spans, score_coref
from .scorers import (score_attachment, score_nested_entities, score_rst, score_tagging,
                      score_tokenization)

LAYERS = ("tokens", "xpos", "deps", "coref", "entities", "rst")


class MissingLayerError(ValueError):
    pass


def _need(doc: Document, attr: str):
    value = getattr(doc, attr)
    if value is None:
        raise MissingLayerError(f"document {doc.id} has no {attr} layer")
    return value


def _scorer(layer: str, keep_singletons: bool) -> Callable[[Document, Document], object]:
    if layer == "tokens":
        return lambda g, p: score_tokenization([(t.start, t.end) for t in _need(g, "tokens")],
                                               [(t.start, t.end) for t in _need(p, "tokens")])
    if layer == "xpos":
        return lambda g, p: score_tagging([t.xpos for t in _need(g, "tokens")],
                                          [t.xpos for t in _need(p, "tokens")])
    if layer == "deps":
        return lambda g, p: score_attachment(_need(g, "arcs"), _need(p, "arcs"))
    if layer == "coref":
        return lambda g, p: score_coref(chains_as_spans(_need(g, "mentions"), _need(g, "chains")),
                                        chains_as_spans(_need(p, "mentions"), _need(p, "chains")),
                                        keep_singletons=keep_singletons)
    if layer == "entities":
        return lambda g, p: score_nested_entities(_need(g, "mentions"), _need(p, "mentions"))
    if layer == "rst":
        return lambda g, p: score_rst(_need(g, "rst"), _need(p, "rst"))
    raise ValueError(f"unknown layer {layer!r}; expected one of {', '.join(LAYERS)}")


def score_corpus(layer: str, gold: Mapping[str, Document], pred: Mapping[str, Document],
                 keep_singletons: bool = False) -> Dict:
    """Score every document present on both sides.

    The corpus block sums per-document counts (micro-average). Documents
    missing from either side are listed rather than scored.
    """
    fn = _scorer(layer, keep_singletons)
    per_doc = {}
    for doc_id in sorted(set(gold) & set(pred)):
        per_doc[doc_id] = fn(gold[doc_id], pred[doc_id])
    out = {
        "layer": layer,
        "documents": {d: s.to_dict() for d, s in per_doc.items()},
        "corpus": reduce(add, per_doc.values()).to_dict() if per_doc else None,
        "missing_pred": sorted(set(gold) - set(pred)),
        "missing_gold": sorted(set(pred) - set(gold)),
    }
    if layer == "coref":
        out["keep_singletons"] = keep_singletons
    return out
