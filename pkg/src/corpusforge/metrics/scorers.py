"""Tokenization, tagging, attachment, nested entity, and RST scorers."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence, Tuple, Union

from ..corpus.model import DepArc, EntityMention, RSTNode
from ..sentences import AlignmentError
from .base import PRF, Accuracy, AttachmentScores, RSTScores


class SegmentationMismatchError(ValueError):
    pass


def _counter_prf(gold: Counter, pred: Counter) -> PRF:
    hits = sum((gold & pred).values())
    return PRF(hits, sum(pred.values()), hits, sum(gold.values()))


def score_tokenization(gold: Iterable[Tuple[int, int]], pred: Iterable[Tuple[int, int]],
                       mode: str = "span") -> PRF:
    """Exact-span match (``mode="span"``) or token-edge match (``mode="boundary"``)."""
    gold, pred = [tuple(s) for s in gold], [tuple(s) for s in pred]
    if mode == "span":
        return _counter_prf(Counter(gold), Counter(pred))
    if mode == "boundary":
        g = Counter({e for s in gold for e in s})
        p = Counter({e for s in pred for e in s})
        return _counter_prf(g, p)
    raise ValueError(f"unknown tokenization scoring mode {mode!r}")


def score_tagging(gold: Sequence[str], pred: Sequence[str]) -> Accuracy:
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold tags but {len(pred)} predicted")
    if not gold:
        raise AlignmentError("no tags to score")
    return Accuracy(sum(g == p for g, p in zip(gold, pred)), len(gold))


ArcLike = Union[DepArc, Tuple[int, object, str]]


def _arc_table(arcs: Iterable[ArcLike]):
    out = {}
    for a in arcs:
        dep, head, rel = (a.dependent, a.head, a.deprel) if isinstance(a, DepArc) else a
        if dep in out:
            raise AlignmentError(f"token {dep} has more than one arc")
        out[dep] = (head, rel)
    return out


def score_attachment(gold: Iterable[ArcLike], pred: Iterable[ArcLike]) -> AttachmentScores:
    g, p = _arc_table(gold), _arc_table(pred)
    if len(g) != len(p):
        raise AlignmentError(f"{len(g)} gold arcs but {len(p)} predicted")
    if set(g) != set(p):
        raise AlignmentError("gold and predicted arcs cover different tokens")
    heads = labels = 0
    for dep, (head, rel) in g.items():
        phead, prel = p[dep]
        if phead == head:
            heads += 1
            labels += prel == rel
    return AttachmentScores(heads, labels, len(g))


def _typed(m) -> Tuple[int, int, str]:
    if isinstance(m, EntityMention):
        return (m.first_token, m.last_token, m.etype)
    return tuple(m)


def score_nested_entities(gold: Iterable, pred: Iterable) -> PRF:
    """A prediction counts when span and type match a distinct gold mention."""
    return _counter_prf(Counter(_typed(m) for m in gold), Counter(_typed(m) for m in pred))


def _constituents(tree: RSTNode):
    return [n for n in tree.iter_nodes() if n is not tree]


def score_rst(gold: RSTNode, pred: RSTNode) -> RSTScores:
    """Span, nuclearity, and relation F1 over all non-root constituents.

    Leaves are included, so a two-EDU tree still scores its nuclearity and
    relation. Nuclearity compares ``(span, nucleus/satellite)``; relation
    compares ``(span, relation label)`` where a mononuclear nucleus carries
    ``span``.
    """
    if gold.span != pred.span:
        raise SegmentationMismatchError(
            f"gold tree covers EDUs {gold.span}, predicted tree covers {pred.span}")
    g, p = _constituents(gold), _constituents(pred)
    return RSTScores(
        _counter_prf(Counter(n.span for n in g), Counter(n.span for n in p)),
        _counter_prf(Counter((n.span, n.nuclearity) for n in g), Counter((n.span, n.nuclearity) for n in p)),
        _counter_prf(Counter((n.span, n.relation) for n in g), Counter((n.span, n.relation) for n in p)),
    )
