"""MUC, B-cubed, and entity-level CEAF (phi4) coreference scores.

Chains are collections of hashable mention keys, normally ``(first, last)``
token spans. Scores are returned as raw counts so they can be summed over
documents.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence

from ..corpus.model import CorefChain, EntityMention
from .assignment import max_weight_assignment
from .base import PRF, CorefScores

Chain = FrozenSet[Hashable]


class CorefInputError(ValueError):
    pass


def _normalize(chains: Iterable[Iterable[Hashable]], side: str) -> List[Chain]:
    out, seen = [], set()
    for c in chains:
        members = list(c)
        fc = frozenset(members)
        if len(fc) != len(members) or seen & fc:
            dup = [m for m in members if m in seen or members.count(m) > 1]
            raise CorefInputError(f"duplicate mention {dup[0]!r} in {side} chains")
        seen |= fc
        if fc:
            out.append(fc)
    return out


def _owner(chains: Sequence[Chain]) -> Dict[Hashable, int]:
    return {m: k for k, c in enumerate(chains) for m in c}


def muc(key: Sequence[Chain], response: Sequence[Chain]) -> PRF:
    def side(a, b):
        owner = _owner(b)
        num = den = 0
        for c in a:
            parts = {owner.get(m, ("twinless", m)) for m in c}
            num += len(c) - len(parts)
            den += len(c) - 1
        return num, den

    r_num, r_den = side(key, response)
    p_num, p_den = side(response, key)
    return PRF(p_num, p_den, r_num, r_den)


def b_cubed(key: Sequence[Chain], response: Sequence[Chain]) -> PRF:
    def side(a, b):
        owner = _owner(b)
        num = 0.0
        den = 0
        for c in a:
            for m in c:
                den += 1
                if m in owner:
                    num += len(c & b[owner[m]]) / len(c)
        return num, den

    r_num, r_den = side(key, response)
    p_num, p_den = side(response, key)
    return PRF(p_num, p_den, r_num, r_den)


def phi4(k: Chain, r: Chain) -> float:
    return 2 * len(k & r) / (len(k) + len(r))


def ceaf_e(key: Sequence[Chain], response: Sequence[Chain]) -> PRF:
    if not key or not response:
        return PRF(0.0, len(response), 0.0, len(key))
    sim = [[phi4(k, r) for r in response] for k in key]
    total, _ = max_weight_assignment(sim)
    return PRF(total, len(response), total, len(key))


def _drop_twinless(a: Sequence[Chain], b: Sequence[Chain]) -> List[Chain]:
    other = set().union(*b) if b else set()
    return [c & other for c in a if c & other]


def score_coref(gold: Iterable[Iterable[Hashable]], pred: Iterable[Iterable[Hashable]],
                keep_singletons: bool = False, twinless: str = "keep") -> CorefScores:
    """Score one document.

    Singleton chains are removed from both sides unless ``keep_singletons``.
    ``twinless="drop"`` removes mentions absent from the other side before
    scoring; the default keeps them with zero credit.
    """
    if twinless not in ("keep", "drop"):
        raise ValueError("twinless must be 'keep' or 'drop'")
    key = _normalize(gold, "gold")
    response = _normalize(pred, "pred")
    if not keep_singletons:
        key = [c for c in key if len(c) > 1]
        response = [c for c in response if len(c) > 1]
    if twinless == "drop":
        key, response = _drop_twinless(key, response), _drop_twinless(response, key)
    return CorefScores(muc(key, response), b_cubed(key, response), ceaf_e(key, response))


def chains_as_spans(mentions: Sequence[EntityMention], chains: Sequence[CorefChain]) -> List[List[tuple]]:
    """Chains keyed by mention token spans, the identity used for scoring.

    Mentions outside every chain become singleton chains.
    """
    by_id = {m.id: m for m in mentions}
    out = [[by_id[mid].span for mid in c.mentions] for c in chains]
    chained = {mid for c in chains for mid in c.mentions}
    out += [[m.span] for m in mentions if m.id not in chained]
    return out
