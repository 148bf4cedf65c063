"""Fuse coreference chains with nested NER entity types.

The coreferencer decides spans and chains; the NER system only supplies types
for mentions whose token span it matched exactly. Chains are then made
type-uniform. Singletons stay in corpus output and are removed only for
CoNLL-style scoring.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from .corpus.io import chains_from_mentions
from .corpus.model import ENTITY_TYPES, CorefChain, EntityMention

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NerPrediction:
    first_token: int
    last_token: int
    etype: str
    score: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.first_token <= self.last_token:
            raise ValueError(f"bad NER span {self.first_token}-{self.last_token}")
        if self.etype not in ENTITY_TYPES:
            raise ValueError(f"unknown entity type {self.etype!r}")
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"NER score {self.score} outside [0, 1]")

    @property
    def span(self) -> Tuple[int, int]:
        return (self.first_token, self.last_token)


@dataclass
class Ambiguity:
    span: Tuple[int, int]
    chosen: str
    candidates: List[Tuple[str, Optional[float]]]


def resolve_ner(ner: Sequence[NerPrediction], audit: Optional[List[Ambiguity]] = None) -> Dict[Tuple[int, int], str]:
    """One type per span: highest score wins, ties (and missing scores) go to input order."""
    best: Dict[Tuple[int, int], NerPrediction] = {}
    groups: Dict[Tuple[int, int], List[NerPrediction]] = {}
    for p in ner:
        groups.setdefault(p.span, []).append(p)
        cur = best.get(p.span)
        if cur is None or _score(p) > _score(cur):
            best[p.span] = p
    for span, preds in groups.items():
        if len({p.etype for p in preds}) > 1:
            rec = Ambiguity(span, best[span].etype, [(p.etype, p.score) for p in preds])
            log.info("NER ambiguity at tokens %d-%d: %s -> %s", span[0], span[1],
                     rec.candidates, rec.chosen)
            if audit is not None:
                audit.append(rec)
    return {span: p.etype for span, p in best.items()}


def _score(p: NerPrediction) -> float:
    return -1.0 if p.score is None else p.score


def inject_types(mentions: Sequence[EntityMention], ner: Sequence[NerPrediction],
                 audit: Optional[List[Ambiguity]] = None) -> List[EntityMention]:
    types = resolve_ner(ner, audit)
    return [replace(m, etype=types.get(m.span, m.etype)) for m in mentions]


def _position(m: EntityMention):
    return (m.first_token, -m.last_token)


def harmonize_chain_types(mentions: Sequence[EntityMention],
                          chains: Sequence[CorefChain]) -> List[EntityMention]:
    """Give every member of a chain the chain's modal type.

    Ties go to the earliest mention in text order whose type is among the
    tied modal types.
    """
    by_id = {m.id: m for m in mentions}
    new_type: Dict[str, str] = {}
    for c in chains:
        missing = [mid for mid in c.mentions if mid not in by_id]
        if missing:
            raise ValueError(f"chain {c.id} references unknown mentions {missing}")
        if len(c.mentions) < 2:
            continue
        members = sorted((by_id[mid] for mid in c.mentions), key=_position)
        counts = Counter(m.etype for m in members)
        top = max(counts.values())
        chosen = next(m.etype for m in members if counts[m.etype] == top)
        for m in members:
            new_type[m.id] = chosen
    return [replace(m, etype=new_type.get(m.id, m.etype)) for m in mentions]


def drop_singletons(chains: Sequence[CorefChain]) -> List[CorefChain]:
    return [c for c in chains if len(c.mentions) > 1]


def merge_entities(mentions: Sequence[EntityMention], chains: Optional[Sequence[CorefChain]],
                   ner: Sequence[NerPrediction],
                   recluster: Optional[Callable[[List[EntityMention]], List[EntityMention]]] = None,
                   audit: Optional[List[Ambiguity]] = None) -> Tuple[List[EntityMention], List[CorefChain]]:
    """inject -> (optional recluster) -> harmonize.

    ``recluster`` receives the type-injected mentions and returns mentions
    with (possibly new) chain ids, for coreferencers that use entity types as
    agreement features. Chains are rebuilt from the mentions when it is
    given or when ``chains`` is None.
    """
    typed = inject_types(mentions, ner, audit)
    if recluster is not None:
        typed = list(recluster(typed))
        chains = None
    if chains is None:
        chains = chains_from_mentions(typed)
    return harmonize_chain_types(typed, chains), list(chains)


# -- NER file: first, last, etype, score -----------------------------------------

def read_ner(f: TextIO) -> List[NerPrediction]:
    out = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#") or line.startswith("first\t"):
            continue
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise ValueError(f"line {lineno}: expected 3 or 4 columns, got {len(cols)}")
        score = float(cols[3]) if len(cols) == 4 and cols[3] not in ("", "_") else None
        out.append(NerPrediction(int(cols[0]), int(cols[1]), cols[2], score))
    return out


def write_ner(ner: Sequence[NerPrediction], f: TextIO) -> None:
    f.write("first\tlast\tetype\tscore\n")
    for p in ner:
        score = "_" if p.score is None else repr(p.score)
        f.write(f"{p.first_token}\t{p.last_token}\t{p.etype}\t{score}\n")


def load_ner(path: str) -> List[NerPrediction]:
    with open(path, encoding="utf-8") as f:
        return read_ner(f)


def save_ner(ner: Sequence[NerPrediction], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_ner(ner, f)
