from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple


@dataclass
class FoldPlan:
    k: int
    assignment: Dict[str, int]

    def docs_in(self, fold: int) -> List[str]:
        return sorted(d for d, f in self.assignment.items() if f == fold)

    def training_docs(self, fold: int) -> List[str]:
        """Documents a model held out on ``fold`` is trained on."""
        return sorted(d for d, f in self.assignment.items() if f != fold)

    def to_dict(self) -> dict:
        return {"k": self.k, "assignment": dict(sorted(self.assignment.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> "FoldPlan":
        return cls(int(data["k"]), {str(d): int(f) for d, f in data["assignment"].items()})


def make_folds(docs: Iterable[Tuple[str, str]], k: int = 5, seed: int = 0) -> FoldPlan:
    """Genre-stratified, document-level k-fold assignment.

    Each genre's documents are shuffled and dealt round-robin; the dealing
    position carries over from one genre to the next (genres in sorted order)
    so overall fold sizes stay balanced as well.
    """
    docs = list(docs)
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > len(docs):
        raise ValueError(f"cannot split {len(docs)} documents into {k} folds")
    ids = [d for d, _ in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate document ids")
    by_genre: Dict[str, List[str]] = {}
    for doc_id, genre in docs:
        by_genre.setdefault(str(genre), []).append(doc_id)
    rng = random.Random(seed)
    assignment = {}
    pos = 0
    for genre in sorted(by_genre):
        members = sorted(by_genre[genre])
        rng.shuffle(members)
        for doc_id in members:
            assignment[doc_id] = pos % k
            pos += 1
    return FoldPlan(k, assignment)
