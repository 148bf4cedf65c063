from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

Key = Tuple[str, int]


class PredictionFormatError(ValueError):
    pass


@dataclass
class BasePredictions:
    """Token-aligned tag columns from ``K`` base taggers.

    ``rows`` holds ``(doc_id, token_ordinal, tags)`` with ``tags`` in
    ``tagger_names`` order.
    """

    tagger_names: List[str]
    rows: List[Tuple[str, int, Tuple[str, ...]]] = field(default_factory=list)
    fold_id: Optional[int] = None
    forms: Optional[List[str]] = None

    def __post_init__(self):
        if not self.tagger_names:
            raise PredictionFormatError("need at least one tagger")
        if len(set(self.tagger_names)) != len(self.tagger_names):
            raise PredictionFormatError(f"duplicate tagger names {self.tagger_names}")
        k = len(self.tagger_names)
        for doc_id, idx, tags in self.rows:
            if len(tags) != k:
                raise PredictionFormatError(f"token {doc_id}:{idx} has {len(tags)} tags, expected {k}")
        if self.forms is not None and len(self.forms) != len(self.rows):
            raise PredictionFormatError("forms not aligned with rows")

    @property
    def k(self) -> int:
        return len(self.tagger_names)

    def keys(self) -> List[Key]:
        return [(d, i) for d, i, _ in self.rows]

    def column(self, name: str) -> List[str]:
        j = self.tagger_names.index(name)
        return [tags[j] for _, _, tags in self.rows]

    def for_doc(self, doc_id: str) -> "BasePredictions":
        keep = [k for k, r in enumerate(self.rows) if r[0] == doc_id]
        return BasePredictions(list(self.tagger_names), [self.rows[k] for k in keep], self.fold_id,
                               None if self.forms is None else [self.forms[k] for k in keep])

    @classmethod
    def from_columns(cls, tagger_names: Sequence[str], columns: Sequence[Sequence[str]],
                     doc_id: str = "doc", forms: Optional[Sequence[str]] = None,
                     fold_id: Optional[int] = None) -> "BasePredictions":
        n = len(columns[0]) if columns else 0
        if any(len(c) != n for c in columns):
            raise PredictionFormatError("columns differ in length")
        rows = [(doc_id, i, tuple(c[i] for c in columns)) for i in range(n)]
        return cls(list(tagger_names), rows, fold_id, None if forms is None else list(forms))


def read_predictions(f: TextIO, tagger_order: Optional[Sequence[str]] = None,
                     fold_id: Optional[int] = None) -> BasePredictions:
    """Pivot a long TSV (doc id, token ordinal, tagger name, xpos) to K columns."""
    cells: Dict[Key, Dict[str, str]] = {}
    order: List[Key] = []
    seen_taggers: List[str] = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#") or line.startswith("doc_id\t"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise PredictionFormatError(f"line {lineno}: expected 4 columns, got {len(cols)}")
        doc_id, idx, tagger, tag = cols
        key = (doc_id, int(idx))
        if key not in cells:
            cells[key] = {}
            order.append(key)
        if tagger in cells[key]:
            raise PredictionFormatError(f"line {lineno}: duplicate prediction by {tagger} for {doc_id}:{idx}")
        cells[key][tagger] = tag
        if tagger not in seen_taggers:
            seen_taggers.append(tagger)
    names = list(tagger_order) if tagger_order is not None else seen_taggers
    rows = []
    for key in order:
        missing = [t for t in names if t not in cells[key]]
        if missing:
            raise PredictionFormatError(f"token {key[0]}:{key[1]} lacks predictions from {missing}")
        extra = set(cells[key]) - set(names)
        if extra:
            raise PredictionFormatError(f"token {key[0]}:{key[1]} has predictions from unknown {sorted(extra)}")
        rows.append((key[0], key[1], tuple(cells[key][t] for t in names)))
    return BasePredictions(names, rows, fold_id)


def write_predictions(preds: BasePredictions, f: TextIO) -> None:
    f.write("doc_id\ttoken\ttagger\txpos\n")
    for doc_id, idx, tags in preds.rows:
        for name, tag in zip(preds.tagger_names, tags):
            f.write(f"{doc_id}\t{idx}\t{name}\t{tag}\n")


def load_predictions(path: str, tagger_order=None, fold_id=None) -> BasePredictions:
    with open(path, encoding="utf-8") as f:
        return read_predictions(f, tagger_order, fold_id)


def save_predictions(preds: BasePredictions, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_predictions(preds, f)


def merge_predictions(parts: Iterable[BasePredictions]) -> BasePredictions:
    parts = list(parts)
    names = parts[0].tagger_names
    rows = []
    for p in parts:
        if p.tagger_names != names:
            raise PredictionFormatError("cannot merge predictions with different tagger order")
        rows.extend(p.rows)
    return BasePredictions(list(names), rows)
