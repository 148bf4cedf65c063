"""Stack-matrix assembly with held-out checks, plus token-shape features."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple

from ..corpus.model import Token
from .folds import FoldPlan
from .predictions import BasePredictions, Key

SHAPE_FEATURES = ("case", "digit", "punct", "length")


class StackMatrixError(ValueError):
    def __init__(self, message: str, token: Optional[Key] = None):
        where = f" (token {token[0]}:{token[1]})" if token is not None else ""
        super().__init__(message + where)
        self.token = token


def case_pattern(form: str) -> str:
    letters = [c for c in form if c.isalpha()]
    if not letters:
        return "none"
    if all(c.islower() for c in letters):
        return "lower"
    if all(c.isupper() for c in letters):
        return "upper" if len(letters) > 1 else "title"
    if letters[0].isupper() and all(c.islower() for c in letters[1:]):
        return "title"
    return "mixed"


def length_bucket(form: str) -> str:
    n = len(form)
    for bound, name in ((1, "1"), (3, "2-3"), (6, "4-6"), (10, "7-10")):
        if n <= bound:
            return name
    return "11+"


def shape_features(form: str) -> Tuple[str, str, str, str]:
    return (
        case_pattern(form),
        "1" if any(c.isdigit() for c in form) else "0",
        "1" if form and not any(c.isalnum() for c in form) else "0",
        length_bucket(form),
    )


@dataclass
class StackMatrix:
    tagger_names: List[str]
    keys: List[Key] = field(default_factory=list)
    tags: List[Tuple[str, ...]] = field(default_factory=list)
    forms: List[str] = field(default_factory=list)
    gold: List[str] = field(default_factory=list)

    def __len__(self):
        return len(self.keys)

    @property
    def columns(self) -> List[str]:
        return list(self.tagger_names) + list(SHAPE_FEATURES) + ["gold"]

    def feature_rows(self, tags_only: bool = False) -> List[Tuple[str, ...]]:
        if tags_only:
            return list(self.tags)
        return [t + shape_features(f) for t, f in zip(self.tags, self.forms)]

    def write_tsv(self, f: TextIO) -> None:
        f.write("doc_id\ttoken\tform\t" + "\t".join(self.columns) + "\n")
        for (doc_id, idx), tags, form, gold in zip(self.keys, self.tags, self.forms, self.gold):
            cells = [doc_id, str(idx), form, *tags, *shape_features(form), gold]
            f.write("\t".join(cells) + "\n")

    @classmethod
    def read_tsv(cls, f: TextIO) -> "StackMatrix":
        header = f.readline().rstrip("\n").split("\t")
        k = len(header) - 3 - len(SHAPE_FEATURES) - 1
        if k < 1 or header[:3] != ["doc_id", "token", "form"]:
            raise StackMatrixError("not a stack matrix file")
        m = cls(header[3:3 + k])
        for line in f:
            cells = line.rstrip("\n").split("\t")
            if len(cells) != len(header):
                continue
            m.keys.append((cells[0], int(cells[1])))
            m.forms.append(cells[2])
            m.tags.append(tuple(cells[3:3 + k]))
            m.gold.append(cells[-1])
        return m


def assemble_stack_matrix(retrained: Sequence[BasePredictions],
                          pretrained: Optional[BasePredictions],
                          gold: Mapping[str, Sequence[Token]],
                          plan: Optional[FoldPlan] = None) -> StackMatrix:
    """Build one training row per gold token.

    ``retrained`` holds one prediction set per fold, each from a model trained
    without that fold. When ``plan`` is given every fold set must carry a
    ``fold_id`` and may only cover documents the plan assigns to that fold;
    anything else means the model saw the token in training.
    """
    if not retrained and pretrained is None:
        raise StackMatrixError("no base predictions")
    names_r = list(retrained[0].tagger_names) if retrained else []
    for p in retrained:
        if list(p.tagger_names) != names_r:
            raise StackMatrixError(f"fold {p.fold_id} has tagger order {p.tagger_names}, expected {names_r}")
    names_p = list(pretrained.tagger_names) if pretrained is not None else []
    if set(names_r) & set(names_p):
        raise StackMatrixError(f"tagger names used twice: {sorted(set(names_r) & set(names_p))}")

    gold_keys = {(doc_id, t.index) for doc_id, toks in gold.items() for t in toks}

    fold_cells: Dict[Key, Tuple[str, ...]] = {}
    fold_of: Dict[Key, Optional[int]] = {}
    for p in retrained:
        if plan is not None and p.fold_id is None:
            raise StackMatrixError("fold predictions lack a fold id")
        if plan is not None and not 0 <= p.fold_id < plan.k:
            raise StackMatrixError(f"fold id {p.fold_id} outside plan of {plan.k} folds")
        for doc_id, idx, tags in p.rows:
            key = (doc_id, idx)
            if key in fold_cells:
                raise StackMatrixError(
                    f"overlap: covered by folds {fold_of[key]} and {p.fold_id}", key)
            if key not in gold_keys:
                raise StackMatrixError("prediction for a token absent from gold", key)
            if plan is not None:
                if doc_id not in plan.assignment:
                    raise StackMatrixError(f"document {doc_id!r} missing from fold plan", key)
                if plan.assignment[doc_id] != p.fold_id:
                    raise StackMatrixError(
                        f"leak: fold {p.fold_id} model trained on fold "
                        f"{plan.assignment[doc_id]} which holds this token", key)
            fold_cells[key] = tags
            fold_of[key] = p.fold_id

    pre_cells: Dict[Key, Tuple[str, ...]] = {}
    if pretrained is not None:
        for doc_id, idx, tags in pretrained.rows:
            key = (doc_id, idx)
            if key in pre_cells:
                raise StackMatrixError("overlap: pretrained predictions repeat a token", key)
            if key not in gold_keys:
                raise StackMatrixError("prediction for a token absent from gold", key)
            pre_cells[key] = tags

    m = StackMatrix(names_r + names_p)
    for doc_id, toks in gold.items():
        for t in toks:
            key = (doc_id, t.index)
            if retrained and key not in fold_cells:
                raise StackMatrixError("gap: no re-trained fold covers token", key)
            if pretrained is not None and key not in pre_cells:
                raise StackMatrixError("gap: pretrained predictions miss token", key)
            if not t.xpos:
                raise StackMatrixError("gold token has no xpos", key)
            m.keys.append(key)
            m.tags.append(fold_cells.get(key, ()) + pre_cells.get(key, ()))
            m.forms.append(t.form)
            m.gold.append(t.xpos)
    return m
