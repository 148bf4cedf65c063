"""Gradient-boosted trees over categorical features, multiclass softmax.

Each boosting round fits one regression tree per class to the gradient and
diagonal hessian of the softmax cross-entropy. Splits are categorical
equality tests (``x[f] == c`` goes left) chosen by the usual second-order
gain; leaf weights are ``-G / (H + lambda)`` scaled by the learning rate.
Trees are grown level by level with histogram sums from ``np.bincount``,
so training is exactly reproducible for a given seed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np


@dataclass
class GBDTParams:
    n_rounds: int = 100
    max_depth: int = 4
    learning_rate: float = 0.1
    reg_lambda: float = 1.0
    min_child_weight: float = 1e-3
    min_split_gain: float = 0.0
    subsample: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_rounds < 0 or self.max_depth < 0:
            raise ValueError("n_rounds and max_depth must be >= 0")
        if not 0 < self.learning_rate <= 1:
            raise ValueError("learning_rate must be in (0, 1]")
        if not 0 < self.subsample <= 1:
            raise ValueError("subsample must be in (0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


class Tree:
    """Flat array tree; ``feature[i] == -1`` marks a leaf."""

    def __init__(self, feature, category, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.category = np.asarray(category, dtype=np.int64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    def __len__(self):
        return len(self.feature)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            f = self.feature[node]
            active = np.nonzero(f >= 0)[0]
            if len(active) == 0:
                return node
            cur = node[active]
            go_left = X[active, f[active]] == self.category[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self) -> dict:
        return {"feature": self.feature.tolist(), "category": self.category.tolist(),
                "left": self.left.tolist(), "right": self.right.tolist(),
                "value": self.value.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(d["feature"], d["category"], d["left"], d["right"], d["value"])


def _offsets(ncats: Sequence[int]) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(ncats)[:-1]]).astype(np.int64)


def build_tree(X: np.ndarray, g: np.ndarray, h: np.ndarray, ncats: Sequence[int],
               params: GBDTParams, Xoff: Optional[np.ndarray] = None):
    """Grow one tree; returns ``(tree, leaf index per row of X)``.

    ``Xoff`` is ``X`` with each column shifted by its category offset so all
    features share one histogram; it is recomputed when not supplied.
    """
    n, nfeat = X.shape
    lam = params.reg_lambda
    ncats = np.asarray(ncats, dtype=np.int64)
    offsets = _offsets(ncats)
    total = int(ncats.sum())
    if Xoff is None:
        Xoff = X + offsets
    # a category code belongs to a splittable feature only if it has >= 2 values
    col_feature = np.repeat(np.arange(nfeat), ncats)
    usable = np.repeat(ncats >= 2, ncats)

    feature, category, left, right, value = [-1], [-1], [-1], [-1], [0.0]
    row_node = np.zeros(n, dtype=np.int64)
    frontier = [0]

    def node_sums(nodes):
        local = np.full(len(feature), -1, dtype=np.int64)
        local[nodes] = np.arange(len(nodes))
        loc = local[row_node]
        rows = np.nonzero(loc >= 0)[0]
        lr = loc[rows]
        G = np.bincount(lr, weights=g[rows], minlength=len(nodes))
        H = np.bincount(lr, weights=h[rows], minlength=len(nodes))
        return rows, lr, G, H

    for _ in range(params.max_depth):
        if not frontier or total == 0:
            break
        m = len(frontier)
        rows, lr, G, H = node_sums(frontier)
        keys = (lr[:, None] * total + Xoff[rows]).ravel()
        GL = np.bincount(keys, weights=np.repeat(g[rows], nfeat), minlength=m * total).reshape(m, total)
        HL = np.bincount(keys, weights=np.repeat(h[rows], nfeat), minlength=m * total).reshape(m, total)
        GR = G[:, None] - GL
        HR = H[:, None] - HL
        gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - (G * G / (H + lam))[:, None])
        ok = (HL >= params.min_child_weight) & (HR >= params.min_child_weight) & usable
        gain = np.where(ok, gain, -np.inf)
        best = np.argmax(gain, axis=1)
        top = gain[np.arange(m), best]
        split = top > params.min_split_gain + 1e-12
        best_f = np.where(split, col_feature[best], -1)
        best_c = np.where(split, best - offsets[col_feature[best]], -1)

        new_frontier = []
        left_of = np.full(m, -1, dtype=np.int64)
        right_of = np.full(m, -1, dtype=np.int64)
        for j, node in enumerate(frontier):
            if not split[j]:
                value[node] = float(-G[j] / (H[j] + lam) * params.learning_rate)
                continue
            feature[node], category[node] = int(best_f[j]), int(best_c[j])
            left_of[j], right_of[j] = len(feature), len(feature) + 1
            for _side in range(2):
                feature.append(-1)
                category.append(-1)
                left.append(-1)
                right.append(-1)
                value.append(0.0)
            left[node], right[node] = int(left_of[j]), int(right_of[j])
            new_frontier.extend([left[node], right[node]])
        moving = split[lr]
        r, l = rows[moving], lr[moving]
        go_left = X[r, best_f[l]] == best_c[l]
        row_node[r] = np.where(go_left, left_of[l], right_of[l])
        frontier = new_frontier

    if frontier:
        _, _, G, H = node_sums(frontier)
        for j, node in enumerate(frontier):
            value[node] = float(-G[j] / (H[j] + lam) * params.learning_rate)
    return Tree(feature, category, left, right, value), row_node


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class Booster:
    def __init__(self, n_classes: int, ncats: Sequence[int], base_score: Sequence[float],
                 trees: Optional[List[List[Tree]]] = None, params: Optional[GBDTParams] = None):
        self.n_classes = int(n_classes)
        self.ncats = [int(c) for c in ncats]
        self.base_score = np.asarray(base_score, dtype=np.float64)
        self.trees = trees or []
        self.params = params or GBDTParams()

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, n_classes: int, ncats: Sequence[int],
            params: Optional[GBDTParams] = None) -> "Booster":
        params = params or GBDTParams()
        X = np.asarray(X, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if len(X) == 0:
            raise ValueError("cannot fit on an empty matrix")
        counts = np.bincount(y, minlength=n_classes).astype(np.float64)
        base = np.log((counts + 1e-3) / (counts.sum() + 1e-3 * n_classes))
        booster = cls(n_classes, ncats, base, [], params)
        if n_classes < 2:
            return booster
        rng = np.random.default_rng(params.seed)
        margin = np.tile(base, (len(X), 1))
        Xoff = X + _offsets(ncats)
        onehot = np.eye(n_classes)[y]
        for _ in range(params.n_rounds):
            p = softmax(margin)
            grad = p - onehot
            hess = np.maximum(p * (1.0 - p), 1e-16)
            if params.subsample < 1.0:
                take = np.sort(rng.choice(len(X), max(1, int(round(params.subsample * len(X)))), replace=False))
            else:
                take = None
            round_trees = []
            for c in range(n_classes):
                if take is None:
                    tree, leaves = build_tree(X, grad[:, c], hess[:, c], ncats, params, Xoff)
                    margin[:, c] += tree.value[leaves]
                else:
                    tree, _ = build_tree(X[take], grad[take, c], hess[take, c], ncats, params, Xoff[take])
                    margin[:, c] += tree.predict(X)
                round_trees.append(tree)
            booster.trees.append(round_trees)
        return booster

    def margin(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        out = np.tile(self.base_score, (len(X), 1))
        for round_trees in self.trees:
            for c, tree in enumerate(round_trees):
                out[:, c] += tree.predict(X)
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.margin(X), axis=1)

    def to_dict(self) -> dict:
        return {"n_classes": self.n_classes, "ncats": self.ncats,
                "base_score": self.base_score.tolist(), "params": self.params.to_dict(),
                "trees": [[t.to_dict() for t in r] for r in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "Booster":
        return cls(d["n_classes"], d["ncats"], d["base_score"],
                   [[Tree.from_dict(t) for t in r] for r in d["trees"]],
                   GBDTParams(**d["params"]))
