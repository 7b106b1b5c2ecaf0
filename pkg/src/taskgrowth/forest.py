"""Regression trees and bagged forests, built from first principles.

CART with the MSE criterion, bootstrap bagging with per-split feature
subsampling, impurity and permutation importances, and a seeded train/
validation split.  Trees are also flattened to arrays for fast batch
prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, ModelDomainError


@dataclass
class TreeNode:
    """Internal node (feature, threshold, children) or leaf (value, count)."""

    value: float
    count: int
    feature: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 200
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    features_per_split: int | None = None  # default: ceil(n_features / 3)
    bootstrap: bool = True


def _sse(csum, csq, n):
    # sum of squared deviations from the mean, via prefix sums
    return csq - csum * csum / n


def _best_split(X, y, idx, feats, min_leaf):
    """Best (feature, threshold, score) on the index subset; ties resolve to
    the lowest feature index, then the lowest threshold."""
    n = idx.size
    best = None  # (score, feature, threshold)
    for f in feats:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[idx][order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        k = np.arange(1, n)
        valid = xs[1:] > xs[:-1]
        if min_leaf > 1:
            valid &= (k >= min_leaf) & (n - k >= min_leaf)
        if not np.any(valid):
            continue
        sse_l = np.maximum(_sse(csum[:-1], csq[:-1], k), 0.0)
        sse_r = np.maximum(
            _sse(csum[-1] - csum[:-1], csq[-1] - csq[:-1], n - k), 0.0
        )
        score = sse_l + sse_r
        score[~valid] = np.inf
        j = int(np.argmin(score))  # first occurrence -> lowest threshold
        s = float(score[j])
        if best is None or s < best[0]:
            thr = 0.5 * (xs[j] + xs[j + 1])
            best = (s, int(f), float(thr), order, j + 1)
    return best


def fit_tree(features, targets, params: ForestParams = ForestParams(), seed=0,
             importance_out=None):
    """Greedy CART regression tree minimizing within-node SSE.

    Split candidates are midpoints between consecutive distinct values of the
    (possibly subsampled) features.  Deterministic given the seed.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ModelDomainError("empty-data: need a non-empty 2-D feature matrix")
    if X.shape[0] != y.shape[0]:
        raise ModelDomainError("feature/target length mismatch")
    rng = np.random.default_rng(seed)
    n_features = X.shape[1]
    m = params.features_per_split or math.ceil(n_features / 3)
    m = min(m, n_features)
    max_depth = params.max_depth if params.max_depth is not None else np.inf

    def build(idx, depth):
        yn = y[idx]
        n = idx.size
        node = TreeNode(value=float(yn.mean()), count=n)
        if depth >= max_depth or n < params.min_samples_split or n < 2 * params.min_samples_leaf:
            return node
        if m < n_features:
            feats = np.sort(rng.choice(n_features, size=m, replace=False))
        else:
            feats = np.arange(n_features)
        best = _best_split(X, y, idx, feats, params.min_samples_leaf)
        if best is None:
            return node
        score, f, thr, order, n_left = best
        sse_parent = float(np.sum((yn - yn.mean()) ** 2))
        gain = sse_parent - score
        if gain <= 0.0:
            return node
        if importance_out is not None:
            importance_out[f] += gain
        node.feature = f
        node.threshold = thr
        ordered = idx[order]
        node.left = build(ordered[:n_left], depth + 1)
        node.right = build(ordered[n_left:], depth + 1)
        return node

    return build(np.arange(X.shape[0]), 0)


def _flatten(root: TreeNode):
    """Breadth-first array form: feature (-1 for leaf), threshold, left, right, value."""
    nodes = [root]
    i = 0
    while i < len(nodes):
        nd = nodes[i]
        if not nd.is_leaf:
            nodes.append(nd.left)
            nodes.append(nd.right)
        i += 1
    index = {id(nd): j for j, nd in enumerate(nodes)}
    feat = np.array([nd.feature for nd in nodes], dtype=np.int64)
    thr = np.array([nd.threshold for nd in nodes])
    left = np.array([index[id(nd.left)] if not nd.is_leaf else 0 for nd in nodes], dtype=np.int64)
    right = np.array([index[id(nd.right)] if not nd.is_leaf else 0 for nd in nodes], dtype=np.int64)
    val = np.array([nd.value for nd in nodes])
    return feat, thr, left, right, val


@dataclass
class Forest:
    """Bagged ensemble; prediction is the arithmetic mean of tree outputs."""

    trees: list[TreeNode]
    params: ForestParams
    n_features: int
    tree_seeds: list[int]
    impurity_gains: np.ndarray  # raw SSE-reduction sums per feature
    _flat: tuple | None = field(default=None, repr=False)

    def _stacked(self):
        if self._flat is None:
            feats, thrs, lefts, rights, vals, roots = [], [], [], [], [], []
            off = 0
            for tr in self.trees:
                f, t, l, r, v = _flatten(tr)
                feats.append(f)
                thrs.append(t)
                lefts.append(l + off)
                rights.append(r + off)
                vals.append(v)
                roots.append(off)
                off += f.size
            self._flat = (
                np.concatenate(feats), np.concatenate(thrs), np.concatenate(lefts),
                np.concatenate(rights), np.concatenate(vals), np.array(roots, dtype=np.int64),
            )
        return self._flat

    def predict_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ModelDomainError(
                f"arity-mismatch: expected {self.n_features} features, got {X.shape[1]}"
            )
        feat, thr, left, right, val, roots = self._stacked()
        n_rows = X.shape[0]
        cur = np.broadcast_to(roots[:, None], (roots.size, n_rows)).copy()
        rows = np.arange(n_rows)[None, :]
        while True:
            f = feat[cur]
            internal = f >= 0
            if not internal.any():
                break
            xf = X[np.broadcast_to(rows, cur.shape), np.where(internal, f, 0)]
            go_left = xf <= thr[cur]
            nxt = np.where(go_left, left[cur], right[cur])
            cur = np.where(internal, nxt, cur)
        return val[cur].mean(axis=0)


def fit_forest(features, targets, params: ForestParams = ForestParams(), seed=0) -> Forest:
    """Fit n_trees CART trees on bootstrap resamples with per-split feature
    subsampling.  Deterministic given the seed."""
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ModelDomainError("empty-data: need at least 2 rows to fit a forest")
    n, d = X.shape
    seeds = np.random.SeedSequence(seed).generate_state(2 * params.n_trees)
    trees = []
    gains = np.zeros(d)
    tree_seeds = []
    for i in range(params.n_trees):
        boot_rng = np.random.default_rng(int(seeds[2 * i]))
        tree_seed = int(seeds[2 * i + 1])
        if params.bootstrap:
            idx = boot_rng.integers(0, n, size=n)
            Xb, yb = X[idx], y[idx]
        else:
            Xb, yb = X, y
        trees.append(fit_tree(Xb, yb, params, seed=tree_seed, importance_out=gains))
        tree_seeds.append(tree_seed)
    return Forest(trees=trees, params=params, n_features=d,
                  tree_seeds=tree_seeds, impurity_gains=gains)


def predict(forest: Forest, x) -> float:
    """Ensemble prediction for a single feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != forest.n_features:
        raise ModelDomainError(
            f"arity-mismatch: expected {forest.n_features} features, got {x.size}"
        )
    return float(forest.predict_batch(x[None, :])[0])


@dataclass
class ImportanceReport:
    feature_names: list[str]
    impurity: np.ndarray             # normalized; sums to 1 when any split exists
    permutation: np.ndarray | None = None
    no_splits: bool = False


def impurity_importance(forest: Forest, feature_names=None) -> ImportanceReport:
    """Per-feature total SSE reduction across all splits, normalized to sum 1."""
    gains = forest.impurity_gains.copy()
    total = gains.sum()
    names = list(feature_names) if feature_names is not None else [
        f"x{i}" for i in range(forest.n_features)
    ]
    if total <= 0.0:
        return ImportanceReport(names, np.zeros_like(gains), no_splits=True)
    return ImportanceReport(names, gains / total)


def permutation_importance(forest: Forest, X, y, seed=0, n_repeats=5) -> np.ndarray:
    """Mean MSE increase when one feature column is shuffled (validation-style)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    base_mse = float(np.mean((forest.predict_batch(X) - y) ** 2))
    out = np.zeros(X.shape[1])
    for f in range(X.shape[1]):
        deltas = []
        for _ in range(n_repeats):
            Xp = X.copy()
            Xp[:, f] = Xp[rng.permutation(X.shape[0]), f]
            mse = float(np.mean((forest.predict_batch(Xp) - y) ** 2))
            deltas.append(mse - base_mse)
        out[f] = float(np.mean(deltas))
    return out


def split_indices(n: int, ratio: float, seed=0):
    """Seeded shuffle-then-split of range(n); both sides must be non-empty."""
    if not (0.0 < ratio < 1.0):
        raise ConfigError("split ratio must lie in (0, 1)")
    n_train = int(round(n * ratio))
    if n_train == 0 or n_train == n:
        raise ConfigError("degenerate split: one side would be empty")
    perm = np.random.default_rng(seed).permutation(n)
    return perm[:n_train], perm[n_train:]


def train_val_split(dataset, ratio: float, seed=0):
    """Split a SweepDataset (or any row list) into disjoint, exhaustive halves."""
    rows = dataset.rows if hasattr(dataset, "rows") else list(dataset)
    tr, va = split_indices(len(rows), ratio, seed)
    cls = type(dataset) if hasattr(dataset, "rows") else list
    if hasattr(dataset, "rows"):
        return cls([rows[i] for i in tr]), cls([rows[i] for i in va])
    return [rows[i] for i in tr], [rows[i] for i in va]
