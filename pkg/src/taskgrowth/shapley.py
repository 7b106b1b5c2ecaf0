"""Shapley feature attributions for a black-box regressor.

Interventional value functions: f_S(x) is the mean prediction over a
background sample with the features in S taken from x and the rest from the
background row.  Exact mode enumerates all coalitions with the classic
combinatorial weights; sampled mode averages marginal contributions over
random feature orderings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ModelDomainError

EXACT_MODE_MAX_FEATURES = 16


@dataclass
class ShapReport:
    values: np.ndarray       # one attribution per feature
    base_value: float        # prediction with no features known (background mean)
    prediction: float        # model output at x
    mode: str


def _coalition_values(predict_fn, x, background, masks, chunk=128):
    """v(S) for each bitmask in masks, batching predict calls."""
    B = background
    nb, d = B.shape
    out = np.empty(len(masks))
    for start in range(0, len(masks), chunk):
        batch = masks[start:start + chunk]
        comp = np.repeat(B[None, :, :], len(batch), axis=0)  # (batch, nb, d)
        for bi, mask in enumerate(batch):
            for j in range(d):
                if mask >> j & 1:
                    comp[bi, :, j] = x[j]
        preds = np.asarray(predict_fn(comp.reshape(-1, d)))
        out[start:start + len(batch)] = preds.reshape(len(batch), nb).mean(axis=1)
    return out


def shapley_values(predict_fn, x, background_rows, mode="exact", k=64, seed=0) -> ShapReport:
    """Per-feature attributions for the prediction at x.

    mode='exact' enumerates all 2^n coalitions (n <= 16); mode='sampled'
    averages marginal contributions over k seeded random permutations.
    Either way base_value + sum(values) telescopes to the prediction at x
    (exactly in exact mode, in expectation when sampled).
    """
    x = np.asarray(x, dtype=float).ravel()
    B = np.atleast_2d(np.asarray(background_rows, dtype=float))
    if B.shape[0] == 0:
        raise ConfigError("empty-background: need at least one background row")
    if B.shape[1] != x.size:
        raise ModelDomainError("background arity does not match x")
    n = x.size

    if mode == "exact":
        if n > EXACT_MODE_MAX_FEATURES:
            raise ConfigError(
                f"too-many-features: exact mode supports up to {EXACT_MODE_MAX_FEATURES}"
            )
        masks = list(range(1 << n))
        v = _coalition_values(predict_fn, x, B, masks)
        fact = [math.factorial(i) for i in range(n + 1)]
        n_fact = fact[n]
        phi = np.zeros(n)
        for S in range(1 << n):
            s = bin(S).count("1")
            for i in range(n):
                if S >> i & 1:
                    continue
                wgt = fact[s] * fact[n - s - 1] / n_fact
                phi[i] += wgt * (v[S | (1 << i)] - v[S])
        base = float(v[0])
        pred = float(v[(1 << n) - 1])
        return ShapReport(values=phi, base_value=base, prediction=pred, mode="exact")

    if mode == "sampled":
        if k < 1:
            raise ConfigError("sampled mode needs k >= 1 permutations")
        rng = np.random.default_rng(seed)
        base = float(np.asarray(predict_fn(B)).mean())
        pred = float(np.asarray(predict_fn(x[None, :]))[0])
        phi = np.zeros(n)
        for _ in range(k):
            perm = rng.permutation(n)
            masks = []
            mask = 0
            for i in perm:
                mask |= 1 << int(i)
                masks.append(mask)
            v = _coalition_values(predict_fn, x, B, masks)
            prev = base
            for pos, i in enumerate(perm):
                phi[int(i)] += v[pos] - prev
                prev = v[pos]
        phi /= k
        return ShapReport(values=phi, base_value=base, prediction=pred, mode="sampled")

    raise ConfigError(f"unknown shapley mode {mode!r}")
