"""Surrogate analysis pipeline over a sweep dataset.

Fits the bagged-tree surrogate on the converged subset with a seeded 80/20
train/validation split, tunes depth and split size on the validation half,
and produces importance and Shapley attribution reports.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import FEATURE_NAMES
from .errors import ConfigError
from .forest import (
    Forest,
    ForestParams,
    fit_forest,
    impurity_importance,
    permutation_importance,
    split_indices,
)
from .shapley import shapley_values
from .sweep import SweepDataset

MIN_CONVERGED_ROWS = 20

TUNE_DEPTHS = (3, 5, 8, 12, None)
TUNE_MIN_SAMPLES_SPLIT = (2, 5, 10)
FINAL_N_TREES = 200
TUNE_N_TREES = 50

SHAP_BACKGROUND_SIZE = 100
SHAP_INSTANCES = 16

IMPORTANCE_CSV_HEADER = "feature,impurity_importance,permutation_importance"
SHAP_CSV_HEADER = "sample_id,feature,feature_value,feature_percentile,shap_value"


def dataset_matrices(ds: SweepDataset, target: str):
    X = ds.feature_matrix()
    y = ds.output_vector(target)
    return X, y


def tune_forest(X_tr, y_tr, X_va, y_va, seed=0) -> ForestParams:
    """Validation-MSE grid search over depth and min_samples_split.

    Tuning uses a reduced ensemble; the winning setting is refitted at full
    size by the caller.
    """
    best = None
    for depth in TUNE_DEPTHS:
        for mss in TUNE_MIN_SAMPLES_SPLIT:
            params = ForestParams(n_trees=TUNE_N_TREES, max_depth=depth, min_samples_split=mss)
            f = fit_forest(X_tr, y_tr, params, seed=seed)
            mse = float(np.mean((f.predict_batch(X_va) - y_va) ** 2))
            key = (mse, depth if depth is not None else np.inf, mss)
            if best is None or key < best[0]:
                best = (key, params)
    return replace(best[1], n_trees=FINAL_N_TREES)


@dataclass
class AnalysisResult:
    forest: Forest
    params: ForestParams
    importance: "np.ndarray"
    importance_report: object
    shap_records: list[dict]
    metrics: dict


def analyze_dataset(
    ds: SweepDataset,
    target: str,
    seed: int = 0,
    split_ratio: float = 0.8,
    shap_mode: str = "sampled",
    shap_instances: int = SHAP_INSTANCES,
    shap_permutations: int = 64,
    background_size: int = SHAP_BACKGROUND_SIZE,
) -> AnalysisResult:
    conv = ds.converged_subset()
    if len(conv) < MIN_CONVERGED_ROWS:
        raise ConfigError(
            f"insufficient data: {len(conv)} converged rows, need {MIN_CONVERGED_ROWS}"
        )
    if target not in ("w", "s_L"):
        raise ConfigError(f"unknown target {target!r}; choose 'w' or 's_L'")
    X, y = dataset_matrices(conv, target)
    tr, va = split_indices(len(conv), split_ratio, seed)
    X_tr, y_tr, X_va, y_va = X[tr], y[tr], X[va], y[va]

    params = tune_forest(X_tr, y_tr, X_va, y_va, seed=seed)
    forest = fit_forest(X_tr, y_tr, params, seed=seed)

    pred_va = forest.predict_batch(X_va)
    mse = float(np.mean((pred_va - y_va) ** 2))
    var = float(np.var(y_va))
    r2 = 1.0 - mse / var if var > 0 else float("nan")

    report = impurity_importance(forest, FEATURE_NAMES)
    report.permutation = permutation_importance(forest, X_va, y_va, seed=seed)

    rng = np.random.default_rng(seed)
    bg_idx = rng.choice(len(tr), size=min(background_size, len(tr)), replace=False)
    background = X_tr[bg_idx]
    inst_idx = va[: min(shap_instances, va.size)]
    shap_records = []
    for row_i in inst_idx:
        x = X[row_i]
        rep = shapley_values(
            forest.predict_batch, x, background, mode=shap_mode,
            k=shap_permutations, seed=seed,
        )
        for j, fname in enumerate(FEATURE_NAMES):
            pct = float(np.mean(X_tr[:, j] <= x[j]) * 100.0)
            shap_records.append({
                "sample_id": conv.rows[row_i].sample_id,
                "feature": fname,
                "feature_value": float(x[j]),
                "feature_percentile": pct,
                "shap_value": float(rep.values[j]),
            })

    metrics = {
        "target": target,
        "n_rows": len(ds),
        "n_converged": len(conv),
        "n_train": int(tr.size),
        "n_validation": int(va.size),
        "validation_mse": mse,
        "validation_r2": r2,
        "n_trees": params.n_trees,
        "max_depth": params.max_depth,
        "min_samples_split": params.min_samples_split,
        "shap_mode": shap_mode,
    }
    return AnalysisResult(
        forest=forest, params=params, importance=report.impurity,
        importance_report=report, shap_records=shap_records, metrics=metrics,
    )


def importance_to_csv(report) -> str:
    lines = [IMPORTANCE_CSV_HEADER]
    perm = report.permutation if report.permutation is not None else np.zeros_like(report.impurity)
    for name, imp, p in zip(report.feature_names, report.impurity, perm):
        lines.append("%s,%.9g,%.9g" % (name, imp, p))
    return "\n".join(lines) + "\n"


def shap_to_csv(records) -> str:
    lines = [SHAP_CSV_HEADER]
    for r in records:
        lines.append(
            "%d,%s,%.9g,%.9g,%.9g"
            % (r["sample_id"], r["feature"], r["feature_value"],
               r["feature_percentile"], r["shap_value"])
        )
    return "\n".join(lines) + "\n"
