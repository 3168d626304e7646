"""
Baselines, binary collapse, and the regression view
---------------------------------------------------

Three smaller tools round out the evaluation protocol:

* a LIX-only classifier (the single-feature baseline),
* the binary collapse of a 5-level confusion matrix into <=B1 vs >B1,
* ridge linear regression on the ordinal level encoding, scored by Pearson
  correlation and RMSE.
"""

import numpy as np

from cefrlab import (
    CefrLevel,
    ExtractionContext,
    GenConfig,
    collapse_binary,
    corpus_features,
    cross_validate,
    generate_corpus,
    load_category_map,
    load_kelly,
    load_senses,
    parse_corpus,
    pearson,
    select_feature_group,
    stratified_folds,
    train_linreg,
    train_mlr,
)

bundle = generate_corpus(GenConfig(seed=11, docs_per_level=30, standalone_per_level=0))
corpus = parse_corpus(bundle.corpus)
ctx = ExtractionContext(
    kelly=load_kelly(bundle.kelly),
    senses=load_senses(bundle.senses),
    category_map=load_category_map(bundle.category_map),
)
ids, levels, X = corpus_features(corpus, ctx, unit="text")
plan = stratified_folds(levels, k=10, seed=42)

# The LIX baseline is the same logistic model restricted to feature #5.
lix_only = X[:, [4]]
lix_cv = cross_validate(lix_only, levels, lambda Xt, yt: train_mlr(Xt, yt), plan)
all_cv = cross_validate(X, levels, lambda Xt, yt: train_mlr(Xt, yt), plan)
print(f"LIX-only accuracy {lix_cv.report.accuracy:.3f}  vs  all features {all_cv.report.accuracy:.3f}")

# Collapse the 5x5 matrix into a binary low/high decision at B1.
binary = collapse_binary(all_cv.confusion, split=CefrLevel.B1)
print("\nbinary collapse (<=B1 vs >B1):")
print(f"  counts      {binary.counts.tolist()}")
print(f"  accuracy    {binary.accuracy:.3f}")
print(f"  precision   low {binary.precision_low:.3f}, high {binary.precision_high:.3f}")

# Regression view: predict the ordinal level (A1=1 .. C1=5) directly.
reg = train_linreg(X, levels, ridge=1e-6)
predictions = reg.predict(X)
golds = np.array([float(int(level)) for level in levels])
r = pearson(predictions, golds)
rmse = float(np.sqrt(np.mean((predictions - golds) ** 2)))
print(f"\nlinear regression: r = {r:.3f}, RMSE = {rmse:.3f} (in levels)")
print(f"sample predictions: {np.round(predictions[:5], 2).tolist()} for golds {golds[:5].tolist()}")
