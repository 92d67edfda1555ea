//! Random forest classification and the evaluation protocol around it.
//!
//! Tree `i` of a forest draws its bootstrap sample and split features from
//! ChaCha8 seeded with `seed ^ i`, so trees can be trained in any order (or
//! in parallel) with identical results.

mod eval;
mod tree;

pub use eval::{accuracy_from_confusion, evaluate, ClassScore, EvalReport};
pub use tree::{Node, Tree};

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::par::{self, Execution};

/// Number of features examined at each split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FracRepr", into = "FracRepr")]
pub enum FeatureFrac {
    Sqrt,
    Fraction(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FracRepr {
    Name(String),
    Value(f64),
}

impl TryFrom<FracRepr> for FeatureFrac {
    type Error = String;

    fn try_from(r: FracRepr) -> std::result::Result<Self, String> {
        match r {
            FracRepr::Name(s) if s == "sqrt" => Ok(FeatureFrac::Sqrt),
            FracRepr::Name(s) => s
                .parse::<f64>()
                .map(FeatureFrac::Fraction)
                .map_err(|_| format!("unknown feature fraction `{s}`")),
            FracRepr::Value(v) => Ok(FeatureFrac::Fraction(v)),
        }
    }
}

impl From<FeatureFrac> for FracRepr {
    fn from(f: FeatureFrac) -> Self {
        match f {
            FeatureFrac::Sqrt => FracRepr::Name("sqrt".into()),
            FeatureFrac::Fraction(v) => FracRepr::Value(v),
        }
    }
}

impl FeatureFrac {
    pub fn count(self, p: usize) -> usize {
        let k = match self {
            FeatureFrac::Sqrt => (p as f64).sqrt().floor() as usize,
            FeatureFrac::Fraction(f) => (f * p as f64).floor() as usize,
        };
        k.clamp(1, p.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    pub feature_frac: FeatureFrac,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 200,
            max_depth: None,
            min_leaf: 1,
            feature_frac: FeatureFrac::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::invalid("n_trees must be >= 1"));
        }
        if self.min_leaf == 0 {
            return Err(Error::invalid("min_leaf must be >= 1"));
        }
        if self.max_depth == Some(0) {
            return Err(Error::invalid("max_depth must be >= 1"));
        }
        if let FeatureFrac::Fraction(f) = self.feature_frac {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::invalid(format!("feature fraction {f} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    /// Class names in canonical (sorted) order; trees predict indices into it.
    pub classes: Vec<String>,
    pub n_features: usize,
    pub trees: Vec<Tree>,
}

impl ForestModel {
    pub fn from_trees(classes: Vec<String>, n_features: usize, trees: Vec<Tree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::invalid("forest needs at least one tree"));
        }
        Ok(ForestModel {
            classes,
            n_features,
            trees,
        })
    }

    /// Majority vote; ties go to the class that sorts first.
    pub fn predict_row(&self, row: &[f64]) -> &str {
        let mut votes = vec![0usize; self.classes.len()];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        &self.classes[tree::argmax(&votes)]
    }
}

/// Sorted distinct labels.
pub fn canonical_classes(labels: &[String]) -> Vec<String> {
    labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn rf_train(x: &FeatureMatrix, params: &ForestParams) -> Result<ForestModel> {
    rf_train_with(x, params, Execution::default())
}

pub fn rf_train_with(x: &FeatureMatrix, params: &ForestParams, exec: Execution) -> Result<ForestModel> {
    params.validate()?;
    x.validate()?;
    if x.n_rows() < 2 {
        return Err(Error::invalid("training needs at least 2 rows"));
    }
    if x.n_cols() == 0 {
        return Err(Error::invalid("training needs at least 1 feature"));
    }
    let classes = canonical_classes(&x.labels);
    if classes.len() < 2 {
        return Err(Error::invalid("training needs at least 2 classes"));
    }
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let y: Vec<usize> = x.labels.iter().map(|l| index[l.as_str()]).collect();
    let cfg = tree::TreeConfig {
        max_depth: params.max_depth,
        min_leaf: params.min_leaf,
        mtry: params.feature_frac.count(x.n_cols()),
        n_classes: classes.len(),
    };
    let n = x.n_rows();
    let trees = par::map_range(params.n_trees, exec, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ i as u64);
        let samples = if params.bootstrap {
            (0..n).map(|_| rng.random_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        Tree::fit(&x.rows, &y, samples, &cfg, &mut rng)
    });
    ForestModel::from_trees(classes, x.n_cols(), trees)
}

pub fn rf_predict(model: &ForestModel, x: &FeatureMatrix) -> Result<Vec<String>> {
    if x.n_cols() != model.n_features {
        return Err(Error::invalid(format!(
            "matrix has {} columns, model was trained on {}",
            x.n_cols(),
            model.n_features
        )));
    }
    Ok(x.rows.iter().map(|r| model.predict_row(r).to_string()).collect())
}

/// Most frequent training label (first in sorted order on ties).
pub fn majority_baseline(labels: &[String]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (l, c) in counts {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((l, c));
        }
    }
    best.map(|(l, _)| l.to_string())
}

fn rows_by_class(labels: &[String]) -> BTreeMap<&str, Vec<usize>> {
    let mut by: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by.entry(l.as_str()).or_default().push(i);
    }
    by
}

/// Stratified split: each class contributes `round(ratio * count)` rows to
/// the training side (at least one row to each side). Returns sorted
/// (train, test) row indices.
pub fn split_indices(labels: &[String], ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!("split ratio {ratio} outside (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (label, mut rows) in rows_by_class(labels) {
        if rows.len() < 2 {
            return Err(Error::invalid(format!("class `{label}` has fewer than 2 samples")));
        }
        rows.shuffle(&mut rng);
        let k = ((ratio * rows.len() as f64).round() as usize).clamp(1, rows.len() - 1);
        train.extend_from_slice(&rows[..k]);
        test.extend_from_slice(&rows[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split_train_test(x: &FeatureMatrix, ratio: f64, seed: u64) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let (train, test) = split_indices(&x.labels, ratio, seed)?;
    Ok((x.select(&train), x.select(&test)))
}

/// Stratified fold assignment. Rows of each class are shuffled and dealt
/// round-robin; the dealing position carries over between classes so fold
/// sizes differ by at most one. Each fold is sorted.
pub fn stratified_folds(labels: &[String], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid("k-fold needs k >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut pos = 0;
    for (label, mut rows) in rows_by_class(labels) {
        if rows.len() < k {
            return Err(Error::invalid(format!(
                "class `{label}` has {} samples, fewer than k = {k}",
                rows.len()
            )));
        }
        rows.shuffle(&mut rng);
        for r in rows {
            folds[pos % k].push(r);
            pos += 1;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Out-of-fold predictions for every row (aligned with `x.rows`) and the
/// accuracy of each fold.
pub fn kfold_predictions(
    x: &FeatureMatrix,
    k: usize,
    params: &ForestParams,
    seed: u64,
) -> Result<(Vec<String>, Vec<f64>)> {
    let folds = stratified_folds(&x.labels, k, seed)?;
    let mut pred = vec![String::new(); x.n_rows()];
    let mut fold_acc = Vec::with_capacity(k);
    for (f, test_idx) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        let model = rf_train(&x.select(&train_idx), params)?;
        let p = rf_predict(&model, &x.select(test_idx))?;
        let correct = test_idx.iter().zip(&p).filter(|&(&i, l)| &x.labels[i] == l).count();
        fold_acc.push(correct as f64 / test_idx.len() as f64);
        for (&i, l) in test_idx.iter().zip(p) {
            pred[i] = l;
        }
    }
    Ok((pred, fold_acc))
}

/// Stratified k-fold cross-validation. Predictions from all folds are pooled
/// into one confusion matrix; per-fold accuracies are reported alongside.
pub fn kfold_cv(x: &FeatureMatrix, k: usize, params: &ForestParams, seed: u64) -> Result<EvalReport> {
    let (pred, fold_acc) = kfold_predictions(x, k, params, seed)?;
    let mut report = evaluate(&x.labels, &pred)?;
    report.fold_accuracies = Some(fold_acc);
    Ok(report)
}

/// Trains on a stratified split and evaluates on the held-out rows.
pub fn holdout_eval(
    x: &FeatureMatrix,
    ratio: f64,
    params: &ForestParams,
    seed: u64,
) -> Result<(EvalReport, FeatureMatrix, Vec<String>)> {
    let (train, test) = split_train_test(x, ratio, seed)?;
    let model = rf_train(&train, params)?;
    let pred = rf_predict(&model, &test)?;
    let report = evaluate(&test.labels, &pred)?;
    Ok((report, test, pred))
}
