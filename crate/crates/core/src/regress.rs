//! Supervised baselines on averaged lexicon scores: multi-task linear
//! regression evaluated by k-fold cross-validation, and Gaussian naive Bayes.
//!
//! Every per-emotion model sees all N averaged scores as features.

#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{vote_percentages, Corpus};
use crate::scoring::{pearson, score_text};
use crate::text::{term_stream, WordRep};
use crate::{Error, Lexicon, Result};

pub const DEFAULT_RIDGE: f64 = 1e-6;
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Feature rows and per-emotion targets for covered, voted documents, in id order.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// `targets[i][e]`: vote share of emotion `e` in document `i`.
    pub targets: Vec<Vec<f64>>,
    /// Documents left out for lack of coverage or votes.
    pub omitted: Vec<String>,
}

impl Features {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn target_column(&self, e: usize) -> Vec<f64> {
        self.targets.iter().map(|t| t[e]).collect()
    }
}

pub fn featurize(lex: &Lexicon, docs: &Corpus, rep: WordRep) -> Result<Features> {
    if rep != lex.rep() {
        return Err(Error::RepMismatch {
            expected: lex.rep(),
            found: rep,
        });
    }
    let mut out = Features {
        ids: Vec::new(),
        rows: Vec::new(),
        targets: Vec::new(),
        omitted: Vec::new(),
    };
    for i in docs.indices_by_id() {
        let doc = &docs.documents()[i];
        let scored = score_text(lex, &term_stream(doc, rep));
        match (scored.scores, vote_percentages(doc)) {
            (Some(s), Some(g)) => {
                out.ids.push(doc.id.clone());
                out.rows.push(s.into_inner());
                out.targets.push(g.into_inner());
            }
            _ => out.omitted.push(doc.id.clone()),
        }
    }
    if out.is_empty() {
        return Err(Error::TooFewDocuments { needed: 1, found: 0 });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub ridge: f64,
}

/// Minimizes `sum (y - Xw - b)^2 + ridge * |w|^2` with an unpenalized
/// intercept, by solving the centered normal equations.
pub fn fit_linear(x: &[Vec<f64>], y: &[f64], ridge: f64) -> Result<LinearModel> {
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!("ridge must be finite and >= 0, got {ridge}")));
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let p = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, found: row.len() });
    }
    let n = x.len() as f64;
    let mut x_mean = vec![0.0; p];
    for row in x {
        for (m, &v) in x_mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    x_mean.iter_mut().for_each(|m| *m /= n);
    let y_mean = y.iter().sum::<f64>() / n;

    let mut gram = vec![vec![0.0; p]; p];
    let mut rhs = vec![0.0; p];
    let mut centered = vec![0.0; p];
    for (row, &target) in x.iter().zip(y) {
        for (c, (&v, &m)) in centered.iter_mut().zip(row.iter().zip(&x_mean)) {
            *c = v - m;
        }
        let yc = target - y_mean;
        for i in 0..p {
            rhs[i] += centered[i] * yc;
            for j in 0..=i {
                gram[i][j] += centered[i] * centered[j];
            }
        }
    }
    for i in 0..p {
        gram[i][i] += ridge;
    }
    let weights = cholesky_solve(gram, rhs, ridge == 0.0)?;
    let intercept = y_mean - weights.iter().zip(&x_mean).map(|(w, m)| w * m).sum::<f64>();
    if !intercept.is_finite() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(LinearModel { weights, intercept, ridge })
}

/// Solves `A x = b` for symmetric positive (semi)definite `A`, given by its
/// lower triangle. With `strict`, pivots that are tiny relative to the
/// diagonal count as singular.
fn cholesky_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, strict: bool) -> Result<Vec<f64>> {
    let p = b.len();
    let scale = (0..p).map(|i| a[i][i]).fold(0.0, f64::max);
    let threshold = if strict { scale * 1e-12 } else { 0.0 };
    for j in 0..p {
        let mut d = a[j][j];
        for k in 0..j {
            d -= a[j][k] * a[j][k];
        }
        if d.is_nan() || d <= threshold {
            return Err(Error::Singular);
        }
        let d = libm::sqrt(d);
        a[j][j] = d;
        for i in j + 1..p {
            let mut s = a[i][j];
            for k in 0..j {
                s -= a[i][k] * a[j][k];
            }
            a[i][j] = s / d;
        }
    }
    for i in 0..p {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i][k] * b[k];
        }
        b[i] = s / a[i][i];
    }
    for i in (0..p).rev() {
        let mut s = b[i];
        for k in i + 1..p {
            s -= a[k][i] * b[k];
        }
        b[i] = s / a[i][i];
    }
    Ok(b)
}

pub fn predict_linear(model: &LinearModel, row: &[f64]) -> Result<f64> {
    if row.len() != model.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            found: row.len(),
        });
    }
    Ok(model.intercept + model.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>())
}

/// Seeded assignment of items to `k` folds whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold index per item, aligned with the ids the plan was built from.
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    /// Items are taken in their canonical order (featurize uses id order)
    /// and shuffled with `seed` before dealing them round-robin.
    pub fn new(n_items: usize, k: usize, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(alloc::format!("need at least 2 folds, got {k}")));
        }
        if k > n_items {
            return Err(Error::TooFewDocuments { needed: k, found: n_items });
        }
        let mut order: Vec<usize> = (0..n_items).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut assignments = vec![0; n_items];
        for (pos, &item) in order.iter().enumerate() {
            assignments[item] = pos % k;
        }
        Ok(Self { k, seed, assignments })
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }

    /// `(train, held_out)` item indices for one fold.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.assignments.len()).partition(|&i| self.assignments[i] != fold)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub labels: Vec<String>,
    pub rep: WordRep,
    pub k: usize,
    pub seed: u64,
    pub ridge: f64,
    pub fold_sizes: Vec<usize>,
    /// Pearson over pooled held-out predictions, per emotion.
    pub per_emotion: Vec<Option<f64>>,
    pub average: Option<f64>,
    pub used: usize,
    pub omitted: usize,
}

/// Out-of-fold predictions for every emotion: `predictions[i][e]`.
pub fn cross_validated_predictions(features: &Features, plan: &FoldPlan, ridge: f64) -> Result<Vec<Vec<f64>>> {
    if plan.assignments.len() != features.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            found: plan.assignments.len(),
        });
    }
    let n_emotions = features.targets[0].len();
    let folds: Vec<usize> = (0..plan.k).collect();
    let per_fold = crate::par::map_collect(&folds, |&fold| -> Result<Vec<(usize, Vec<f64>)>> {
        let (train, held_out) = plan.split(fold);
        if train.len() < 2 {
            return Err(Error::TooFewDocuments { needed: 2, found: train.len() });
        }
        let x: Vec<Vec<f64>> = train.iter().map(|&i| features.rows[i].clone()).collect();
        let models = (0..n_emotions)
            .map(|e| {
                let y: Vec<f64> = train.iter().map(|&i| features.targets[i][e]).collect();
                fit_linear(&x, &y, ridge)
            })
            .collect::<Result<Vec<_>>>()?;
        held_out
            .into_iter()
            .map(|i| {
                let preds = models
                    .iter()
                    .map(|m| predict_linear(m, &features.rows[i]))
                    .collect::<Result<Vec<_>>>()?;
                Ok((i, preds))
            })
            .collect()
    });
    let mut predictions = vec![Vec::new(); features.len()];
    for fold in per_fold {
        for (i, p) in fold? {
            predictions[i] = p;
        }
    }
    Ok(predictions)
}

/// k-fold cross-validated multi-task regression. Held-out predictions of all
/// folds are pooled and correlated with the targets once per emotion.
pub fn cross_validate_regression(
    lex: &Lexicon,
    corpus: &Corpus,
    rep: WordRep,
    k: usize,
    seed: u64,
    ridge: f64,
) -> Result<CvReport> {
    let features = featurize(lex, corpus, rep)?;
    let plan = FoldPlan::new(features.len(), k, seed)?;
    let predictions = cross_validated_predictions(&features, &plan, ridge)?;
    let n = lex.space().len();
    let per_emotion: Vec<Option<f64>> = (0..n)
        .map(|e| {
            let pred: Vec<f64> = predictions.iter().map(|p| p[e]).collect();
            pearson(&pred, &features.target_column(e)).ok()
        })
        .collect();
    let average = if per_emotion.iter().all(Option::is_some) {
        Some(per_emotion.iter().flatten().sum::<f64>() / n as f64)
    } else {
        None
    };
    Ok(CvReport {
        labels: lex.space().labels().to_vec(),
        rep,
        k,
        seed,
        ridge,
        fold_sizes: plan.fold_sizes(),
        per_emotion,
        average,
        used: features.len(),
        omitted: features.omitted.len(),
    })
}

/// Class-conditional independent Gaussians with maximum-likelihood
/// parameters. Variances are floored at [`VARIANCE_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb<C> {
    pub classes: Vec<C>,
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

/// Fits on the classes that occur in `labels`, in sorted order.
pub fn fit_gnb<C: Ord + Clone>(x: &[Vec<f64>], labels: &[C]) -> Result<GaussianNb<C>> {
    let mut classes: Vec<C> = labels.to_vec();
    classes.sort();
    classes.dedup();
    fit_gnb_with_classes(x, labels, &classes)
}

/// Fits on an explicit class list; every class needs at least one row.
pub fn fit_gnb_with_classes<C: Ord + Clone>(
    x: &[Vec<f64>],
    labels: &[C],
    classes: &[C],
) -> Result<GaussianNb<C>> {
    if x.is_empty() || classes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if x.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: labels.len() });
    }
    let p = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, found: row.len() });
    }
    let index: BTreeMap<&C, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); classes.len()];
    for (row, label) in x.iter().zip(labels) {
        let c = *index
            .get(label)
            .ok_or_else(|| Error::InvalidArgument("label outside the class list".into()))?;
        members[c].push(row);
    }
    let n = x.len() as f64;
    let mut priors = Vec::with_capacity(classes.len());
    let mut means = Vec::with_capacity(classes.len());
    let mut variances = Vec::with_capacity(classes.len());
    for (c, rows) in members.iter().enumerate() {
        if rows.is_empty() {
            return Err(Error::EmptyClass(alloc::format!("#{c}")));
        }
        let m = rows.len() as f64;
        let mean: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / m).collect();
        let var: Vec<f64> = (0..p)
            .map(|j| {
                let v = rows.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum::<f64>() / m;
                v.max(VARIANCE_FLOOR)
            })
            .collect();
        priors.push(m / n);
        means.push(mean);
        variances.push(var);
    }
    Ok(GaussianNb {
        classes: classes.to_vec(),
        priors,
        means,
        variances,
    })
}

impl<C: Clone> GaussianNb<C> {
    /// Unnormalized log posterior per class.
    pub fn log_joint(&self, row: &[f64]) -> Result<Vec<f64>> {
        let p = self.means[0].len();
        if row.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: row.len() });
        }
        Ok((0..self.classes.len())
            .map(|c| {
                let mut lp = libm::log(self.priors[c]);
                for j in 0..p {
                    let var = self.variances[c][j];
                    let d = row[j] - self.means[c][j];
                    lp -= 0.5 * libm::log(2.0 * core::f64::consts::PI * var) + d * d / (2.0 * var);
                }
                lp
            })
            .collect())
    }

    pub fn predict_proba(&self, row: &[f64]) -> Result<Vec<f64>> {
        let lj = self.log_joint(row)?;
        let max = lj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = lj.iter().map(|&l| libm::exp(l - max)).collect();
        let total: f64 = exps.iter().sum();
        Ok(exps.into_iter().map(|e| e / total).collect())
    }

    /// Most probable class; the earliest class wins ties.
    pub fn predict(&self, row: &[f64]) -> Result<C> {
        let lj = self.log_joint(row)?;
        let mut best = 0;
        for (c, &l) in lj.iter().enumerate() {
            if l > lj[best] {
                best = c;
            }
        }
        Ok(self.classes[best].clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics<C> {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_f1: Vec<(C, f64)>,
}

/// Accuracy and macro-F1 over the classes seen in either input.
pub fn classify_metrics<C: Ord + Clone>(predictions: &[C], gold: &[C]) -> Result<ClassMetrics<C>> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput);
    }
    if predictions.len() != gold.len() {
        return Err(Error::DimensionMismatch { expected: gold.len(), found: predictions.len() });
    }
    // (tp, fp, fn)
    let mut counts: BTreeMap<&C, (usize, usize, usize)> = BTreeMap::new();
    let mut correct = 0;
    for (p, g) in predictions.iter().zip(gold) {
        if p == g {
            correct += 1;
            counts.entry(p).or_default().0 += 1;
        } else {
            counts.entry(p).or_default().1 += 1;
            counts.entry(g).or_default().2 += 1;
        }
    }
    let per_class_f1: Vec<(C, f64)> = counts
        .into_iter()
        .map(|(c, (tp, fp, fn_))| {
            let denom = 2 * tp + fp + fn_;
            let f1 = if denom == 0 { 0.0 } else { 2.0 * tp as f64 / denom as f64 };
            (c.clone(), f1)
        })
        .collect();
    let macro_f1 = per_class_f1.iter().map(|(_, f)| f).sum::<f64>() / per_class_f1.len() as f64;
    Ok(ClassMetrics {
        accuracy: correct as f64 / predictions.len() as f64,
        macro_f1,
        per_class_f1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyReport {
    pub rep: WordRep,
    pub k: usize,
    pub seed: u64,
    pub fold_sizes: Vec<usize>,
    pub metrics: ClassMetrics<String>,
    pub used: usize,
    pub omitted: usize,
}

/// k-fold Gaussian naive Bayes on averaged lexicon scores. The gold class of
/// a document is its most-voted emotion (earliest label on ties).
pub fn cross_validate_classification(
    lex: &Lexicon,
    corpus: &Corpus,
    rep: WordRep,
    k: usize,
    seed: u64,
) -> Result<ClassifyReport> {
    let features = featurize(lex, corpus, rep)?;
    let labels = lex.space().labels();
    let gold: Vec<String> = features
        .targets
        .iter()
        .map(|t| {
            let e = crate::corpus::EmotionVector::new(t.clone()).argmax().unwrap_or(0);
            labels[e].clone()
        })
        .collect();
    let plan = FoldPlan::new(features.len(), k, seed)?;
    let folds: Vec<usize> = (0..k).collect();
    let per_fold = crate::par::map_collect(&folds, |&fold| -> Result<Vec<(usize, String)>> {
        let (train, held_out) = plan.split(fold);
        let x: Vec<Vec<f64>> = train.iter().map(|&i| features.rows[i].clone()).collect();
        let y: Vec<String> = train.iter().map(|&i| gold[i].clone()).collect();
        let model = fit_gnb(&x, &y)?;
        held_out
            .into_iter()
            .map(|i| Ok((i, model.predict(&features.rows[i])?)))
            .collect()
    });
    let mut predicted = vec![String::new(); features.len()];
    for fold in per_fold {
        for (i, p) in fold? {
            predicted[i] = p;
        }
    }
    Ok(ClassifyReport {
        rep,
        k,
        seed,
        fold_sizes: plan.fold_sizes(),
        metrics: classify_metrics(&predicted, &gold)?,
        used: features.len(),
        omitted: features.omitted.len(),
    })
}
