//! Lexicon-based affect scoring and the unsupervised Pearson evaluation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{seeded_order, vote_percentages, Corpus, EmotionVector};
use crate::induction::{build_lexicon, LexiconConfig};
use crate::text::{term_stream, WordRep};
use crate::{Error, Lexicon, Result};

/// Averaged lexicon scores for one text.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredText {
    /// Mean lexicon vector over covered term occurrences; `None` iff nothing is covered.
    pub scores: Option<EmotionVector>,
    pub covered: usize,
    pub total: usize,
}

impl ScoredText {
    pub fn coverage(&self) -> Option<f64> {
        (self.total > 0).then(|| self.covered as f64 / self.total as f64)
    }
}

/// Averages the lexicon vectors of every covered occurrence in `terms`.
pub fn score_text<S: AsRef<str>>(lex: &Lexicon, terms: &[S]) -> ScoredText {
    let mut acc = vec![0.0; lex.space().len()];
    let mut covered = 0usize;
    for term in terms {
        if let Some(v) = lex.get(term.as_ref()) {
            covered += 1;
            for (a, &x) in acc.iter_mut().zip(v.as_slice()) {
                *a += x;
            }
        }
    }
    let scores = (covered > 0).then(|| {
        let n = covered as f64;
        EmotionVector::new(acc.into_iter().map(|a| a / n).collect())
    });
    ScoredText {
        scores,
        covered,
        total: terms.len(),
    }
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewDocuments {
            needed: 2,
            found: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Outcome of scoring a test corpus against its gold vote percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub labels: Vec<String>,
    pub rep: WordRep,
    pub cutoff: u64,
    pub filtered: bool,
    pub lexicon_size: usize,
    /// Per-emotion correlation; `None` where a series was constant.
    pub per_emotion: Vec<Option<f64>>,
    /// Mean of `per_emotion`, defined only when every emotion is.
    pub average: Option<f64>,
    pub documents: usize,
    pub used: usize,
    pub excluded_no_votes: usize,
    pub excluded_no_coverage: usize,
    pub mean_coverage: Option<f64>,
}

fn mean_of_all(values: &[Option<f64>]) -> Option<f64> {
    let mut sum = 0.0;
    for v in values {
        sum += (*v)?;
    }
    (!values.is_empty()).then(|| sum / values.len() as f64)
}

/// Correlates averaged lexicon scores with vote percentages, one
/// coefficient per emotion. Documents without votes or without any covered
/// term are left out of the pairs and counted in the report.
pub fn evaluate(lex: &Lexicon, test: &Corpus, rep: WordRep) -> Result<EvalReport> {
    if rep != lex.rep() {
        return Err(Error::RepMismatch {
            expected: lex.rep(),
            found: rep,
        });
    }
    if test.space().labels() != lex.space().labels() {
        return Err(Error::InvalidArgument(alloc::format!(
            "test corpus labels {} differ from lexicon labels {}",
            test.space(),
            lex.space()
        )));
    }
    let order = test.indices_by_id();
    let scored = crate::par::map_collect(&order, |&i| {
        let doc = &test.documents()[i];
        (score_text(lex, &term_stream(doc, rep)), vote_percentages(doc))
    });

    let n = lex.space().len();
    let mut predicted: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut gold: Vec<Vec<f64>> = vec![Vec::new(); n];
    let (mut no_votes, mut no_coverage) = (0, 0);
    let mut coverage_sum = 0.0;
    let mut coverage_docs = 0usize;
    for (s, g) in &scored {
        if let Some(c) = s.coverage() {
            coverage_sum += c;
            coverage_docs += 1;
        }
        match (&s.scores, g) {
            (_, None) => no_votes += 1,
            (None, Some(_)) => no_coverage += 1,
            (Some(p), Some(g)) => {
                for e in 0..n {
                    predicted[e].push(p[e]);
                    gold[e].push(g[e]);
                }
            }
        }
    }
    let used = predicted[0].len();
    if used < 2 {
        return Err(Error::TooFewDocuments {
            needed: 2,
            found: used,
        });
    }
    let per_emotion: Vec<Option<f64>> = (0..n)
        .map(|e| pearson(&predicted[e], &gold[e]).ok())
        .collect();
    Ok(EvalReport {
        labels: lex.space().labels().to_vec(),
        rep,
        cutoff: lex.cutoff(),
        filtered: lex.provenance().filtered,
        lexicon_size: lex.len(),
        average: mean_of_all(&per_emotion),
        per_emotion,
        documents: test.len(),
        used,
        excluded_no_votes: no_votes,
        excluded_no_coverage: no_coverage,
        mean_coverage: (coverage_docs > 0).then(|| coverage_sum / coverage_docs as f64),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageStats {
    /// `(document id, covered/total)` in corpus order; `None` for documents without terms.
    pub per_document: Vec<(String, Option<f64>)>,
    /// Mean ratio over documents that have at least one term.
    pub mean: Option<f64>,
}

pub fn coverage_stats(lex: &Lexicon, test: &Corpus, rep: WordRep) -> CoverageStats {
    let per_document: Vec<(String, Option<f64>)> = test
        .documents()
        .iter()
        .map(|d| (d.id.clone(), score_text(lex, &term_stream(d, rep)).coverage()))
        .collect();
    let ratios: Vec<f64> = per_document.iter().filter_map(|(_, r)| *r).collect();
    let mean = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    CoverageStats { per_document, mean }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub size: usize,
    pub report: EvalReport,
}

/// Evaluates lexica built on growing random subsets of `train`. Subsets are
/// nested: each is a prefix of one seeded permutation.
pub fn learning_curve(
    train: &Corpus,
    test: &Corpus,
    config: &LexiconConfig,
    sizes: &[usize],
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("learning-curve sizes must be ascending".into()));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > train.len()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "subset size {s} outside 1..={}",
            train.len()
        )));
    }
    let order = seeded_order(train, seed);
    sizes
        .iter()
        .map(|&size| {
            let subset = train.select(&order[..size]);
            let mut lex = build_lexicon(&subset, config)?;
            lex.provenance_mut().seed = Some(seed);
            let report = evaluate(&lex, test, config.rep)?;
            Ok(CurvePoint { size, report })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub config: LexiconConfig,
    pub report: EvalReport,
}

/// Evaluates every combination of representation, cutoff and filter flag,
/// in that nesting order.
pub fn sweep(
    train: &Corpus,
    test: &Corpus,
    reps: &[WordRep],
    cutoffs: &[u64],
    filter_flags: &[bool],
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::with_capacity(reps.len() * cutoffs.len() * filter_flags.len());
    for &rep in reps {
        for &cutoff in cutoffs {
            for &filter_untagged in filter_flags {
                let config = LexiconConfig {
                    rep,
                    cutoff,
                    filter_untagged,
                };
                let lex = build_lexicon(train, &config)?;
                let report = evaluate(&lex, test, rep)?;
                cells.push(SweepCell { config, report });
            }
        }
    }
    Ok(cells)
}
