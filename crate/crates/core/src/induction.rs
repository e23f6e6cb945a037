//! Lexicon induction: document-by-emotion and word-by-document matrices,
//! their product, and the final column/row normalization.
//!
//! ```text
//! M_DE[d][e] = votes(d, e) / votes(d)
//! M_WD[w][d] = count(w, d) / in-vocabulary tokens(d)
//! raw[w][e]  = sum_d M_WD[w][d] * M_DE[d][e]
//! ```
//!
//! `raw` is divided by its column sums, then each row by its row sum.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{filter_untagged, vote_percentages, Corpus, EmotionSpace, EmotionVector};
use crate::lexicon::{Lexicon, Provenance};
use crate::sparse::{DenseMatrix, SparseMatrix};
use crate::text::{build_vocabulary, term_stream, Vocabulary, WordRep};
use crate::{Error, Result};

/// The knobs that determine a lexicon for a given corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconConfig {
    pub rep: WordRep,
    pub cutoff: u64,
    pub filter_untagged: bool,
}

impl Default for LexiconConfig {
    fn default() -> Self {
        Self {
            rep: WordRep::Token,
            cutoff: 10,
            filter_untagged: true,
        }
    }
}

/// Documents × emotions matrix of vote percentages. Documents without votes
/// give an all-zero row.
pub fn build_mde(corpus: &Corpus) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(corpus.len(), corpus.space().len());
    for (d, doc) in corpus.documents().iter().enumerate() {
        if let Some(p) = vote_percentages(doc) {
            for (e, &v) in p.as_slice().iter().enumerate() {
                m.push(d, e, v);
            }
        }
    }
    m
}

/// Terms × documents matrix of relative in-vocabulary frequencies. Each
/// column sums to one unless the document has no in-vocabulary token.
pub fn build_mwd(corpus: &Corpus, vocab: &Vocabulary) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(vocab.len(), corpus.len());
    for (d, doc) in corpus.documents().iter().enumerate() {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for term in term_stream(doc, vocab.rep()) {
            if let Some(w) = vocab.index_of(&term) {
                *counts.entry(w).or_insert(0) += 1;
            }
        }
        let total: u64 = counts.values().sum();
        if total == 0 {
            continue;
        }
        let total = total as f64;
        // Documents are visited in ascending order, so rows stay sorted.
        for (w, c) in counts {
            m.push(w, d, c as f64 / total);
        }
    }
    m
}

/// Raw word-by-emotion scores `mwd · mde`, accumulated over documents in
/// ascending index order.
pub fn multiply_we(mwd: &SparseMatrix, mde: &SparseMatrix) -> Result<DenseMatrix> {
    if mwd.n_cols() != mde.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: mwd.n_cols(),
            found: mde.n_rows(),
        });
    }
    let n_emotions = mde.n_cols();
    let rows: Vec<usize> = (0..mwd.n_rows()).collect();
    let products = crate::par::map_collect(&rows, |&w| {
        let mut acc = vec![0.0; n_emotions];
        for &(d, weight) in mwd.row(w) {
            for &(e, share) in mde.row(d) {
                acc[e] += weight * share;
            }
        }
        acc
    });
    DenseMatrix::from_rows(n_emotions, &products)
}

/// Column-sum then row-sum normalization. Columns summing to zero stay zero;
/// rows left without mass come back as `None`.
pub fn normalize_we(raw: &DenseMatrix, space: &EmotionSpace) -> Result<Vec<Option<EmotionVector>>> {
    if raw.n_cols() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            found: raw.n_cols(),
        });
    }
    let n = raw.n_cols();
    let mut col_sums = vec![0.0; n];
    for row in raw.rows() {
        for (s, &v) in col_sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let out = raw
        .rows()
        .map(|row| {
            let scaled: Vec<f64> = row
                .iter()
                .zip(&col_sums)
                .map(|(&v, &s)| if s > 0.0 { v / s } else { 0.0 })
                .collect();
            let total: f64 = scaled.iter().sum();
            (total > 0.0).then(|| EmotionVector::new(scaled.into_iter().map(|v| v / total).collect()))
        })
        .collect();
    Ok(out)
}

/// Full induction pipeline. Documents are processed in id order, so the
/// result does not depend on corpus order.
pub fn build_lexicon(corpus: &Corpus, config: &LexiconConfig) -> Result<Lexicon> {
    let filtered;
    let source = if config.filter_untagged {
        filtered = filter_untagged(corpus);
        &filtered
    } else {
        corpus
    };
    if source.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let canonical = source.select(&source.indices_by_id());
    let vocab = build_vocabulary(&canonical, config.rep, config.cutoff)?;
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let mwd = build_mwd(&canonical, &vocab);
    let mde = build_mde(&canonical);
    let raw = multiply_we(&mwd, &mde)?;
    let rows = normalize_we(&raw, canonical.space())?;

    let mut entries = BTreeMap::new();
    let mut dropped = Vec::new();
    for (term, row) in vocab.terms().iter().zip(rows) {
        match row {
            Some(v) => {
                entries.insert(term.clone(), v);
            }
            None => dropped.push(String::clone(term)),
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let provenance = Provenance {
        documents: canonical.len(),
        filtered: config.filter_untagged,
        seed: None,
        vocabulary_size: vocab.len(),
        dropped_terms: dropped,
        expanded_terms: 0,
    };
    Ok(Lexicon::from_parts(
        canonical.space().clone(),
        config.rep,
        config.cutoff,
        entries,
        provenance,
    ))
}
