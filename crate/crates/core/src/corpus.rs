//! Emotion spaces, vote-annotated documents and corpus-level operations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::text::AnnotatedToken;
use crate::{Error, Result};

/// Ordered set of emotion labels. Component `i` of every emotion vector
/// derived from a corpus refers to `labels()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmotionSpace {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl EmotionSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace("empty label set".into()));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidSpace("at least two labels are required".into()));
        }
        let mut index = BTreeMap::new();
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidSpace("empty label".into()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidSpace(alloc::format!("duplicate label {label:?}")));
            }
        }
        Ok(Self { labels, index })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Dense vote counts in label order from `(label, count)` pairs.
    /// Labels missing from `pairs` count as zero; repeated labels add up.
    pub fn dense_votes<'a, I>(&self, doc_id: &str, pairs: I) -> Result<Vec<u64>>
    where
        I: IntoIterator<Item = (&'a str, u64)>,
    {
        let mut votes = alloc::vec![0u64; self.len()];
        for (label, count) in pairs {
            let i = self.index_of(label).ok_or_else(|| Error::UnknownLabel {
                doc: doc_id.to_string(),
                label: label.to_string(),
            })?;
            votes[i] += count;
        }
        Ok(votes)
    }
}

/// A point on the emotion simplex (or, for raw data, any non-negative vector)
/// with one component per label of an [`EmotionSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionVector(Vec<f64>);

impl EmotionVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Index of the largest component; the first one wins ties.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in self.0.iter().enumerate() {
            match best {
                Some((_, b)) if v <= b => {}
                _ => best = Some((i, v)),
            }
        }
        best.map(|(i, _)| i)
    }
}

impl Index<usize> for EmotionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A document: annotated tokens plus integer reader votes, one count per label.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDocument {
    pub id: String,
    pub tokens: Vec<AnnotatedToken>,
    pub votes: Vec<u64>,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, tokens: Vec<AnnotatedToken>, votes: Vec<u64>) -> Self {
        Self {
            id: id.into(),
            tokens,
            votes,
        }
    }

    pub fn total_votes(&self) -> u64 {
        self.votes.iter().sum()
    }
}

/// Vote-annotated documents over one emotion space. Document ids are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    space: EmotionSpace,
    documents: Vec<RawDocument>,
}

impl Corpus {
    pub fn new(space: EmotionSpace, documents: Vec<RawDocument>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for doc in &documents {
            if doc.votes.len() != space.len() {
                return Err(Error::DimensionMismatch {
                    expected: space.len(),
                    found: doc.votes.len(),
                });
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Self { space, documents })
    }

    pub fn space(&self) -> &EmotionSpace {
        &self.space
    }

    pub fn documents(&self) -> &[RawDocument] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Document indices ordered by id. All order-sensitive reductions and
    /// random draws go through this order so results ignore file order.
    pub fn indices_by_id(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.documents.len()).collect();
        idx.sort_by(|&a, &b| self.documents[a].id.cmp(&self.documents[b].id));
        idx
    }

    /// Sub-corpus made of the given documents, in the order given.
    pub(crate) fn select(&self, indices: &[usize]) -> Corpus {
        Corpus {
            space: self.space.clone(),
            documents: indices.iter().map(|&i| self.documents[i].clone()).collect(),
        }
    }

    fn retain_mask(&self, keep: &[bool]) -> Corpus {
        Corpus {
            space: self.space.clone(),
            documents: self
                .documents
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(d, _)| d.clone())
                .collect(),
        }
    }
}

/// Drops documents whose votes are all zero, keeping order.
pub fn filter_untagged(corpus: &Corpus) -> Corpus {
    let keep: Vec<bool> = corpus.documents.iter().map(|d| d.total_votes() > 0).collect();
    corpus.retain_mask(&keep)
}

/// Vote counts divided by their total, or `None` when nobody voted.
pub fn vote_percentages(doc: &RawDocument) -> Option<EmotionVector> {
    let total = doc.total_votes();
    if total == 0 {
        return None;
    }
    let total = total as f64;
    Some(EmotionVector(
        doc.votes.iter().map(|&v| v as f64 / total).collect(),
    ))
}

/// Seeded random permutation of the corpus' documents, drawn over the
/// id-sorted order so that it does not depend on file order.
pub(crate) fn seeded_order(corpus: &Corpus, seed: u64) -> Vec<usize> {
    let mut idx = corpus.indices_by_id();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    idx
}

/// Splits into `(train, test)` with `round(fraction * len)` test documents.
/// Both parts keep the corpus' document order.
pub fn split_holdout(corpus: &Corpus, holdout_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(holdout_fraction > 0.0 && holdout_fraction < 1.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "holdout fraction must lie in (0, 1), got {holdout_fraction}"
        )));
    }
    let n = corpus.len();
    if n < 2 {
        return Err(Error::TooFewDocuments { needed: 2, found: n });
    }
    let n_test = libm::round(holdout_fraction * n as f64) as usize;
    if n_test == 0 || n_test == n {
        return Err(Error::InvalidArgument(alloc::format!(
            "holdout fraction {holdout_fraction} leaves an empty partition of {n} documents"
        )));
    }
    let order = seeded_order(corpus, seed);
    let mut in_test = alloc::vec![false; n];
    for &i in &order[..n_test] {
        in_test[i] = true;
    }
    let in_train: Vec<bool> = in_test.iter().map(|t| !t).collect();
    Ok((corpus.retain_mask(&in_train), corpus.retain_mask(&in_test)))
}

impl fmt::Display for EmotionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(l)?;
        }
        f.write_str("]")
    }
}
