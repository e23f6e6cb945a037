//! Vocabulary expansion through a word embedding model: an out-of-vocabulary
//! word takes the emotion vector of its nearest lexicon term under cosine
//! distance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Corpus;
use crate::scoring::{evaluate, EvalReport};
use crate::text::WordRep;
use crate::{Error, Lexicon, Result};

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    vector: Vec<f64>,
    squared_norm: f64,
}

/// Term → dense vector of a fixed dimension. Zero vectors are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    dimension: usize,
    vectors: BTreeMap<String, Entry>,
    dropped_zero_norm: usize,
    duplicates: usize,
}

/// What happened to a vector offered to [`EmbeddingModel::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inserted {
    Added,
    ZeroNorm,
    Duplicate,
}

fn squared_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

// sqrt(|u|^2 |v|^2) rather than |u| |v| so that identical vectors land on 0 exactly.
fn distance_with_norms(u: &[f64], v: &[f64], su: f64, sv: f64) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    (1.0 - dot / libm::sqrt(su * sv)).clamp(0.0, 2.0)
}

impl EmbeddingModel {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        Ok(Self {
            dimension,
            vectors: BTreeMap::new(),
            dropped_zero_norm: 0,
            duplicates: 0,
        })
    }

    pub fn from_rows<I>(dimension: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        let mut model = Self::new(dimension)?;
        for (term, vector) in rows {
            model.insert(term, vector)?;
        }
        Ok(model)
    }

    /// Adds a vector. Zero vectors are dropped and repeated terms keep their
    /// first vector; both are counted.
    pub fn insert(&mut self, term: String, vector: Vec<f64>) -> Result<Inserted> {
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: vector.len(),
            });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!("non-finite component for {term:?}")));
        }
        if self.vectors.contains_key(&term) {
            self.duplicates += 1;
            return Ok(Inserted::Duplicate);
        }
        let n = squared_norm(&vector);
        if n == 0.0 {
            self.dropped_zero_norm += 1;
            return Ok(Inserted::ZeroNorm);
        }
        self.vectors.insert(term, Entry { vector, squared_norm: n });
        Ok(Inserted::Added)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<&[f64]> {
        self.vectors.get(term).map(|e| e.vector.as_slice())
    }

    pub fn contains(&self, term: &str) -> bool {
        self.vectors.contains_key(term)
    }

    pub fn dropped_zero_norm(&self) -> usize {
        self.dropped_zero_norm
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}

/// `1 - cos(u, v)`, in `[0, 2]`.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let (nu, nv) = (squared_norm(u), squared_norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(distance_with_norms(u, v, nu, nv))
}

/// One resolved out-of-vocabulary word.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRecord {
    pub word: String,
    pub donor: String,
    pub distance: f64,
}

/// Lexicon terms that have an embedding, with cached squared norms, in term order.
#[derive(Debug)]
pub struct DonorIndex<'a> {
    donors: Vec<(&'a str, &'a [f64], f64)>,
    emb: &'a EmbeddingModel,
    ineligible: usize,
}

impl<'a> DonorIndex<'a> {
    pub fn new(lex: &'a Lexicon, emb: &'a EmbeddingModel) -> Self {
        let mut donors = Vec::new();
        let mut ineligible = 0;
        for term in lex.terms() {
            match emb.vectors.get(term) {
                Some(e) => donors.push((term, e.vector.as_slice(), e.squared_norm)),
                None => ineligible += 1,
            }
        }
        Self { donors, emb, ineligible }
    }

    /// Lexicon terms skipped for lack of an embedding.
    pub fn ineligible(&self) -> usize {
        self.ineligible
    }

    pub fn len(&self) -> usize {
        self.donors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.donors.is_empty()
    }

    /// Nearest donor of `word`; the lexicographically smallest term wins ties.
    pub fn nearest(&self, word: &str) -> Option<ExpansionRecord> {
        let query = self.emb.vectors.get(word)?;
        let mut best: Option<(&str, f64)> = None;
        for &(term, vector, n) in &self.donors {
            let d = distance_with_norms(&query.vector, vector, query.squared_norm, n);
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((term, d));
            }
        }
        best.map(|(donor, distance)| ExpansionRecord {
            word: word.into(),
            donor: donor.into(),
            distance,
        })
    }
}

pub fn nearest_in_lexicon(word: &str, lex: &Lexicon, emb: &EmbeddingModel) -> Option<ExpansionRecord> {
    DonorIndex::new(lex, emb).nearest(word)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub lexicon: Lexicon,
    /// Resolved targets in term order.
    pub records: Vec<ExpansionRecord>,
    /// Out-of-vocabulary targets without an embedding (or without any donor).
    pub unresolved: Vec<String>,
    pub ineligible_donors: usize,
}

/// Adds each out-of-vocabulary target with its nearest donor's vector.
/// Existing entries are never touched.
pub fn expand_lexicon<S: AsRef<str>>(lex: &Lexicon, emb: &EmbeddingModel, targets: &[S]) -> Expansion {
    let oov: Vec<&str> = targets
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !lex.contains(t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = DonorIndex::new(lex, emb);
    let found = crate::par::map_collect(&oov, |w| index.nearest(w));

    let mut out = lex.clone();
    let mut records = Vec::new();
    let mut unresolved = Vec::new();
    for (word, rec) in oov.into_iter().zip(found) {
        match rec {
            Some(r) => {
                let vector = lex.get(&r.donor).cloned().expect("donor comes from the lexicon");
                out.insert_new(r.word.clone(), vector);
                records.push(r);
            }
            None => unresolved.push(String::from(word)),
        }
    }
    out.provenance_mut().expanded_terms += records.len();
    Expansion {
        lexicon: out,
        records,
        unresolved,
        ineligible_donors: index.ineligible(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationPoint {
    pub fraction: f64,
    pub kept: usize,
    pub expanded_terms: usize,
    pub reduced: EvalReport,
    pub expanded: EvalReport,
}

impl AblationPoint {
    pub fn r_reduced(&self) -> Option<f64> {
        self.reduced.average
    }

    pub fn r_expanded(&self) -> Option<f64> {
        self.expanded.average
    }
}

/// For each keep fraction, evaluates a random sub-lexicon and its expansion
/// back over the removed terms. Kept sets are nested across fractions.
pub fn ablation(
    lex: &Lexicon,
    emb: &EmbeddingModel,
    test: &Corpus,
    rep: WordRep,
    keep_fractions: &[f64],
    seed: u64,
) -> Result<Vec<AblationPoint>> {
    if let Some(f) = keep_fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::InvalidArgument(alloc::format!("keep fraction {f} outside (0, 1]")));
    }
    let mut order: Vec<&str> = lex.terms().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    keep_fractions
        .iter()
        .map(|&fraction| {
            let kept = libm::round(fraction * order.len() as f64) as usize;
            if kept == 0 {
                return Err(Error::EmptyLexicon);
            }
            let keep: BTreeSet<&str> = order[..kept].iter().copied().collect();
            let mut reduced = lex.retain(|t| keep.contains(t));
            reduced.provenance_mut().seed = Some(seed);
            let removed = &order[kept..];
            let expansion = expand_lexicon(&reduced, emb, removed);
            Ok(AblationPoint {
                fraction,
                kept,
                expanded_terms: expansion.records.len(),
                reduced: evaluate(&reduced, test, rep)?,
                expanded: evaluate(&expansion.lexicon, test, rep)?,
            })
        })
        .collect()
}
