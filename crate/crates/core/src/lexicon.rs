use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{EmotionSpace, EmotionVector};
use crate::text::WordRep;
use crate::{Error, Result};

/// Build metadata carried alongside a lexicon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    /// Documents that entered the matrices.
    pub documents: usize,
    /// Whether zero-vote documents were removed first.
    pub filtered: bool,
    pub seed: Option<u64>,
    pub vocabulary_size: usize,
    /// Vocabulary terms whose normalized row had no mass.
    pub dropped_terms: Vec<String>,
    /// Entries added by embedding expansion.
    pub expanded_terms: usize,
}

/// Word-by-emotion scores: every entry is a point on the emotion simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    space: EmotionSpace,
    rep: WordRep,
    cutoff: u64,
    entries: BTreeMap<String, EmotionVector>,
    provenance: Provenance,
}

impl Lexicon {
    /// Row sums must be within this distance of one for induced lexica.
    pub const SUM_TOLERANCE: f64 = 1e-9;

    /// Validates and wraps externally supplied entries. Each vector needs one
    /// finite, non-negative component per label and must sum to one within
    /// `sum_tolerance`.
    pub fn from_entries<I>(
        space: EmotionSpace,
        rep: WordRep,
        cutoff: u64,
        entries: I,
        sum_tolerance: f64,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (String, EmotionVector)>,
    {
        let mut map = BTreeMap::new();
        for (term, vector) in entries {
            validate_row(&term, &vector, space.len(), sum_tolerance)?;
            if map.insert(term.clone(), vector).is_some() {
                return Err(Error::DuplicateId(term));
            }
        }
        let provenance = Provenance {
            vocabulary_size: map.len(),
            ..Provenance::default()
        };
        Ok(Self {
            space,
            rep,
            cutoff,
            entries: map,
            provenance,
        })
    }

    pub(crate) fn from_parts(
        space: EmotionSpace,
        rep: WordRep,
        cutoff: u64,
        entries: BTreeMap<String, EmotionVector>,
        provenance: Provenance,
    ) -> Self {
        Self {
            space,
            rep,
            cutoff,
            entries,
            provenance,
        }
    }

    pub fn space(&self) -> &EmotionSpace {
        &self.space
    }

    pub fn rep(&self) -> WordRep {
        self.rep
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn get(&self, term: &str) -> Option<&EmotionVector> {
        self.entries.get(term)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.entries.contains_key(term)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic term order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &EmotionVector)> {
        self.entries.iter().map(|(t, v)| (t.as_str(), v))
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Copy restricted to the terms for which `keep` returns true.
    pub fn retain<F: FnMut(&str) -> bool>(&self, mut keep: F) -> Lexicon {
        let entries = self
            .entries
            .iter()
            .filter(|(t, _)| keep(t))
            .map(|(t, v)| (t.clone(), v.clone()))
            .collect();
        Lexicon {
            entries,
            ..self.clone()
        }
    }

    pub(crate) fn insert_new(&mut self, term: String, vector: EmotionVector) -> bool {
        if self.entries.contains_key(&term) {
            return false;
        }
        self.entries.insert(term, vector);
        true
    }

    pub(crate) fn provenance_mut(&mut self) -> &mut Provenance {
        &mut self.provenance
    }
}

fn validate_row(term: &str, v: &EmotionVector, n: usize, tol: f64) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvalidLexicon(alloc::format!(
            "{term:?} has {} scores, expected {n}",
            v.len()
        )));
    }
    if let Some(&bad) = v.as_slice().iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidLexicon(alloc::format!(
            "{term:?} has invalid score {bad}"
        )));
    }
    let sum = v.sum();
    // Slack for summation rounding, so decimal rows like 0.99 pass at tol 0.01.
    let slack = 4.0 * f64::EPSILON * (n as f64 + 1.0);
    if (sum - 1.0).abs() > tol + slack {
        return Err(Error::InvalidLexicon(alloc::format!(
            "scores of {term:?} sum to {sum}, outside 1 ± {tol}"
        )));
    }
    Ok(())
}
