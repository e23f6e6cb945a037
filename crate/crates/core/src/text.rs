//! Word representations and frequency-cutoff vocabularies.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::corpus::{Corpus, RawDocument};
use crate::{Error, Result};

/// PoS placeholder used when a token has a lemma but no tag.
pub const UNKNOWN_POS: &str = "X";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
}

impl AnnotatedToken {
    pub fn new(surface: impl Into<String>) -> Self {
        Self {
            surface: surface.into(),
            lemma: None,
            pos: None,
        }
    }

    pub fn with_lemma(mut self, lemma: impl Into<String>) -> Self {
        self.lemma = Some(lemma.into());
        self
    }

    pub fn with_pos(mut self, pos: impl Into<String>) -> Self {
        self.pos = Some(pos.into());
        self
    }
}

/// Granularity of the term space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordRep {
    Token,
    Lemma,
    LemmaPos,
}

impl WordRep {
    pub const ALL: [WordRep; 3] = [WordRep::Token, WordRep::Lemma, WordRep::LemmaPos];

    pub fn as_str(self) -> &'static str {
        match self {
            WordRep::Token => "token",
            WordRep::Lemma => "lemma",
            WordRep::LemmaPos => "lemma#pos",
        }
    }
}

impl fmt::Display for WordRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WordRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "token" => Ok(WordRep::Token),
            "lemma" => Ok(WordRep::Lemma),
            "lemma#pos" | "lemma_pos" | "lemmapos" | "l#p" => Ok(WordRep::LemmaPos),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown word representation {other:?} (expected token, lemma or lemma#pos)"
            ))),
        }
    }
}

/// Lowercases and strips leading and trailing non-alphanumeric characters.
/// Internal punctuation ("don't", "e-mail") is kept.
pub fn normalize_surface(s: &str) -> String {
    s.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

fn normalized_nonempty(s: Option<&str>) -> Option<String> {
    s.map(normalize_surface).filter(|t| !t.is_empty())
}

/// Maps a token to its term under `rep`, or `None` when nothing survives
/// normalization. A missing lemma falls back to the surface form and a
/// missing PoS tag to [`UNKNOWN_POS`].
pub fn to_term(tok: &AnnotatedToken, rep: WordRep) -> Option<String> {
    match rep {
        WordRep::Token => normalized_nonempty(Some(&tok.surface)),
        WordRep::Lemma => normalized_nonempty(tok.lemma.as_deref())
            .or_else(|| normalized_nonempty(Some(&tok.surface))),
        WordRep::LemmaPos => {
            let lemma = normalized_nonempty(tok.lemma.as_deref())
                .or_else(|| normalized_nonempty(Some(&tok.surface)))?;
            let pos = tok
                .pos
                .as_deref()
                .map(|p| p.trim().to_uppercase())
                .filter(|p| !p.is_empty())
                .unwrap_or_else(|| UNKNOWN_POS.into());
            Some(alloc::format!("{lemma}#{pos}"))
        }
    }
}

pub fn term_stream(doc: &RawDocument, rep: WordRep) -> Vec<String> {
    doc.tokens.iter().filter_map(|t| to_term(t, rep)).collect()
}

/// Terms whose corpus frequency reaches a cutoff, indexed densely in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    rep: WordRep,
    cutoff: u64,
    terms: Vec<String>,
    frequencies: Vec<u64>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn rep(&self) -> WordRep {
        self.rep
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn frequency(&self, term: &str) -> Option<u64> {
        self.index_of(term).map(|i| self.frequencies[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.terms.iter().map(String::as_str).zip(self.frequencies.iter().copied())
    }
}

/// Counts token occurrences of every term and keeps those with frequency
/// `>= cutoff`. A cutoff of 1 keeps hapax legomena.
pub fn build_vocabulary(corpus: &Corpus, rep: WordRep, cutoff: u64) -> Result<Vocabulary> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("frequency cutoff must be at least 1".into()));
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for doc in corpus.documents() {
        for term in term_stream(doc, rep) {
            *counts.entry(term).or_insert(0) += 1;
        }
    }
    let (terms, frequencies): (Vec<String>, Vec<u64>) =
        counts.into_iter().filter(|&(_, f)| f >= cutoff).unzip();
    let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    Ok(Vocabulary {
        rep,
        cutoff,
        terms,
        frequencies,
        index,
    })
}
