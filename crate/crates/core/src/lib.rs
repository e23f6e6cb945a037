//! Emotion lexicon induction from documents annotated with crowd-sourced
//! emotion vote counts.
//!
//! The crate is `no_std` (with `alloc`) and carries only the algorithms:
//!
//! - [`corpus`]: emotion spaces, vote-annotated documents, filtering and holdout splits.
//! - [`text`]: word representations and frequency-cutoff vocabularies.
//! - [`induction`]: the word-by-document / document-by-emotion pipeline producing a [`Lexicon`].
//! - [`scoring`]: averaged lexicon scores, Pearson evaluation, learning curves and sweeps.
//! - [`regress`]: lexicon-feature linear regression with k-fold CV, Gaussian naive Bayes.
//! - [`embed`]: out-of-vocabulary expansion through nearest embedding neighbours.
//!
//! File formats and the command-line driver live in the `emolex` crate.
//!
//! With the `parallel` feature, hot loops run on the ambient rayon pool.
//! Results never depend on the number of threads.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod corpus;
pub mod embed;
mod error;
pub mod induction;
mod lexicon;
mod par;
pub mod regress;
pub mod scoring;
pub mod sparse;
pub mod text;

pub use corpus::{Corpus, EmotionSpace, EmotionVector, RawDocument};
pub use error::{Error, Result};
pub use lexicon::{Lexicon, Provenance};
pub use text::{AnnotatedToken, Vocabulary, WordRep};
