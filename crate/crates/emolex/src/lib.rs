//! File formats, reports and the command-line driver around `emolex-core`.
//!
//! - [`corpus_io`]: JSONL and TSV corpora.
//! - [`lexicon_io`]: lexicon TSV files (own and published layouts) plus the
//!   metadata sidecar.
//! - [`embeddings_io`]: whitespace-separated text embeddings.
//! - [`report`]: TSV / JSONL rendering of every report with fixed 6-decimal numbers.
//! - [`cli`]: the `emolex` subcommands.

pub mod cli;
pub mod config;
pub mod corpus_io;
pub mod embeddings_io;
mod error;
pub mod lexicon_io;
pub mod report;

pub use error::{Error, Result};
