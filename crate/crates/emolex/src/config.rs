//! Run configuration: command-line flags, optionally layered over a TOML
//! file (`--config`). Flags win over file values; defaults fill the rest.

use std::path::{Path, PathBuf};

use clap::Args;
use emolex_core::regress::DEFAULT_RIDGE;
use emolex_core::WordRep;
use serde::{Deserialize, Serialize};

use crate::corpus_io::CorpusFormat;
use crate::lexicon_io::FILE_SUM_TOLERANCE;
use crate::report::Format;
use crate::{Error, Result};

pub const DEFAULT_CUTOFF: u64 = 10;
pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_KEEP_FRACTIONS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

fn parse_rep(s: &str) -> std::result::Result<WordRep, String> {
    s.parse().map_err(|e: emolex_core::Error| e.to_string())
}

mod rep_serde {
    use emolex_core::WordRep;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<WordRep>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(r.as_str()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<WordRep>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

mod reps_serde {
    use emolex_core::WordRep;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<WordRep>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.collect_seq(r.iter().map(|x| x.as_str())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<WordRep>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

/// Every knob of every subcommand. Each command reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Opts {
    /// Training (or scoring) corpus.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    /// Corpus file format; guessed from the extension when absent.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus_format: Option<CorpusFormat>,
    /// Held-out test corpus.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<PathBuf>,
    /// Lexicon TSV file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    /// Text embeddings file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embeddings: Option<PathBuf>,
    /// File with one expansion target per line.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<PathBuf>,
    /// Also expand every out-of-vocabulary term of the test (or scoring) corpus.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_oov: Option<bool>,

    /// Word representation: token, lemma or lemma#pos.
    #[arg(long, value_parser = parse_rep)]
    #[serde(with = "rep_serde", skip_serializing_if = "Option::is_none")]
    pub rep: Option<WordRep>,
    /// Representations for `sweep`, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_rep)]
    #[serde(with = "reps_serde", skip_serializing_if = "Option::is_none")]
    pub reps: Option<Vec<WordRep>>,
    /// Minimum corpus frequency of a term.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<u64>>,
    /// Drop documents without votes before building.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter_untagged: Option<bool>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filters: Option<Vec<bool>>,
    /// Fraction of the corpus held out for testing.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout: Option<f64>,
    /// Seed for every random choice; mandatory for randomized commands.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of cross-validation folds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub folds: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ridge: Option<f64>,
    /// Lexicon fractions kept in `ablate`, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keep_fractions: Option<Vec<f64>>,
    /// Training-subset sizes for `curve`, comma separated and ascending.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    /// Allowed deviation of a lexicon row sum from one when reading files.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_tolerance: Option<f64>,

    /// Main output file (report, or lexicon for `build`/`expand`); stdout when absent.
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Where `expand` writes its word/donor/distance records.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<PathBuf>,
    /// Where `build --holdout` writes the held-out documents.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// TOML file with any of the options above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),* $(,)?) => {
        Opts { $($f: $top.$f.or($base.$f),)* }
    };
}

impl Opts {
    /// `self` over `file`: every field set on the command line wins.
    pub fn over(self, file: Opts) -> Opts {
        overlay!(
            file, self, corpus, corpus_format, test, lexicon, embeddings, targets, test_oov, rep, reps,
            cutoff, cutoffs, filter_untagged, filters, holdout, seed, folds, ridge, keep_fractions, sizes,
            sum_tolerance, output, records, test_out, format, threads, config,
        )
    }

    /// Reads `--config` if given and layers the flags over it.
    pub fn resolve(self) -> Result<Opts> {
        match self.config.clone() {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let file: Opts = toml::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Ok(self.over(file))
            }
            None => Ok(self),
        }
    }

    pub fn rep(&self) -> WordRep {
        self.rep.unwrap_or(WordRep::Token)
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff.unwrap_or(DEFAULT_CUTOFF)
    }

    pub fn filter_untagged(&self) -> bool {
        self.filter_untagged.unwrap_or(true)
    }

    pub fn folds(&self) -> usize {
        self.folds.unwrap_or(DEFAULT_FOLDS)
    }

    pub fn ridge(&self) -> f64 {
        self.ridge.unwrap_or(DEFAULT_RIDGE)
    }

    pub fn sum_tolerance(&self) -> f64 {
        self.sum_tolerance.unwrap_or(FILE_SUM_TOLERANCE)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn corpus_format_for(&self, path: &Path) -> CorpusFormat {
        self.corpus_format.unwrap_or_else(|| CorpusFormat::from_path(path))
    }

    pub fn require<'a, T>(value: &'a Option<T>, flag: &str, command: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::Config(format!("`{command}` needs --{flag}")))
    }

    pub fn seed_for(&self, command: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config(format!("`{command}` is randomized and needs an explicit --seed")))
    }

    /// The configuration echoed into reports: what the command actually used,
    /// with defaults filled in. Output locations and thread count are left
    /// out so they cannot change the bytes of a report.
    pub fn echo(&self, command: &str) -> serde_json::Value {
        let mut shown = self.clone();
        shown.output = None;
        shown.records = None;
        shown.test_out = None;
        shown.threads = None;
        shown.format = None;
        shown.config = None;
        let mut v = serde_json::to_value(&shown).expect("options serialize");
        let obj = v.as_object_mut().expect("options are a map");
        obj.insert("command".into(), command.into());
        obj.sort_keys();
        v
    }
}
