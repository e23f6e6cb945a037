//! Lexicon TSV files and their metadata sidecar.
//!
//! Written layout: `term<TAB>label1<TAB>...<TAB>labelN`, then one row per term
//! in lexicographic order with 6-decimal scores. The reader also accepts the
//! published layout, whose first header cell may be empty and which may end
//! with a `freq` column; that column is ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use emolex_core::{EmotionSpace, EmotionVector, Lexicon, Provenance, WordRep};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default row-sum tolerance when reading lexicon files. Scores printed with
/// two decimals can be off by up to 0.01 per row.
pub const FILE_SUM_TOLERANCE: f64 = 0.01;

/// Sidecar metadata, stored next to the lexicon as `<file>.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconMeta {
    pub labels: Vec<String>,
    pub rep: String,
    pub cutoff: u64,
    pub filtered: bool,
    pub seed: Option<u64>,
    pub documents: usize,
    pub vocabulary_size: usize,
    pub entries: usize,
    pub dropped_terms: usize,
    pub expanded_terms: usize,
    /// Resolved configuration of the run that wrote the file.
    #[serde(default)]
    pub config: serde_json::Value,
}

impl LexiconMeta {
    pub fn describe(lex: &Lexicon, config: serde_json::Value) -> Self {
        let p = lex.provenance();
        Self {
            labels: lex.space().labels().to_vec(),
            rep: lex.rep().to_string(),
            cutoff: lex.cutoff(),
            filtered: p.filtered,
            seed: p.seed,
            documents: p.documents,
            vocabulary_size: p.vocabulary_size,
            entries: lex.len(),
            dropped_terms: p.dropped_terms.len(),
            expanded_terms: p.expanded_terms,
            config,
        }
    }
}

pub fn meta_path(lexicon_path: &Path) -> PathBuf {
    let mut s = lexicon_path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn format_score(x: f64) -> String {
    format!("{x:.6}")
}

pub fn write_lexicon_tsv<W: Write>(mut out: W, lex: &Lexicon) -> std::io::Result<()> {
    write!(out, "term")?;
    for label in lex.space().labels() {
        write!(out, "\t{label}")?;
    }
    writeln!(out)?;
    for (term, v) in lex.iter() {
        write!(out, "{term}")?;
        for &x in v.as_slice() {
            write!(out, "\t{}", format_score(x))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Writes the lexicon and its sidecar.
pub fn save_lexicon(path: &Path, lex: &Lexicon, config: serde_json::Value) -> Result<()> {
    let mut buf = Vec::new();
    write_lexicon_tsv(&mut buf, lex).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))?;
    let meta = LexiconMeta::describe(lex, config);
    let mut json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    json.push('\n');
    let mp = meta_path(path);
    std::fs::write(&mp, json).map_err(|e| Error::io(mp, e))
}

/// Options for reading a lexicon file.
#[derive(Debug, Clone, Copy)]
pub struct ReadOptions {
    pub rep: WordRep,
    pub cutoff: u64,
    pub sum_tolerance: f64,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self {
            rep: WordRep::Token,
            cutoff: 1,
            sum_tolerance: FILE_SUM_TOLERANCE,
        }
    }
}

pub fn read_lexicon<R: BufRead>(reader: R, opts: ReadOptions, source_name: &str) -> Result<Lexicon> {
    let mut lines = reader.lines().enumerate();
    let (labels, freq_column) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::parse(source_name, 1, "missing header"));
        };
        let line = line.map_err(|e| Error::parse(source_name, i + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut cells: Vec<String> = line.trim_end_matches(['\r', '\n']).split('\t').skip(1).map(|c| c.trim().to_owned()).collect();
        let freq = cells.last().is_some_and(|c| c.eq_ignore_ascii_case("freq"));
        if freq {
            cells.pop();
        }
        break (cells, freq);
    };
    let n = labels.len();
    let space = EmotionSpace::new(labels).map_err(|e| Error::parse(source_name, 1, e.to_string()))?;
    let width = n + 1 + usize::from(freq_column);
    let mut entries = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != width {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("expected {width} columns, found {}", cells.len()),
            ));
        }
        let scores = cells[1..=n]
            .iter()
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::parse(source_name, lineno, format!("bad score: {e}")))?;
        entries.push((cells[0].to_owned(), EmotionVector::new(scores)));
    }
    let lex = Lexicon::from_entries(space, opts.rep, opts.cutoff, entries, opts.sum_tolerance)?;
    Ok(lex)
}

/// Reads a lexicon file. When a sidecar exists, representation, cutoff and
/// provenance come from it and `opts.rep`/`opts.cutoff` are ignored.
pub fn load_lexicon(path: &Path, opts: ReadOptions) -> Result<Lexicon> {
    let mp = meta_path(path);
    let meta = if mp.exists() {
        let text = std::fs::read_to_string(&mp).map_err(|e| Error::io(&mp, e))?;
        Some(
            serde_json::from_str::<LexiconMeta>(&text)
                .map_err(|e| Error::parse(&mp.display().to_string(), e.line(), e.to_string()))?,
        )
    } else {
        None
    };
    let mut opts = opts;
    if let Some(m) = &meta {
        opts.rep = m.rep.parse()?;
        opts.cutoff = m.cutoff;
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let lex = read_lexicon(BufReader::new(file), opts, &path.display().to_string())?;
    Ok(match meta {
        Some(m) => {
            if m.labels != lex.space().labels() {
                return Err(Error::Config(format!(
                    "{}: labels disagree with the lexicon header",
                    mp.display()
                )));
            }
            let provenance = Provenance {
                documents: m.documents,
                filtered: m.filtered,
                seed: m.seed,
                vocabulary_size: m.vocabulary_size,
                dropped_terms: Vec::new(),
                expanded_terms: m.expanded_terms,
            };
            lex.with_provenance(provenance)
        }
        None => lex,
    })
}
