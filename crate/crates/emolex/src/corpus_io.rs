//! Corpus files.
//!
//! JSONL: a header `{"labels": [...]}` followed by one record per document,
//! `{"id": "...", "tokens": [{"t": "...", "l": "...", "p": "..."}], "votes": {"label": n}}`.
//!
//! TSV: `id<TAB>raw text<TAB>label:count,label:count`, whitespace-tokenized.
//! An optional first line `#labels<TAB>l1<TAB>l2...` fixes the label order;
//! otherwise labels are taken in order of first appearance.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use emolex_core::{AnnotatedToken, Corpus, EmotionSpace, RawDocument};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Tsv,
}

impl CorpusFormat {
    /// `.tsv`/`.txt` files are TSV, everything else JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("txt") => CorpusFormat::Tsv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "tsv" => Ok(CorpusFormat::Tsv),
            _ => Err(format!("unknown corpus format {s:?}")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    labels: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TokenRecord {
    t: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocRecord {
    id: String,
    #[serde(default)]
    tokens: Vec<TokenRecord>,
    votes: BTreeMap<String, u64>,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), format, &path.display().to_string())
}

pub fn read_corpus<R: BufRead>(reader: R, format: CorpusFormat, source_name: &str) -> Result<Corpus> {
    match format {
        CorpusFormat::Jsonl => read_jsonl(reader, source_name),
        CorpusFormat::Tsv => read_tsv(reader, source_name),
    }
}

fn with_line(source_name: &str, line: usize) -> impl Fn(emolex_core::Error) -> Error + '_ {
    move |e| Error::parse(source_name, line, e.to_string())
}

fn read_jsonl<R: BufRead>(reader: R, source_name: &str) -> Result<Corpus> {
    let mut space: Option<EmotionSpace> = None;
    let mut documents = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let Some(space) = &space else {
            let header: Header = serde_json::from_str(&line)
                .map_err(|e| Error::parse(source_name, lineno, format!("malformed header: {e}")))?;
            space = Some(EmotionSpace::new(header.labels).map_err(with_line(source_name, lineno))?);
            continue;
        };
        let record: DocRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(source_name, lineno, format!("malformed record: {e}")))?;
        let votes = space
            .dense_votes(&record.id, record.votes.iter().map(|(k, &v)| (k.as_str(), v)))
            .map_err(with_line(source_name, lineno))?;
        if !ids.insert(record.id.clone()) {
            return Err(with_line(source_name, lineno)(emolex_core::Error::DuplicateId(record.id)));
        }
        let tokens = record
            .tokens
            .into_iter()
            .map(|t| AnnotatedToken { surface: t.t, lemma: t.l, pos: t.p })
            .collect();
        documents.push(RawDocument::new(record.id, tokens, votes));
    }
    let space = space.ok_or_else(|| Error::parse(source_name, 1, "missing header with labels"))?;
    Ok(Corpus::new(space, documents)?)
}

fn parse_vote_pairs<'a>(field: &'a str, source_name: &str, lineno: usize) -> Result<Vec<(&'a str, u64)>> {
    field
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (label, count) = pair
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(source_name, lineno, format!("vote {pair:?} is not label:count")))?;
            let count = count
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(source_name, lineno, format!("bad vote count in {pair:?}")))?;
            Ok((label.trim(), count))
        })
        .collect()
}

fn read_tsv<R: BufRead>(reader: R, source_name: &str) -> Result<Corpus> {
    let mut declared: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#labels") {
            if declared.is_some() || !rows.is_empty() {
                return Err(Error::parse(source_name, lineno, "#labels must be the first line"));
            }
            declared = Some(rest.split('\t').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect());
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let pairs = parse_vote_pairs(fields[2], source_name, lineno)?
            .into_iter()
            .map(|(l, c)| (l.to_owned(), c))
            .collect::<Vec<_>>();
        rows.push((lineno, fields[0].to_owned(), fields[1].to_owned(), pairs));
    }
    let labels = match declared {
        Some(l) => l,
        None => {
            let mut seen = Vec::<String>::new();
            for (_, _, _, pairs) in &rows {
                for (l, _) in pairs {
                    if !seen.contains(l) {
                        seen.push(l.clone());
                    }
                }
            }
            seen
        }
    };
    let space = EmotionSpace::new(labels).map_err(with_line(source_name, 1))?;
    let mut ids = std::collections::BTreeSet::new();
    let mut documents = Vec::with_capacity(rows.len());
    for (lineno, id, text, pairs) in rows {
        let votes = space
            .dense_votes(&id, pairs.iter().map(|(l, c)| (l.as_str(), *c)))
            .map_err(with_line(source_name, lineno))?;
        if !ids.insert(id.clone()) {
            return Err(with_line(source_name, lineno)(emolex_core::Error::DuplicateId(id)));
        }
        let tokens = text.split_whitespace().map(AnnotatedToken::new).collect();
        documents.push(RawDocument::new(id, tokens, votes));
    }
    Ok(Corpus::new(space, documents)?)
}

/// Writes the JSONL layout. Zero vote counts are omitted from the votes map.
pub fn write_corpus_jsonl<W: Write>(mut out: W, corpus: &Corpus) -> std::io::Result<()> {
    let header = Header { labels: corpus.space().labels().to_vec() };
    writeln!(out, "{}", serde_json::to_string(&header)?)?;
    for doc in corpus.documents() {
        let record = DocRecord {
            id: doc.id.clone(),
            tokens: doc
                .tokens
                .iter()
                .map(|t| TokenRecord { t: t.surface.clone(), l: t.lemma.clone(), p: t.pos.clone() })
                .collect(),
            votes: corpus
                .space()
                .labels()
                .iter()
                .zip(&doc.votes)
                .filter(|(_, &v)| v > 0)
                .map(|(l, &v)| (l.clone(), v))
                .collect(),
        };
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(())
}

pub fn save_corpus_jsonl(path: &Path, corpus: &Corpus) -> Result<()> {
    let mut buf = Vec::new();
    write_corpus_jsonl(&mut buf, corpus).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
