//! Text embeddings: an optional `count dimension` header line, then one
//! `term v1 v2 ... vD` line per word.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use emolex_core::embed::EmbeddingModel;

use crate::{Error, Result};

pub fn load_embeddings(path: &Path) -> Result<EmbeddingModel> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(BufReader::new(file), &path.display().to_string())
}

fn header(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let count = parts.next()?.parse().ok()?;
    let dim = parts.next()?.parse().ok()?;
    parts.next().is_none().then_some((count, dim))
}

pub fn read_embeddings<R: BufRead>(reader: R, source_name: &str) -> Result<EmbeddingModel> {
    let mut model: Option<EmbeddingModel> = None;
    let mut declared_count = None;
    let mut rows = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        if model.is_none() && declared_count.is_none() {
            if let Some((count, dim)) = header(&line) {
                model = Some(EmbeddingModel::new(dim).map_err(|e| Error::parse(source_name, lineno, e.to_string()))?);
                declared_count = Some(count);
                continue;
            }
        }
        let mut parts = line.split_whitespace();
        let term = parts.next().expect("line is not blank");
        let values = parts
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::parse(source_name, lineno, format!("unparsable value: {e}")))?;
        let m = match &mut model {
            Some(m) => m,
            None => model.insert(
                EmbeddingModel::new(values.len()).map_err(|e| Error::parse(source_name, lineno, e.to_string()))?,
            ),
        };
        m.insert(term.to_owned(), values)
            .map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
        rows += 1;
    }
    if let Some(count) = declared_count {
        if count != rows {
            return Err(Error::parse(
                source_name,
                1,
                format!("header declares {count} vectors, file has {rows}"),
            ));
        }
    }
    model.ok_or_else(|| Error::parse(source_name, 1, "no vectors"))
}
