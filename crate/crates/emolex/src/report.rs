//! Report rendering. Every report starts with the resolved run
//! configuration and prints numbers with exactly six decimals, so two runs
//! with the same inputs produce identical bytes.

use emolex_core::embed::{AblationPoint, ExpansionRecord};
use emolex_core::regress::{ClassifyReport, CvReport};
use emolex_core::scoring::{CurvePoint, EvalReport, ScoredText, SweepCell};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Num(Option<f64>),
    Bool(bool),
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(Some(x)) => fixed(*x),
            Cell::Num(None) => "NA".into(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Num(Some(x)) => fixed_json(*x),
            Cell::Num(None) => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

pub fn fixed(x: f64) -> String {
    // "-0.000000" and "0.000000" must not depend on the sign of a rounding residue.
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn fixed_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str(&fixed(x)).expect("fixed-point decimal is valid JSON")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new<S: Into<String>>(name: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Value,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Self { config, sections: Vec::new() }
    }

    pub fn with(mut self, section: Section) -> Self {
        self.sections.push(section);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.render_tsv(),
            Format::Jsonl => self.render_jsonl(),
        }
    }

    fn render_tsv(&self) -> String {
        let mut out = format!("#config\t{}\n", serde_json::to_string(&self.config).expect("json"));
        for s in &self.sections {
            out.push_str(&format!("#section\t{}\n", s.name));
            out.push_str(&s.columns.join("\t"));
            out.push('\n');
            for row in &s.rows {
                let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        out
    }

    fn render_jsonl(&self) -> String {
        let mut first = Map::new();
        first.insert("record".into(), Value::from("config"));
        first.insert("config".into(), self.config.clone());
        let mut out = serde_json::to_string(&Value::Object(first)).expect("json");
        out.push('\n');
        for s in &self.sections {
            for row in &s.rows {
                let mut obj = Map::new();
                obj.insert("record".into(), Value::from(s.name.as_str()));
                for (c, cell) in s.columns.iter().zip(row) {
                    obj.insert(c.clone(), cell.json());
                }
                out.push_str(&serde_json::to_string(&Value::Object(obj)).expect("json"));
                out.push('\n');
            }
        }
        out
    }
}

pub fn eval_sections(r: &EvalReport) -> Vec<Section> {
    let mut emotions = Section::new("emotion", ["label", "r"]);
    for (label, v) in r.labels.iter().zip(&r.per_emotion) {
        emotions.push(vec![label.as_str().into(), (*v).into()]);
    }
    let mut summary = Section::new(
        "summary",
        [
            "rep",
            "cutoff",
            "filtered",
            "lexicon_size",
            "average_r",
            "documents",
            "used",
            "excluded_no_votes",
            "excluded_no_coverage",
            "mean_coverage",
        ],
    );
    summary.push(vec![
        r.rep.as_str().into(),
        r.cutoff.into(),
        r.filtered.into(),
        r.lexicon_size.into(),
        r.average.into(),
        r.documents.into(),
        r.used.into(),
        r.excluded_no_votes.into(),
        r.excluded_no_coverage.into(),
        r.mean_coverage.into(),
    ]);
    vec![emotions, summary]
}

fn with_labels<'a>(fixed_cols: &[&'a str], labels: &'a [String]) -> Vec<String> {
    fixed_cols
        .iter()
        .map(|s| s.to_string())
        .chain(labels.iter().map(|l| format!("r_{l}")))
        .collect()
}

pub fn curve_section(points: &[CurvePoint]) -> Section {
    let labels = points.first().map(|p| p.report.labels.clone()).unwrap_or_default();
    let mut s = Section::new("curve", with_labels(&["size", "average_r", "lexicon_size", "used", "mean_coverage"], &labels));
    for p in points {
        let mut row: Vec<Cell> = vec![
            p.size.into(),
            p.report.average.into(),
            p.report.lexicon_size.into(),
            p.report.used.into(),
            p.report.mean_coverage.into(),
        ];
        row.extend(p.report.per_emotion.iter().map(|&r| Cell::from(r)));
        s.push(row);
    }
    s
}

pub fn sweep_section(cells: &[SweepCell]) -> Section {
    let labels = cells.first().map(|c| c.report.labels.clone()).unwrap_or_default();
    let mut s = Section::new(
        "sweep",
        with_labels(&["rep", "cutoff", "filtered", "lexicon_size", "average_r", "mean_coverage"], &labels),
    );
    for c in cells {
        let mut row: Vec<Cell> = vec![
            c.config.rep.as_str().into(),
            c.config.cutoff.into(),
            c.config.filter_untagged.into(),
            c.report.lexicon_size.into(),
            c.report.average.into(),
            c.report.mean_coverage.into(),
        ];
        row.extend(c.report.per_emotion.iter().map(|&r| Cell::from(r)));
        s.push(row);
    }
    s
}

fn fold_section(sizes: &[usize]) -> Section {
    let mut s = Section::new("fold", ["fold", "size"]);
    for (i, &n) in sizes.iter().enumerate() {
        s.push(vec![i.into(), n.into()]);
    }
    s
}

pub fn cv_sections(r: &CvReport) -> Vec<Section> {
    let mut emotions = Section::new("emotion", ["label", "r"]);
    for (label, v) in r.labels.iter().zip(&r.per_emotion) {
        emotions.push(vec![label.as_str().into(), (*v).into()]);
    }
    let mut summary = Section::new("summary", ["rep", "k", "seed", "ridge", "average_r", "used", "omitted", "pooling"]);
    summary.push(vec![
        r.rep.as_str().into(),
        r.k.into(),
        r.seed.into(),
        r.ridge.into(),
        r.average.into(),
        r.used.into(),
        r.omitted.into(),
        "pooled".into(),
    ]);
    vec![emotions, summary, fold_section(&r.fold_sizes)]
}

pub fn classify_sections(r: &ClassifyReport) -> Vec<Section> {
    let mut summary = Section::new("summary", ["rep", "k", "seed", "accuracy", "macro_f1", "used", "omitted"]);
    summary.push(vec![
        r.rep.as_str().into(),
        r.k.into(),
        r.seed.into(),
        r.metrics.accuracy.into(),
        r.metrics.macro_f1.into(),
        r.used.into(),
        r.omitted.into(),
    ]);
    let mut classes = Section::new("class", ["class", "f1"]);
    for (c, f) in &r.metrics.per_class_f1 {
        classes.push(vec![c.as_str().into(), (*f).into()]);
    }
    vec![summary, classes, fold_section(&r.fold_sizes)]
}

pub fn ablation_section(points: &[AblationPoint]) -> Section {
    let mut s = Section::new(
        "ablation",
        [
            "fraction",
            "kept",
            "expanded_terms",
            "r_reduced",
            "r_expanded",
            "coverage_reduced",
            "coverage_expanded",
        ],
    );
    for p in points {
        s.push(vec![
            p.fraction.into(),
            p.kept.into(),
            p.expanded_terms.into(),
            p.r_reduced().into(),
            p.r_expanded().into(),
            p.reduced.mean_coverage.into(),
            p.expanded.mean_coverage.into(),
        ]);
    }
    s
}

pub fn score_section(labels: &[String], scored: &[(String, ScoredText)]) -> Section {
    let cols: Vec<String> = ["id", "status", "covered", "total"]
        .iter()
        .map(|s| s.to_string())
        .chain(labels.iter().cloned())
        .collect();
    let mut s = Section::new("score", cols);
    for (id, st) in scored {
        let mut row: Vec<Cell> = vec![
            id.as_str().into(),
            if st.scores.is_some() { "ok" } else { "no-coverage" }.into(),
            st.covered.into(),
            st.total.into(),
        ];
        match &st.scores {
            Some(v) => row.extend(v.as_slice().iter().map(|&x| Cell::from(x))),
            None => row.extend(labels.iter().map(|_| Cell::Num(None))),
        }
        s.push(row);
    }
    s
}

pub fn expansion_section(records: &[ExpansionRecord], unresolved: &[String]) -> Section {
    let mut s = Section::new("expansion", ["word", "donor", "distance"]);
    for r in records {
        s.push(vec![r.word.as_str().into(), r.donor.as_str().into(), r.distance.into()]);
    }
    for w in unresolved {
        s.push(vec![w.as_str().into(), "".into(), Cell::Num(None)]);
    }
    s
}

/// Plain `word<TAB>donor<TAB>distance` listing of resolved expansions.
pub fn records_tsv(records: &[ExpansionRecord]) -> String {
    let mut out = String::from("word\tdonor\tdistance\n");
    for r in records {
        out.push_str(&format!("{}\t{}\t{}\n", r.word, r.donor, fixed(r.distance)));
    }
    out
}
