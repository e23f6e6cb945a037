//! `emolex` subcommands. Each one is a thin layer over `emolex-core`; all
//! randomized commands need an explicit `--seed`.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use emolex_core::corpus::split_holdout;
use emolex_core::embed::{ablation, expand_lexicon};
use emolex_core::induction::{build_lexicon, LexiconConfig};
use emolex_core::regress::{cross_validate_classification, cross_validate_regression};
use emolex_core::scoring::{evaluate, learning_curve, score_text, sweep};
use emolex_core::text::term_stream;
use emolex_core::{Corpus, Lexicon};

use crate::config::{Opts, DEFAULT_KEEP_FRACTIONS};
use crate::corpus_io::{load_corpus, save_corpus_jsonl};
use crate::embeddings_io::load_embeddings;
use crate::lexicon_io::{load_lexicon, save_lexicon, ReadOptions};
use crate::report::{self, Report, Section};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "emolex", version, about = "Induce and evaluate emotion lexica from vote-annotated corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a lexicon from a corpus (optionally on a holdout training split).
    Build(Opts),
    /// Correlate averaged lexicon scores with gold vote shares.
    Eval(Opts),
    /// Print per-document averaged emotion scores.
    Score(Opts),
    /// Learning curve over nested random training subsets.
    Curve(Opts),
    /// Grid over representations, cutoffs and filtering.
    Sweep(Opts),
    /// k-fold cross-validated linear regression on lexicon features.
    Cv(Opts),
    /// k-fold Gaussian naive Bayes on lexicon features.
    Classify(Opts),
    /// Add out-of-vocabulary words through nearest embedding neighbours.
    Expand(Opts),
    /// Vocabulary removal / re-expansion ablation.
    Ablate(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Eval(_) => "eval",
            Command::Score(_) => "score",
            Command::Curve(_) => "curve",
            Command::Sweep(_) => "sweep",
            Command::Cv(_) => "cv",
            Command::Classify(_) => "classify",
            Command::Expand(_) => "expand",
            Command::Ablate(_) => "ablate",
        }
    }

    fn opts(&self) -> &Opts {
        match self {
            Command::Build(o)
            | Command::Eval(o)
            | Command::Score(o)
            | Command::Curve(o)
            | Command::Sweep(o)
            | Command::Cv(o)
            | Command::Classify(o)
            | Command::Expand(o)
            | Command::Ablate(o) => o,
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("emolex: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    let opts = command.opts().clone().resolve()?;
    let handler: fn(&Opts) -> Result<()> = match command {
        Command::Build(_) => cmd_build,
        Command::Eval(_) => cmd_eval,
        Command::Score(_) => cmd_score,
        Command::Curve(_) => cmd_curve,
        Command::Sweep(_) => cmd_sweep,
        Command::Cv(_) => cmd_cv,
        Command::Classify(_) => cmd_classify,
        Command::Expand(_) => cmd_expand,
        Command::Ablate(_) => cmd_ablate,
    };
    match opts.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| handler(&opts))
        }
        None => handler(&opts),
    }
}

fn emit(opts: &Opts, text: &str) -> Result<()> {
    match &opts.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn emit_report(opts: &Opts, command: &str, sections: Vec<Section>) -> Result<()> {
    let mut report = Report::new(opts.echo(command));
    report.sections = sections;
    emit(opts, &report.render(opts.format()))
}

fn corpus_at(opts: &Opts, path: &Path) -> Result<Corpus> {
    load_corpus(path, opts.corpus_format_for(path))
}

fn lexicon_config(opts: &Opts) -> LexiconConfig {
    LexiconConfig {
        rep: opts.rep(),
        cutoff: opts.cutoff(),
        filter_untagged: opts.filter_untagged(),
    }
}

fn lexicon_at(opts: &Opts, path: &Path) -> Result<Lexicon> {
    let read = ReadOptions {
        rep: opts.rep(),
        cutoff: opts.cutoff.unwrap_or(1),
        sum_tolerance: opts.sum_tolerance(),
    };
    load_lexicon(path, read)
}

/// Training and test corpora: `--corpus` with either `--test` or `--holdout`.
fn train_and_test(opts: &Opts, command: &str) -> Result<(Corpus, Corpus)> {
    let corpus = corpus_at(opts, Opts::require(&opts.corpus, "corpus", command)?)?;
    match (&opts.test, opts.holdout) {
        (Some(_), Some(_)) => Err(Error::Config(format!("`{command}` takes --test or --holdout, not both"))),
        (Some(test), None) => Ok((corpus, corpus_at(opts, test)?)),
        (None, Some(fraction)) => Ok(split_holdout(&corpus, fraction, opts.seed_for(command)?)?),
        (None, None) => Err(Error::Config(format!("`{command}` needs --test or --holdout"))),
    }
}

fn cmd_build(opts: &Opts) -> Result<()> {
    let output = Opts::require(&opts.output, "output", "build")?;
    let corpus = corpus_at(opts, Opts::require(&opts.corpus, "corpus", "build")?)?;
    let (train, seed) = match opts.holdout {
        Some(fraction) => {
            let seed = opts.seed_for("build")?;
            let (train, test) = split_holdout(&corpus, fraction, seed)?;
            if let Some(path) = &opts.test_out {
                save_corpus_jsonl(path, &test)?;
            }
            (train, Some(seed))
        }
        None if opts.test_out.is_some() => {
            return Err(Error::Config("--test-out needs --holdout".into()));
        }
        None => (corpus, None),
    };
    let mut lex = build_lexicon(&train, &lexicon_config(opts))?;
    let mut provenance = lex.provenance().clone();
    provenance.seed = seed;
    lex = lex.with_provenance(provenance);
    save_lexicon(output, &lex, opts.echo("build"))?;
    eprintln!(
        "emolex: {} terms from {} documents ({} dropped without mass)",
        lex.len(),
        lex.provenance().documents,
        lex.provenance().dropped_terms.len()
    );
    Ok(())
}

fn cmd_eval(opts: &Opts) -> Result<()> {
    let (lex, test) = match &opts.lexicon {
        Some(path) => {
            let lex = lexicon_at(opts, path)?;
            let test_path = opts
                .test
                .as_ref()
                .or(opts.corpus.as_ref())
                .ok_or_else(|| Error::Config("`eval` needs --test (or --corpus) with --lexicon".into()))?;
            (lex, corpus_at(opts, test_path)?)
        }
        None => {
            let (train, test) = train_and_test(opts, "eval")?;
            (build_lexicon(&train, &lexicon_config(opts))?, test)
        }
    };
    let report = evaluate(&lex, &test, lex.rep())?;
    emit_report(opts, "eval", report::eval_sections(&report))
}

fn cmd_score(opts: &Opts) -> Result<()> {
    let lex = lexicon_at(opts, Opts::require(&opts.lexicon, "lexicon", "score")?)?;
    let corpus = corpus_at(opts, Opts::require(&opts.corpus, "corpus", "score")?)?;
    let scored: Vec<_> = corpus
        .documents()
        .iter()
        .map(|d| (d.id.clone(), score_text(&lex, &term_stream(d, lex.rep()))))
        .collect();
    emit_report(opts, "score", vec![report::score_section(lex.space().labels(), &scored)])
}

fn cmd_curve(opts: &Opts) -> Result<()> {
    let seed = opts.seed_for("curve")?;
    let (train, test) = train_and_test(opts, "curve")?;
    let sizes = opts.sizes.clone().unwrap_or_else(|| vec![train.len()]);
    let points = learning_curve(&train, &test, &lexicon_config(opts), &sizes, seed)?;
    emit_report(opts, "curve", vec![report::curve_section(&points)])
}

fn cmd_sweep(opts: &Opts) -> Result<()> {
    let (train, test) = train_and_test(opts, "sweep")?;
    let reps = opts.reps.clone().unwrap_or_else(|| vec![opts.rep()]);
    let cutoffs = opts.cutoffs.clone().unwrap_or_else(|| vec![opts.cutoff()]);
    let filters = opts.filters.clone().unwrap_or_else(|| vec![opts.filter_untagged()]);
    let cells = sweep(&train, &test, &reps, &cutoffs, &filters)?;
    emit_report(opts, "sweep", vec![report::sweep_section(&cells)])
}

fn cmd_cv(opts: &Opts) -> Result<()> {
    let seed = opts.seed_for("cv")?;
    let lex = lexicon_at(opts, Opts::require(&opts.lexicon, "lexicon", "cv")?)?;
    let corpus = corpus_at(opts, Opts::require(&opts.corpus, "corpus", "cv")?)?;
    let report = cross_validate_regression(&lex, &corpus, lex.rep(), opts.folds(), seed, opts.ridge())?;
    emit_report(opts, "cv", report::cv_sections(&report))
}

fn cmd_classify(opts: &Opts) -> Result<()> {
    let seed = opts.seed_for("classify")?;
    let lex = lexicon_at(opts, Opts::require(&opts.lexicon, "lexicon", "classify")?)?;
    let corpus = corpus_at(opts, Opts::require(&opts.corpus, "corpus", "classify")?)?;
    let report = cross_validate_classification(&lex, &corpus, lex.rep(), opts.folds(), seed)?;
    emit_report(opts, "classify", report::classify_sections(&report))
}

fn read_targets(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

fn cmd_expand(opts: &Opts) -> Result<()> {
    let output = Opts::require(&opts.output, "output", "expand")?;
    let lex = lexicon_at(opts, Opts::require(&opts.lexicon, "lexicon", "expand")?)?;
    let emb = load_embeddings(Opts::require(&opts.embeddings, "embeddings", "expand")?)?;
    let mut targets = BTreeSet::new();
    if let Some(path) = &opts.targets {
        targets.extend(read_targets(path)?);
    }
    if opts.test_oov.unwrap_or(false) {
        let path = opts
            .test
            .as_ref()
            .or(opts.corpus.as_ref())
            .ok_or_else(|| Error::Config("--test-oov needs --test or --corpus".into()))?;
        let corpus = corpus_at(opts, path)?;
        for doc in corpus.documents() {
            targets.extend(term_stream(doc, lex.rep()).into_iter().filter(|t| !lex.contains(t)));
        }
    }
    if opts.targets.is_none() && !opts.test_oov.unwrap_or(false) {
        return Err(Error::Config("`expand` needs --targets and/or --test-oov true".into()));
    }
    let targets: Vec<String> = targets.into_iter().collect();
    let expansion = expand_lexicon(&lex, &emb, &targets);
    save_lexicon(output, &expansion.lexicon, opts.echo("expand"))?;
    if let Some(path) = &opts.records {
        std::fs::write(path, report::records_tsv(&expansion.records)).map_err(|e| Error::io(path, e))?;
    }
    let mut summary = Section::new(
        "summary",
        ["targets", "resolved", "unresolved", "ineligible_donors", "embedding_duplicates", "embedding_zero_norm"],
    );
    summary.push(vec![
        targets.len().into(),
        expansion.records.len().into(),
        expansion.unresolved.len().into(),
        expansion.ineligible_donors.into(),
        emb.duplicates().into(),
        emb.dropped_zero_norm().into(),
    ]);
    let sections = vec![summary, report::expansion_section(&expansion.records, &expansion.unresolved)];
    let mut report = Report::new(opts.echo("expand"));
    report.sections = sections;
    let text = report.render(opts.format());
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_ablate(opts: &Opts) -> Result<()> {
    let seed = opts.seed_for("ablate")?;
    let lex = lexicon_at(opts, Opts::require(&opts.lexicon, "lexicon", "ablate")?)?;
    let emb = load_embeddings(Opts::require(&opts.embeddings, "embeddings", "ablate")?)?;
    let test_path = opts
        .test
        .as_ref()
        .or(opts.corpus.as_ref())
        .ok_or_else(|| Error::Config("`ablate` needs --test".into()))?;
    let test = corpus_at(opts, test_path)?;
    let fractions = opts.keep_fractions.clone().unwrap_or_else(|| DEFAULT_KEEP_FRACTIONS.to_vec());
    let points = ablation(&lex, &emb, &test, lex.rep(), &fractions, seed)?;
    emit_report(opts, "ablate", vec![report::ablation_section(&points)])
}
