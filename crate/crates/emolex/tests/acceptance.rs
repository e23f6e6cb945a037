//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use emolex::corpus_io::save_corpus_jsonl;
use emolex::lexicon_io::{load_lexicon, ReadOptions};
use emolex_core::corpus::filter_untagged;
use emolex_core::embed::{ablation, expand_lexicon, nearest_in_lexicon, EmbeddingModel};
use emolex_core::induction::{build_lexicon, build_mwd, build_mde, multiply_we, normalize_we, LexiconConfig};
use emolex_core::regress::{
    classify_metrics, cross_validate_regression, fit_gnb, fit_linear, DEFAULT_RIDGE, VARIANCE_FLOOR,
};
use emolex_core::scoring::{evaluate, pearson, score_text};
use emolex_core::text::{build_vocabulary, term_stream};
use emolex_core::{Corpus, EmotionVector, Lexicon, RawDocument, WordRep};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "simplex invariant", Some(Duration::from_secs(10)), simplex_invariant),
        (2, "dense-oracle equivalence", Some(Duration::from_secs(5)), dense_oracle),
        (3, "published excerpt fixture", Some(Duration::from_secs(1)), excerpt_fixture),
        (4, "vote-scale invariance", None, vote_scale),
        (5, "cutoff behavior", Some(Duration::from_secs(30)), cutoff_behavior),
        (6, "filtering behavior", Some(Duration::from_secs(30)), filtering_behavior),
        (7, "unsupervised evaluation", None, unsupervised_evaluation),
        (8, "supervised baseline", Some(Duration::from_secs(30)), supervised_baseline),
        (9, "classifier", None, classifier),
        (10, "expansion", Some(Duration::from_secs(60)), expansion),
        (11, "CLI determinism", None, determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn all_configs() -> Vec<LexiconConfig> {
    let mut out = Vec::new();
    for rep in WordRep::ALL {
        for cutoff in [1, 2, 10] {
            for filter_untagged in [true, false] {
                out.push(LexiconConfig { rep, cutoff, filter_untagged });
            }
        }
    }
    out
}

fn check_simplex(lex: &Lexicon) -> Result<(), String> {
    for (term, v) in lex.iter() {
        ensure!(v.len() == lex.space().len(), "{term}: {} components", v.len());
        ensure!(v.as_slice().iter().all(|&x| x >= 0.0), "{term}: negative component {v:?}");
        ensure!((v.sum() - 1.0).abs() <= 1e-9, "{term}: sum {}", v.sum());
    }
    Ok(())
}

fn simplex_invariant() -> Outcome {
    let mut rng = rng(1);
    let mut lexica = 0;
    let mut entries = 0;
    for (n_docs, n_words) in [(1, 5), (10, 30), (100, 200), (1000, 2000)] {
        let corpus = random_corpus(&mut rng, n_docs, n_words, 6);
        for config in all_configs() {
            // Tiny corpora can leave nothing above the cutoff; that is an error, not a lexicon.
            let Ok(lex) = build_lexicon(&corpus, &config) else { continue };
            check_simplex(&lex)?;
            lexica += 1;
            entries += lex.len();
        }
    }
    ensure!(lexica > 20, "only {lexica} lexica were built");
    Ok(format!("{lexica} lexica, {entries} entries"))
}

/// Straightforward dense reference: counts, relative frequencies, product,
/// column then row normalization.
fn dense_reference(corpus: &Corpus, cutoff: u64) -> BTreeMap<String, Vec<f64>> {
    let streams: Vec<Vec<String>> = corpus.documents().iter().map(|d| term_stream(d, WordRep::Token)).collect();
    let mut freq: BTreeMap<String, u64> = BTreeMap::new();
    for s in &streams {
        for t in s {
            *freq.entry(t.clone()).or_default() += 1;
        }
    }
    let vocab: Vec<String> = freq.into_iter().filter(|&(_, c)| c >= cutoff).map(|(t, _)| t).collect();
    let n = corpus.space().len();
    let (w, d) = (vocab.len(), streams.len());
    let mut mwd = vec![vec![0.0; d]; w];
    for (j, s) in streams.iter().enumerate() {
        let inv: Vec<usize> = s.iter().filter_map(|t| vocab.iter().position(|v| v == t)).collect();
        for &i in &inv {
            mwd[i][j] += 1.0 / inv.len() as f64;
        }
    }
    let mde: Vec<Vec<f64>> = corpus
        .documents()
        .iter()
        .map(|doc| {
            let total = doc.total_votes() as f64;
            doc.votes.iter().map(|&v| if total > 0.0 { v as f64 / total } else { 0.0 }).collect()
        })
        .collect();
    let mut we = vec![vec![0.0; n]; w];
    for i in 0..w {
        for e in 0..n {
            we[i][e] = (0..d).map(|j| mwd[i][j] * mde[j][e]).sum();
        }
    }
    for e in 0..n {
        let col: f64 = (0..w).map(|i| we[i][e]).sum();
        if col > 0.0 {
            for row in we.iter_mut() {
                row[e] /= col;
            }
        }
    }
    let mut out = BTreeMap::new();
    for (i, row) in we.into_iter().enumerate() {
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            out.insert(vocab[i].clone(), row.into_iter().map(|x| x / s).collect());
        }
    }
    out
}

fn dense_oracle() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    let corpora = 200;
    for _ in 0..corpora {
        let n_docs = rng.gen_range(1..=10);
        let n_emotions = rng.gen_range(2..=5);
        let corpus = random_corpus(&mut rng, n_docs, 20, n_emotions);
        let cutoff = rng.gen_range(1..=3);
        let reference = dense_reference(&corpus, cutoff);
        let Ok(vocab) = build_vocabulary(&corpus, WordRep::Token, cutoff) else {
            ensure!(reference.is_empty(), "vocabulary empty but reference is not");
            continue;
        };
        ensure!(vocab.len() <= 20, "vocabulary of {} terms", vocab.len());
        let raw = multiply_we(&build_mwd(&corpus, &vocab), &build_mde(&corpus)).map_err(|e| e.to_string())?;
        let rows = normalize_we(&raw, corpus.space()).map_err(|e| e.to_string())?;
        let mut got = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            if let Some(v) = row {
                got.insert(vocab.term(i).to_owned(), v.into_inner());
            }
        }
        ensure!(
            got.keys().eq(reference.keys()),
            "terms differ: {:?} vs {:?}",
            got.keys().collect::<Vec<_>>(),
            reference.keys().collect::<Vec<_>>()
        );
        for (t, v) in &got {
            for (a, b) in v.iter().zip(&reference[t]) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure!(worst <= 1e-12, "max deviation {worst:e}");
    Ok(format!("{corpora} corpora, max deviation {worst:e}"))
}

fn fixture_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/published_excerpt.tsv")
}

fn excerpt_fixture() -> Outcome {
    let lex = load_lexicon(&fixture_path(), ReadOptions::default()).map_err(|e| e.to_string())?;
    let expected = ["awe", "criminal", "dead", "funny", "rapist", "virtuosity", "warning"];
    ensure!(lex.terms().eq(expected), "terms {:?}", lex.terms().collect::<Vec<_>>());
    for (t, v) in lex.iter() {
        ensure!((v.sum() - 1.0).abs() <= 0.01 + 1e-12, "{t} sums to {}", v.sum());
    }
    let scored = score_text(&lex, &["funny"]);
    let scores = scored.scores.ok_or("funny not covered")?;
    let top = scores.argmax().ok_or("empty scores")?;
    let label = &lex.space().labels()[top];
    ensure!(label == "AMUSED", "argmax is {label}");
    Ok(format!("7 rows valid, funny -> {label} {:.2}", scores[top]))
}

fn vote_scale() -> Outcome {
    let mut rng = rng(4);
    let mut compared = 0;
    for n_docs in [10, 100, 500] {
        let corpus = random_corpus(&mut rng, n_docs, 150, 5);
        let scaled = Corpus::new(
            corpus.space().clone(),
            corpus
                .documents()
                .iter()
                .map(|d| RawDocument::new(d.id.clone(), d.tokens.clone(), d.votes.iter().map(|v| v * 7).collect()))
                .collect(),
        )
        .unwrap();
        for config in all_configs() {
            let (Ok(a), Ok(b)) = (build_lexicon(&corpus, &config), build_lexicon(&scaled, &config)) else {
                continue;
            };
            ensure!(a.terms().eq(b.terms()), "term sets differ");
            for ((t, u), (_, v)) in a.iter().zip(b.iter()) {
                for (x, y) in u.as_slice().iter().zip(v.as_slice()) {
                    ensure!((x - y).abs() <= 1e-12, "{t}: {x} vs {y}");
                }
            }
            compared += 1;
        }
    }
    ensure!(compared > 10, "only {compared} lexica compared");
    Ok(format!("{compared} lexicon pairs identical within 1e-12"))
}

fn average(lex: &Lexicon, test: &Corpus) -> Result<f64, String> {
    let report = evaluate(lex, test, lex.rep()).map_err(|e| e.to_string())?;
    report.average.ok_or_else(|| format!("undefined average: {:?}", report.per_emotion))
}

fn cutoff_behavior() -> Outcome {
    let mut rng = rng(5);
    let (train, signal, hapax) = hapax_training(&mut rng);
    let test = salted_test(&mut rng, &signal, &hapax, 3, 300);
    let config = |cutoff| LexiconConfig { cutoff, ..LexiconConfig::default() };
    let lex1 = build_lexicon(&train, &config(1)).map_err(|e| e.to_string())?;
    let lex10 = build_lexicon(&train, &config(10)).map_err(|e| e.to_string())?;
    let (v1, v10) = (lex1.provenance().vocabulary_size, lex10.provenance().vocabulary_size);
    let shrink = 1.0 - v10 as f64 / v1 as f64;
    let (r1, r10) = (average(&lex1, &test)?, average(&lex10, &test)?);
    ensure!(shrink >= 0.8, "vocabulary {v1} -> {v10}, shrink {shrink:.3}");
    ensure!(r10 >= r1 - 0.01, "cutoff 10 r {r10:.4} < cutoff 1 r {r1:.4}");
    Ok(format!("vocabulary {v1} -> {v10} ({:.1}% smaller), r {r1:.4} -> {r10:.4}", shrink * 100.0))
}

fn filtering_behavior() -> Outcome {
    let mut rng = rng(6);
    let (train, signal, rare) = untagged_training(&mut rng);
    let filtered = filter_untagged(&train);
    let kept: Vec<&str> = filtered.documents().iter().map(|d| d.id.as_str()).collect();
    let expected: Vec<&str> =
        train.documents().iter().filter(|d| d.total_votes() > 0).map(|d| d.id.as_str()).collect();
    ensure!(kept == expected, "filter kept {} documents, expected {}", kept.len(), expected.len());
    ensure!(train.len() - kept.len() == 100, "removed {}", train.len() - kept.len());

    let test = salted_test(&mut rng, &signal, &rare, 2, 300);
    let config = |filter_untagged| LexiconConfig { filter_untagged, ..LexiconConfig::default() };
    let on = build_lexicon(&train, &config(true)).map_err(|e| e.to_string())?;
    let off = build_lexicon(&train, &config(false)).map_err(|e| e.to_string())?;
    let (r_on, r_off) = (average(&on, &test)?, average(&off, &test)?);
    ensure!(r_on >= r_off - 0.01, "filtered r {r_on:.4} < unfiltered r {r_off:.4}");
    Ok(format!(
        "removed 100/{} zero-vote docs; r filtered {r_on:.4} ({} terms) vs unfiltered {r_off:.4} ({} terms)",
        train.len(),
        on.len(),
        off.len()
    ))
}

fn unsupervised_evaluation() -> Outcome {
    ensure!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]) == Ok(1.0), "identical series");
    ensure!(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) == Ok(-1.0), "reversed series");
    let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).map_err(|e| e.to_string())?;
    ensure!(r == 0.6, "worked example gives {r:?}");

    let mut rng = rng(7);
    let words = marked_words(5, 20);
    let lex = build_lexicon(&marked_training(&words), &LexiconConfig { cutoff: 1, ..LexiconConfig::default() })
        .map_err(|e| e.to_string())?;
    let test = marked_test(&mut rng, &words, 400, "q");
    let report = evaluate(&lex, &test, WordRep::Token).map_err(|e| e.to_string())?;
    for (label, r) in report.labels.iter().zip(&report.per_emotion) {
        let r = r.ok_or_else(|| format!("{label}: undefined"))?;
        ensure!((r - 1.0).abs() <= 1e-9, "{label}: r = {r}");
    }
    Ok(format!("pearson examples exact; planted r = 1 on {} docs", report.used))
}

/// Full-batch gradient descent on mean squared error with an intercept.
fn gradient_descent(x: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let (n, p) = (x.len(), x[0].len());
    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let lr = 0.5;
    for _ in 0..200_000 {
        let mut gw = vec![0.0; p];
        let mut gb = 0.0;
        for (row, &t) in x.iter().zip(y) {
            let err = row.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() + b - t;
            for j in 0..p {
                gw[j] += err * row[j] / n as f64;
            }
            gb += err / n as f64;
        }
        let norm = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        for j in 0..p {
            w[j] -= lr * gw[j];
        }
        b -= lr * gb;
        if norm < 1e-24 {
            break;
        }
    }
    (w, b)
}

fn supervised_baseline() -> Outcome {
    let mut rng = rng(8);
    let words = marked_words(4, 30);
    let lex = build_lexicon(&marked_training(&words), &LexiconConfig { cutoff: 1, ..LexiconConfig::default() })
        .map_err(|e| e.to_string())?;
    let docs = marked_test(&mut rng, &words, 500, "s");
    let report = cross_validate_regression(&lex, &docs, WordRep::Token, 10, 11, DEFAULT_RIDGE).map_err(|e| e.to_string())?;
    ensure!(report.used == 500, "used {} documents", report.used);
    for (label, r) in report.labels.iter().zip(&report.per_emotion) {
        let r = r.ok_or_else(|| format!("{label}: undefined"))?;
        ensure!((r - 1.0).abs() <= 1e-9, "{label}: pooled r = {r}");
    }

    let mut votes: Vec<Vec<u64>> = docs.documents().iter().map(|d| d.votes.clone()).collect();
    votes.shuffle(&mut rng);
    let permuted = Corpus::new(
        docs.space().clone(),
        docs.documents()
            .iter()
            .zip(votes)
            .map(|(d, v)| RawDocument::new(d.id.clone(), d.tokens.clone(), v))
            .collect(),
    )
    .unwrap();
    let null = cross_validate_regression(&lex, &permuted, WordRep::Token, 10, 11, DEFAULT_RIDGE)
        .map_err(|e| e.to_string())?;
    let worst_null = null.per_emotion.iter().map(|r| r.map_or(0.0, f64::abs)).fold(0.0, f64::max);
    ensure!(worst_null < 0.2, "permuted targets give |r| = {worst_null}");

    let mut worst_gd: f64 = 0.0;
    for _ in 0..10 {
        let x: Vec<Vec<f64>> = (0..50).map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y: Vec<f64> = (0..50).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let model = fit_linear(&x, &y, 0.0).map_err(|e| e.to_string())?;
        let (w, b) = gradient_descent(&x, &y);
        for (a, c) in model.weights.iter().zip(&w) {
            worst_gd = worst_gd.max((a - c).abs());
        }
        worst_gd = worst_gd.max((model.intercept - b).abs());
    }
    ensure!(worst_gd <= 1e-4, "fit_linear deviates from gradient descent by {worst_gd:e}");
    Ok(format!(
        "pooled r = 1 on 500 docs; permuted max |r| {worst_null:.3}; GD deviation {worst_gd:.1e}"
    ))
}

fn log_gauss(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var)
}

fn classifier() -> Outcome {
    let mut rng = rng(9);
    let centers = [("a", [0.0, 0.0]), ("b", [5.0, 5.0])];
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (label, c) in centers {
        for _ in 0..100 {
            x.push(vec![c[0] + normal(&mut rng), c[1] + normal(&mut rng)]);
            y.push(label.to_owned());
        }
    }
    let model = fit_gnb(&x, &y).map_err(|e| e.to_string())?;
    // Brute-force posteriors from separately computed MLE parameters.
    let params: Vec<(f64, Vec<(f64, f64)>)> = centers
        .iter()
        .map(|(label, _)| {
            let rows: Vec<&Vec<f64>> = x.iter().zip(&y).filter(|(_, l)| l == label).map(|(r, _)| r).collect();
            let n = rows.len() as f64;
            let feats = (0..2)
                .map(|j| {
                    let m = rows.iter().map(|r| r[j]).sum::<f64>() / n;
                    let v = rows.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / n;
                    (m, v.max(VARIANCE_FLOOR))
                })
                .collect();
            (n / x.len() as f64, feats)
        })
        .collect();
    let mut predictions = Vec::new();
    for row in &x {
        let joint: Vec<f64> = params
            .iter()
            .map(|(prior, f)| prior.ln() + f.iter().zip(row).map(|(&(m, v), &xi)| log_gauss(xi, m, v)).sum::<f64>())
            .collect();
        let top = joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = joint.iter().map(|j| (j - top).exp()).sum();
        let brute: Vec<f64> = joint.iter().map(|j| (j - top).exp() / z).collect();
        let got = model.predict_proba(row).map_err(|e| e.to_string())?;
        for (g, b) in got.iter().zip(&brute) {
            ensure!((g - b).abs() <= 1e-9, "posterior {g} vs brute force {b}");
        }
        let predicted = model.predict(row).map_err(|e| e.to_string())?;
        let brute_label = if brute[0] >= brute[1] { "a" } else { "b" };
        ensure!(predicted == brute_label, "prediction {predicted} vs brute force {brute_label}");
        predictions.push(predicted);
    }
    let metrics = classify_metrics(&predictions, &y).map_err(|e| e.to_string())?;
    ensure!(metrics.accuracy == 1.0, "training accuracy {}", metrics.accuracy);

    let gold = ["A", "A", "B", "B"];
    let hand = classify_metrics(&["A"; 4], &gold).map_err(|e| e.to_string())?;
    ensure!(hand.accuracy == 0.5, "accuracy {}", hand.accuracy);
    ensure!(hand.macro_f1 == 1.0 / 3.0, "macro-F1 {:?}", hand.macro_f1);
    Ok("training accuracy 1.0 on 200 points; macro-F1 = 1/3 exactly".into())
}

fn brute_nearest(word: &str, lex: &Lexicon, emb: &EmbeddingModel) -> Option<(String, f64)> {
    let q = emb.get(word)?;
    let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut best: Option<(String, f64)> = None;
    for term in lex.terms() {
        let Some(v) = emb.get(term) else { continue };
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let d = 1.0 - q.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / (qn * vn);
        let better = match &best {
            None => true,
            Some((bt, bd)) => d < *bd - 1e-12 || ((d - bd).abs() <= 1e-12 && term < bt.as_str()),
        };
        if better {
            best = Some((term.to_owned(), d));
        }
    }
    best
}

fn expansion() -> Outcome {
    let mut rng = rng(10);
    let n = 5;
    let dim = 16;
    let entries = (0..500).map(|i| {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        (format!("w{i:03}"), EmotionVector::new(raw.into_iter().map(|x| x / s).collect()))
    });
    let entries: Vec<_> = entries.collect();
    let lex = Lexicon::from_entries(space(n), WordRep::Token, 1, entries, 1e-9).map_err(|e| e.to_string())?;
    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    // A few lexicon terms stay without an embedding.
    for t in lex.terms().filter(|t| !t.ends_with('7')) {
        rows.push((t.to_owned(), (0..dim).map(|_| normal(&mut rng)).collect()));
    }
    let queries: Vec<String> = (0..1000).map(|i| format!("q{i:04}")).collect();
    for q in &queries[..950] {
        rows.push((q.clone(), (0..dim).map(|_| normal(&mut rng)).collect()));
    }
    let emb = EmbeddingModel::from_rows(dim, rows).map_err(|e| e.to_string())?;
    for q in &queries {
        let got = nearest_in_lexicon(q, &lex, &emb).map(|r| (r.donor, r.distance));
        let want = brute_nearest(q, &lex, &emb);
        match (&got, &want) {
            (None, None) => {}
            (Some((gd, gx)), Some((wd, wx))) => {
                ensure!(gd == wd && (gx - wx).abs() <= 1e-12, "{q}: {got:?} vs brute force {want:?}");
            }
            _ => return Err(format!("{q}: {got:?} vs brute force {want:?}")),
        }
    }
    let once = expand_lexicon(&lex, &emb, &queries);
    ensure!(once.records.len() == 950 && once.unresolved.len() == 50, "{} records", once.records.len());
    let twice = expand_lexicon(&once.lexicon, &emb, &queries);
    ensure!(twice.lexicon == once.lexicon && twice.records.is_empty(), "second expansion changed the lexicon");
    for (t, v) in lex.iter() {
        ensure!(once.lexicon.get(t) == Some(v), "{t} was modified");
    }
    check_simplex(&once.lexicon)?;

    // Neighbor-sharing ablation: words of one emotion cluster in embedding space
    // and carry identical one-hot vectors, so every donor is a perfect substitute.
    let words = marked_words(4, 25);
    let planted = build_lexicon(&marked_training(&words), &LexiconConfig { cutoff: 1, ..LexiconConfig::default() })
        .map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for (e, ws) in words.iter().enumerate() {
        for w in ws {
            let v: Vec<f64> = (0..8).map(|j| if j == e { 1.0 } else { 0.0 } + 0.05 * normal(&mut rng)).collect();
            rows.push((w.clone(), v));
        }
    }
    let emb = EmbeddingModel::from_rows(8, rows).map_err(|e| e.to_string())?;
    let test = marked_test(&mut rng, &words, 300, "x");
    let points = ablation(&planted, &emb, &test, WordRep::Token, &[0.25, 0.5, 1.0], 12).map_err(|e| e.to_string())?;
    let at = |f: f64| points.iter().find(|p| p.fraction == f).unwrap();
    let half = at(0.5);
    let full = at(1.0);
    let (red, exp) = (half.r_reduced().ok_or("reduced r undefined")?, half.r_expanded().ok_or("expanded r undefined")?);
    ensure!(exp >= red, "fraction 0.5: expanded {exp} < reduced {red}");
    ensure!(full.r_expanded() == full.r_reduced(), "fraction 1.0: {:?} vs {:?}", full.r_expanded(), full.r_reduced());
    Ok(format!(
        "1000 queries match brute force; idempotent; ablation 0.5 r {red:.4} -> {exp:.4}, 1.0 r {:.4} both",
        full.r_reduced().unwrap_or(f64::NAN)
    ))
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

fn emolex(args: &[String]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_emolex")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let ws = Workspace { dir: tempfile::tempdir().map_err(|e| e.to_string())? };
    let mut rng = rng(11);
    let words = marked_words(4, 15);
    let mut train_docs = marked_test(&mut rng, &words, 300, "a").documents().to_vec();
    train_docs.extend(random_corpus(&mut rng, 100, 80, 4).documents().iter().cloned());
    let train = Corpus::new(space(4), train_docs).unwrap();
    let test = marked_test(&mut rng, &words, 120, "b");
    save_corpus_jsonl(&ws.path("train.jsonl"), &train).map_err(|e| e.to_string())?;
    save_corpus_jsonl(&ws.path("test.jsonl"), &test).map_err(|e| e.to_string())?;
    let mut emb = String::new();
    for (i, w) in words.iter().flatten().chain([&"zzz".to_string()]).enumerate() {
        let v: Vec<String> = (0..6).map(|j| format!("{:.4}", ((i * 7 + j * 3) % 11) as f64 - 5.0 + 0.1)).collect();
        emb.push_str(&format!("{w} {}\n", v.join(" ")));
    }
    std::fs::write(ws.path("emb.txt"), emb).map_err(|e| e.to_string())?;
    std::fs::write(ws.path("targets.txt"), "zzz\nm0_003\nmissing\n").map_err(|e| e.to_string())?;
    emolex(&[
        "build".into(),
        "--corpus".into(),
        ws.p("train.jsonl"),
        "--cutoff".into(),
        "3".into(),
        "--output".into(),
        ws.p("lex.tsv"),
    ])?;

    let a = |s: &str| s.to_string();
    let commands: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        (
            "build",
            vec![a("--corpus"), ws.p("train.jsonl"), a("--holdout"), a("0.2"), a("--seed"), a("5"), a("--cutoff"), a("2")],
            vec!["out.tsv", "out.tsv.meta.json", "held.jsonl"],
        ),
        ("eval", vec![a("--lexicon"), ws.p("lex.tsv"), a("--test"), ws.p("test.jsonl")], vec!["out.tsv"]),
        (
            "eval",
            vec![a("--corpus"), ws.p("train.jsonl"), a("--test"), ws.p("test.jsonl"), a("--format"), a("jsonl")],
            vec!["out.tsv"],
        ),
        ("score", vec![a("--lexicon"), ws.p("lex.tsv"), a("--corpus"), ws.p("test.jsonl")], vec!["out.tsv"]),
        (
            "curve",
            vec![a("--corpus"), ws.p("train.jsonl"), a("--test"), ws.p("test.jsonl"), a("--sizes"), a("50,200,400"), a("--seed"), a("3"), a("--cutoff"), a("1")],
            vec!["out.tsv"],
        ),
        (
            "sweep",
            vec![
                a("--corpus"), ws.p("train.jsonl"), a("--holdout"), a("0.25"), a("--seed"), a("4"),
                a("--reps"), a("token,lemma,lemma#pos"), a("--cutoffs"), a("1,2"), a("--filters"), a("true,false"),
            ],
            vec!["out.tsv"],
        ),
        (
            "cv",
            vec![a("--lexicon"), ws.p("lex.tsv"), a("--corpus"), ws.p("test.jsonl"), a("--folds"), a("5"), a("--seed"), a("9")],
            vec!["out.tsv"],
        ),
        (
            "classify",
            vec![a("--lexicon"), ws.p("lex.tsv"), a("--corpus"), ws.p("test.jsonl"), a("--folds"), a("4"), a("--seed"), a("9")],
            vec!["out.tsv"],
        ),
        (
            "expand",
            vec![
                a("--lexicon"), ws.p("lex.tsv"), a("--embeddings"), ws.p("emb.txt"), a("--targets"), ws.p("targets.txt"),
                a("--test"), ws.p("test.jsonl"), a("--test-oov"), a("true"),
            ],
            vec!["out.tsv", "out.tsv.meta.json", "records.tsv"],
        ),
        (
            "ablate",
            vec![
                a("--lexicon"), ws.p("lex.tsv"), a("--embeddings"), ws.p("emb.txt"), a("--test"), ws.p("test.jsonl"),
                a("--keep-fractions"), a("0.3,0.6,1"), a("--seed"), a("2"),
            ],
            vec!["out.tsv"],
        ),
    ];
    let runs: [Option<&str>; 4] = [None, None, Some("1"), Some("4")];
    let mut files = 0;
    for (n, (cmd, args, outputs)) in commands.iter().enumerate() {
        let mut first: Option<Vec<Vec<u8>>> = None;
        for (r, threads) in runs.iter().enumerate() {
            let dir = ws.path(&format!("{n}_{cmd}_{r}"));
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            let mut full = vec![cmd.to_string()];
            full.extend(args.iter().cloned());
            full.extend([a("--output"), dir.join("out.tsv").display().to_string()]);
            match *cmd {
                "build" => full.extend([a("--test-out"), dir.join("held.jsonl").display().to_string()]),
                "expand" => full.extend([a("--records"), dir.join("records.tsv").display().to_string()]),
                _ => {}
            }
            if let Some(t) = threads {
                full.extend([a("--threads"), a(t)]);
            }
            let stdout = emolex(&full)?;
            let mut blobs = vec![stdout];
            for o in outputs {
                blobs.push(std::fs::read(dir.join(o)).map_err(|e| format!("{cmd}: {o}: {e}"))?);
            }
            ensure!(blobs[1..].iter().all(|b| !b.is_empty()), "{cmd}: empty output");
            match &first {
                None => first = Some(blobs),
                Some(f) => {
                    for (i, (x, y)) in f.iter().zip(&blobs).enumerate() {
                        let what = if i == 0 { "stdout" } else { outputs[i - 1] };
                        ensure!(x == y, "{cmd} run {r} (threads {threads:?}): {what} differs");
                    }
                }
            }
        }
        files += outputs.len() + 1;
    }
    Ok(format!("{} invocations x 4 runs, {files} outputs byte-identical", commands.len()))
}
