//! Synthetic corpora shared by the integration tests.
#![allow(dead_code)]

use emolex_core::{AnnotatedToken, Corpus, EmotionSpace, RawDocument};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(n: usize) -> EmotionSpace {
    EmotionSpace::new((0..n).map(|i| format!("e{i}"))).unwrap()
}

pub fn doc(id: String, words: &[String], votes: Vec<u64>) -> RawDocument {
    RawDocument::new(id, words.iter().map(AnnotatedToken::new).collect(), votes)
}

/// Standard normal sample.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Unconstrained random corpus: Zipf-like word draws, random lemmas and
/// tags, some zero-vote documents.
pub fn random_corpus(rng: &mut ChaCha8Rng, n_docs: usize, n_words: usize, n_emotions: usize) -> Corpus {
    let tags = ["NN", "vb", "JJ"];
    let docs = (0..n_docs)
        .map(|d| {
            let len = rng.gen_range(0..15);
            let tokens = (0..len)
                .map(|_| {
                    let r: f64 = rng.gen();
                    let w = ((r * r) * n_words as f64) as usize;
                    let mut t = AnnotatedToken::new(format!("W{w}!"));
                    if rng.gen_bool(0.7) {
                        t = t.with_lemma(format!("l{}", w / 2));
                    }
                    if rng.gen_bool(0.7) {
                        t = t.with_pos(tags[w % 3]);
                    }
                    t
                })
                .collect();
            let votes = if rng.gen_bool(0.15) {
                vec![0; n_emotions]
            } else {
                (0..n_emotions).map(|_| rng.gen_range(0..6)).collect()
            };
            RawDocument::new(format!("d{d:04}"), tokens, votes)
        })
        .collect();
    Corpus::new(space(n_emotions), docs).unwrap()
}

/// Emotion-marked vocabulary: `per_emotion` words per emotion.
pub fn marked_words(n_emotions: usize, per_emotion: usize) -> Vec<Vec<String>> {
    (0..n_emotions)
        .map(|e| (0..per_emotion).map(|k| format!("m{e}_{k:03}")).collect())
        .collect()
}

/// One document per marked word, every vote on that word's emotion. The
/// induced lexicon maps each word to a one-hot vector.
pub fn marked_training(words: &[Vec<String>]) -> Corpus {
    let n = words.len();
    let mut docs = Vec::new();
    for (e, ws) in words.iter().enumerate() {
        for w in ws {
            let mut votes = vec![0; n];
            votes[e] = 5;
            docs.push(doc(format!("t_{w}"), std::slice::from_ref(w), votes));
        }
    }
    Corpus::new(space(n), docs).unwrap()
}

/// Documents built from marked words whose votes count the words per
/// emotion, so gold percentages equal the averaged one-hot scores.
pub fn marked_test(rng: &mut ChaCha8Rng, words: &[Vec<String>], n_docs: usize, prefix: &str) -> Corpus {
    let n = words.len();
    let docs = (0..n_docs)
        .map(|d| {
            let len = rng.gen_range(2..9);
            let mut votes = vec![0u64; n];
            let ws: Vec<String> = (0..len)
                .map(|_| {
                    let e = rng.gen_range(0..n);
                    votes[e] += 1;
                    words[e].choose(rng).unwrap().clone()
                })
                .collect();
            doc(format!("{prefix}{d:04}"), &ws, votes)
        })
        .collect();
    Corpus::new(space(n), docs).unwrap()
}

/// Training corpus for the cutoff experiment: 100 frequent signal words tied
/// to one emotion each and 1000 hapax words with whatever emotion their only
/// document happens to have. Returns the corpus, signal words by emotion and
/// the hapax words.
pub fn hapax_training(rng: &mut ChaCha8Rng) -> (Corpus, Vec<Vec<String>>, Vec<String>) {
    let n = 4;
    let signal = marked_words(n, 25);
    let hapax: Vec<String> = (0..1000).map(|i| format!("h{i:04}")).collect();
    let mut next_hapax = 0;
    let mut docs = Vec::new();
    for d in 0..400 {
        let dominant = d % n;
        let mut ws: Vec<String> = (0..6).map(|_| signal[dominant].choose(rng).unwrap().clone()).collect();
        for _ in 0..2 {
            let e = rng.gen_range(0..n);
            ws.push(signal[e].choose(rng).unwrap().clone());
        }
        let take = if d % 2 == 0 { 2 } else { 3 };
        for _ in 0..take {
            ws.push(hapax[next_hapax].clone());
            next_hapax += 1;
        }
        ws.shuffle(rng);
        let votes = (0..n)
            .map(|e| if e == dominant { rng.gen_range(10..15) } else { rng.gen_range(0..3) })
            .collect();
        docs.push(doc(format!("tr{d:04}"), &ws, votes));
    }
    assert_eq!(next_hapax, hapax.len());
    (Corpus::new(space(n), docs).unwrap(), signal, hapax)
}

/// Test documents whose gold follows their signal words, each salted with
/// `noise_per_doc` words drawn from `noise`.
pub fn salted_test(
    rng: &mut ChaCha8Rng,
    signal: &[Vec<String>],
    noise: &[String],
    noise_per_doc: usize,
    n_docs: usize,
) -> Corpus {
    let n = signal.len();
    let docs = (0..n_docs)
        .map(|d| {
            let mut votes = vec![0u64; n];
            let mut ws: Vec<String> = (0..4)
                .map(|_| {
                    let e = rng.gen_range(0..n);
                    votes[e] += 3;
                    signal[e].choose(rng).unwrap().clone()
                })
                .collect();
            ws.extend((0..noise_per_doc).map(|_| noise.choose(rng).unwrap().clone()));
            ws.shuffle(rng);
            doc(format!("te{d:04}"), &ws, votes)
        })
        .collect();
    Corpus::new(space(n), docs).unwrap()
}

/// Training corpus for the filtering experiment: 400 voted documents of
/// signal words, 100 zero-vote documents (20%) of scrambled text, and 200
/// rare words seen 5 times in voted and 6 times in zero-vote documents.
pub fn untagged_training(rng: &mut ChaCha8Rng) -> (Corpus, Vec<Vec<String>>, Vec<String>) {
    let n = 4;
    let signal = marked_words(n, 25);
    let rare: Vec<String> = (0..200).map(|i| format!("r{i:03}")).collect();
    let mut tagged: Vec<Vec<String>> = Vec::new();
    let mut tagged_votes = Vec::new();
    for d in 0..400 {
        let dominant = d % n;
        let mut ws: Vec<String> = (0..6).map(|_| signal[dominant].choose(rng).unwrap().clone()).collect();
        ws.push(signal[rng.gen_range(0..n)].choose(rng).unwrap().clone());
        tagged.push(ws);
        tagged_votes.push(
            (0..n)
                .map(|e| if e == dominant { rng.gen_range(10..15) } else { rng.gen_range(0..3) })
                .collect::<Vec<u64>>(),
        );
    }
    let mut untagged: Vec<Vec<String>> = (0..100)
        .map(|_| (0..5).map(|_| signal[rng.gen_range(0..n)].choose(rng).unwrap().clone()).collect())
        .collect();
    for w in &rare {
        for _ in 0..5 {
            let d = rng.gen_range(0..tagged.len());
            tagged[d].push(w.clone());
        }
        for _ in 0..6 {
            let d = rng.gen_range(0..untagged.len());
            untagged[d].push(w.clone());
        }
    }
    let mut docs = Vec::new();
    for (d, (mut ws, votes)) in tagged.into_iter().zip(tagged_votes).enumerate() {
        ws.shuffle(rng);
        docs.push(doc(format!("tg{d:04}"), &ws, votes));
    }
    for (d, mut ws) in untagged.into_iter().enumerate() {
        ws.shuffle(rng);
        docs.push(doc(format!("un{d:04}"), &ws, vec![0; n]));
    }
    docs.shuffle(rng);
    (Corpus::new(space(n), docs).unwrap(), signal, rare)
}
