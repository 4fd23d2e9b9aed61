//! Generated corpora with planted topic structure, for tests and benches.
//!
//! Topics come in related pairs; each pair is one research line. A document
//! belongs to one line, draws most of its descriptors from one topic of the
//! pair and some from the other, plus a few words shared by every line.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ingest::{porter, Corpus, CorpusRecord, StopWords};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub docs: usize,
    pub lines: usize,
    pub words_per_topic: usize,
    pub shared_words: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            docs: 300,
            lines: 3,
            words_per_topic: 40,
            shared_words: 12,
            first_year: 1990,
            last_year: 2013,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    /// Research line per record.
    pub lines: Vec<usize>,
    /// Primary topic per record (`2 * line` or `2 * line + 1`).
    pub topics: Vec<usize>,
    /// Words of each topic.
    pub vocabulary: Vec<Vec<String>>,
}

const ONSETS: [&str; 14] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
const CODAS: [&str; 6] = ["k", "m", "n", "r", "t", "x"];

/// Distinct pseudo-words that stemming leaves unchanged.
fn pseudo_words(rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    let stop = StopWords::english();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let syllables = rng.gen_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).unwrap());
            w.push_str(VOWELS.choose(rng).unwrap());
        }
        w.push_str(CODAS.choose(rng).unwrap());
        if porter::stem(&w) == w && !stop.contains(&w) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &'a [String], n: usize) -> Vec<&'a str> {
    words.choose_multiple(rng, n.min(words.len())).map(String::as_str).collect()
}

pub fn generate(params: &SyntheticParams) -> Result<SyntheticCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n_topics = 2 * params.lines;
    let all = pseudo_words(&mut rng, n_topics * params.words_per_topic + params.shared_words);
    let vocabulary: Vec<Vec<String>> = all.chunks(params.words_per_topic).take(n_topics).map(<[String]>::to_vec).collect();
    let shared = &all[n_topics * params.words_per_topic..];
    let span = (params.last_year - params.first_year).max(0) as f64;

    let mut records = Vec::with_capacity(params.docs);
    let (mut lines, mut topics) = (Vec::new(), Vec::new());
    for d in 0..params.docs {
        let line = d % params.lines;
        let primary = 2 * line + rng.gen_range(0..2);
        let partner = primary ^ 1;
        let main = &vocabulary[primary];
        let side = &vocabulary[partner];

        let mut keywords: Vec<String> = pick(&mut rng, main, 4).into_iter().map(String::from).collect();
        let phrase = pick(&mut rng, main, 2);
        keywords.push(phrase.join(" "));
        keywords.extend(pick(&mut rng, side, 1).into_iter().map(String::from));
        keywords.extend(pick(&mut rng, shared, 1).into_iter().map(String::from));

        let title_words = pick(&mut rng, main, 3);
        let title = format!("On the {} of {} and {}", title_words[0], title_words[1], title_words[2]);
        let references = (0..3)
            .map(|_| {
                pick(&mut rng, main, 3).join(" ")
            })
            .collect::<Vec<_>>();

        // Each line peaks at a different point of the period.
        let centre = span * (line as f64 + 0.5) / params.lines as f64;
        let jitter: f64 = (0..3).map(|_| rng.gen_range(-0.5..0.5)).sum::<f64>() * span / 2.0;
        let year = params.first_year + (centre + jitter).round().clamp(0.0, span) as i32;

        records.push(
            CorpusRecord::new(format!("S{d:04}"))
                .with_year(year)
                .with_title(title)
                .with_keywords(keywords)
                .with_references(references),
        );
        lines.push(line);
        topics.push(primary);
    }
    let corpus = Corpus::from_records(records, format!("synthetic:{}", params.seed))?;
    Ok(SyntheticCorpus { corpus, lines, topics, vocabulary })
}

/// Writes records as JSON lines, the form read back by the `jsonl` parser.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    for r in &corpus.records {
        serde_json::to_writer(&mut writer, r)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
