//! Add-one smoothed n-gram language model.
//!
//! Every training sentence is padded with `order - 1` begin markers and one
//! end marker, and all n-grams of length `1..=order` over the padded sequence
//! are counted. The count of a context is the number of times it is followed
//! by some token, so `Σ_w P(w | h) = 1` holds for every history `h`.
//!
//! Each order also carries the nearest-rank first and third quartiles of the
//! type-frequency distribution of n-grams made only of real tokens. Those
//! quartiles split n-grams into low, mid and high frequency bands.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fsutil;

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const END: &str = "</s>";

pub const DEFAULT_ORDER: usize = 3;
pub const MAX_ORDER: usize = 5;

const FORMAT_TAG: &str = "mtqe-ngram";
const FORMAT_VERSION: &str = "1";

const UNK_ID: u32 = 0;
const BOS_ID: u32 = 1;
const END_ID: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FreqClass {
    Low,
    Mid,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Quartiles {
    pub q1: u64,
    pub q3: u64,
}

impl Quartiles {
    /// Nearest-rank 25th and 75th percentiles. An empty sample gives (0, 0).
    pub fn nearest_rank(mut freqs: Vec<u64>) -> Self {
        if freqs.is_empty() {
            return Quartiles::default();
        }
        freqs.sort_unstable();
        let rank = |p: usize| {
            // ceil(p/100 * n), 1-based, at least 1
            let r = (p * freqs.len()).div_ceil(100).max(1);
            freqs[r - 1]
        };
        Quartiles {
            q1: rank(25),
            q3: rank(75),
        }
    }

    pub fn classify(&self, freq: u64) -> FreqClass {
        if freq <= self.q1 {
            FreqClass::Low
        } else if freq > self.q3 {
            FreqClass::High
        } else {
            FreqClass::Mid
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Vocab {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    fn with_reserved() -> Self {
        let mut v = Vocab::default();
        for w in [UNK, BOS, END] {
            v.intern(w);
        }
        v
    }

    fn intern(&mut self, w: &str) -> u32 {
        if let Some(&id) = self.index.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.to_owned());
        self.index.insert(w.to_owned(), id);
        id
    }

    fn lookup(&self, w: &str) -> Option<u32> {
        self.index.get(w).copied()
    }

    fn id_or_unk(&self, w: &str) -> u32 {
        self.lookup(w).unwrap_or(UNK_ID)
    }

    fn len(&self) -> usize {
        self.words.len()
    }
}

#[derive(Debug, Clone)]
pub struct NgramModel {
    order: usize,
    vocab: Vocab,
    /// `counts[n - 1]` holds n-gram counts.
    counts: Vec<HashMap<Vec<u32>, u64>>,
    /// `context_totals[k]` maps a length-k history to its continuation count.
    context_totals: Vec<HashMap<Vec<u32>, u64>>,
    quartiles: Vec<Quartiles>,
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(order))
    }
}

impl NgramModel {
    pub fn train<S: AsRef<[String]>>(sentences: &[S], order: usize) -> Result<Self> {
        check_order(order)?;
        if sentences.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let mut vocab = Vocab::with_reserved();
        let mut counts: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); order];
        let mut padded = Vec::new();
        for s in sentences {
            padded.clear();
            padded.extend(std::iter::repeat_n(BOS_ID, order - 1));
            padded.extend(s.as_ref().iter().map(|w| vocab.intern(w)));
            padded.push(END_ID);
            for n in 1..=order {
                for gram in padded.windows(n) {
                    *counts[n - 1].entry(gram.to_vec()).or_insert(0) += 1;
                }
            }
        }
        Ok(Self::from_counts(order, vocab, counts))
    }

    fn from_counts(order: usize, vocab: Vocab, counts: Vec<HashMap<Vec<u32>, u64>>) -> Self {
        let mut context_totals: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); order];
        for (n, table) in counts.iter().enumerate() {
            for (gram, &c) in table {
                *context_totals[n].entry(gram[..n].to_vec()).or_insert(0) += c;
            }
        }
        let quartiles = counts
            .iter()
            .map(|table| {
                Quartiles::nearest_rank(
                    table
                        .iter()
                        .filter(|(g, _)| g.iter().all(|&id| id > END_ID))
                        .map(|(_, &c)| c)
                        .collect(),
                )
            })
            .collect();
        NgramModel {
            order,
            vocab,
            counts,
            context_totals,
            quartiles,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Vocabulary size, including the three reserved markers.
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> impl Iterator<Item = &str> {
        self.vocab.words.iter().map(String::as_str)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vocab.lookup(word).is_some()
    }

    /// Quartiles for n-grams of length `n` (1-based).
    pub fn quartiles(&self, n: usize) -> Quartiles {
        self.quartiles[n - 1]
    }

    /// Contexts (histories) observed at each length, for inspection and tests.
    pub fn contexts(&self, len: usize) -> Vec<Vec<String>> {
        self.context_totals[len]
            .keys()
            .map(|ids| self.words_of(ids))
            .collect()
    }

    fn words_of(&self, ids: &[u32]) -> Vec<String> {
        ids.iter()
            .map(|&i| self.vocab.words[i as usize].clone())
            .collect()
    }

    /// Corpus frequency of an n-gram. Grams with out-of-vocabulary tokens
    /// or longer than the model order have frequency 0.
    pub fn count(&self, gram: &[String]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        let ids: Option<Vec<u32>> = gram.iter().map(|w| self.vocab.lookup(w)).collect();
        ids.and_then(|ids| self.counts[gram.len() - 1].get(&ids).copied())
            .unwrap_or(0)
    }

    fn cond_prob_ids(&self, context: &[u32], word: u32) -> f64 {
        let k = context.len();
        let mut gram = Vec::with_capacity(k + 1);
        gram.extend_from_slice(context);
        gram.push(word);
        let joint = self.counts[k].get(&gram).copied().unwrap_or(0);
        let total = self.context_totals[k].get(context).copied().unwrap_or(0);
        (joint as f64 + 1.0) / (total as f64 + self.vocab.len() as f64)
    }

    fn trim_context<'a, T>(&self, context: &'a [T]) -> &'a [T] {
        let keep = context.len().min(self.order - 1);
        &context[context.len() - keep..]
    }

    /// Laplace estimate of `P(word | context)`. Only the last `order - 1`
    /// context tokens are used; unknown tokens map to the UNK marker.
    pub fn cond_prob(&self, word: &str, context: &[String]) -> f64 {
        let ctx: Vec<u32> = self
            .trim_context(context)
            .iter()
            .map(|w| self.vocab.id_or_unk(w))
            .collect();
        self.cond_prob_ids(&ctx, self.vocab.id_or_unk(word))
    }

    /// `P(w | context)` for every vocabulary entry, in vocabulary order.
    pub fn distribution(&self, context: &[String]) -> Vec<f64> {
        let ctx: Vec<u32> = self
            .trim_context(context)
            .iter()
            .map(|w| self.vocab.id_or_unk(w))
            .collect();
        (0..self.vocab.len() as u32)
            .map(|w| self.cond_prob_ids(&ctx, w))
            .collect()
    }

    /// Mean natural-log probability per scored position. The sentence is
    /// padded like training data and the end marker is scored too, so an
    /// empty sentence scores the end marker alone.
    pub fn sentence_log_prob(&self, tokens: &[String]) -> f64 {
        let history = self.order - 1;
        let mut padded = vec![BOS_ID; history];
        padded.extend(tokens.iter().map(|w| self.vocab.id_or_unk(w)));
        padded.push(END_ID);

        let positions = padded.len() - history;
        let sum: f64 = (history..padded.len())
            .map(|i| self.cond_prob_ids(&padded[i - history..i], padded[i]).ln())
            .sum();
        sum / positions as f64
    }

    /// Frequency band of an n-gram with `1 <= n <= order`.
    pub fn freq_class(&self, gram: &[String]) -> FreqClass {
        assert!(
            (1..=self.order).contains(&gram.len()),
            "n-gram length {} outside 1..={}",
            gram.len(),
            self.order
        );
        self.quartiles[gram.len() - 1].classify(self.count(gram))
    }

    /// Fraction of `grams` seen at least once in training; 0 for no grams.
    pub fn seen_fraction<G: AsRef<[String]>>(&self, grams: &[G]) -> f64 {
        if grams.is_empty() {
            return 0.0;
        }
        let seen = grams.iter().filter(|g| self.count(g.as_ref()) > 0).count();
        seen as f64 / grams.len() as f64
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{FORMAT_TAG}\t{FORMAT_VERSION}").unwrap();
        writeln!(out, "order\t{}", self.order).unwrap();
        writeln!(out, "vocab_size\t{}", self.vocab.len()).unwrap();
        for (i, q) in self.quartiles.iter().enumerate() {
            writeln!(out, "q1_{}\t{}", i + 1, q.q1).unwrap();
            writeln!(out, "q3_{}\t{}", i + 1, q.q3).unwrap();
        }
        for (i, table) in self.counts.iter().enumerate() {
            let mut rows: Vec<(Vec<&str>, u64)> = table
                .iter()
                .map(|(g, &c)| {
                    let words = g.iter().map(|&id| self.vocab.words[id as usize].as_str());
                    (words.collect(), c)
                })
                .collect();
            rows.sort_unstable();
            writeln!(out, "ngrams\t{}\t{}", i + 1, rows.len()).unwrap();
            for (words, c) in rows {
                writeln!(out, "{}\t{}", words.join(" "), c).unwrap();
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let corrupt = |msg: String| Error::CorruptModel(msg);
        let mut lines = text.lines();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| corrupt(format!("truncated before {what}")))
        };

        let header = next("header")?;
        match header.split_once('\t') {
            Some((FORMAT_TAG, FORMAT_VERSION)) => {}
            Some((FORMAT_TAG, v)) => {
                return Err(Error::VersionMismatch {
                    expected: FORMAT_VERSION.into(),
                    found: v.into(),
                })
            }
            _ => return Err(corrupt("not an n-gram model file".into())),
        }

        fn field<T: std::str::FromStr>(line: &str, key: &str) -> Result<T> {
            line.split_once('\t')
                .filter(|(k, _)| *k == key)
                .and_then(|(_, v)| v.parse().ok())
                .ok_or_else(|| Error::CorruptModel(format!("expected {key}, got {line:?}")))
        }

        let order: usize = field(next("order")?, "order")?;
        check_order(order).map_err(|_| corrupt(format!("bad order {order}")))?;
        let vocab_size: usize = field(next("vocab_size")?, "vocab_size")?;
        let mut stored_quartiles = Vec::with_capacity(order);
        for n in 1..=order {
            let q1 = field(next("quartiles")?, &format!("q1_{n}"))?;
            let q3 = field(next("quartiles")?, &format!("q3_{n}"))?;
            stored_quartiles.push(Quartiles { q1, q3 });
        }

        let mut vocab = Vocab::with_reserved();
        let mut counts: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); order];
        for n in 1..=order {
            let line = next("n-gram section")?;
            let parts: Vec<&str> = line.split('\t').collect();
            let entries: usize = match parts.as_slice() {
                ["ngrams", k, m] if k.parse() == Ok(n) => {
                    m.parse().map_err(|_| corrupt(format!("bad entry count {m:?}")))?
                }
                _ => return Err(corrupt(format!("expected section ngrams {n}, got {line:?}"))),
            };
            for _ in 0..entries {
                let line = next("n-gram entry")?;
                let (gram, c) = line
                    .split_once('\t')
                    .ok_or_else(|| corrupt(format!("bad entry {line:?}")))?;
                let c: u64 = c
                    .parse()
                    .ok()
                    .filter(|&c| c >= 1)
                    .ok_or_else(|| corrupt(format!("bad count in {line:?}")))?;
                let ids: Vec<u32> = gram.split(' ').map(|w| vocab.intern(w)).collect();
                if ids.len() != n {
                    return Err(corrupt(format!("{line:?} is not a {n}-gram")));
                }
                if counts[n - 1].insert(ids, c).is_some() {
                    return Err(corrupt(format!("duplicate entry {gram:?}")));
                }
            }
        }
        if next("end marker")? != "end" {
            return Err(corrupt("missing end marker".into()));
        }

        if vocab.len() != vocab_size {
            return Err(corrupt(format!(
                "vocab_size {vocab_size} but {} distinct tokens",
                vocab.len()
            )));
        }
        let model = Self::from_counts(order, vocab, counts);
        if model.quartiles != stored_quartiles {
            return Err(corrupt("quartiles disagree with counts".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fsutil::write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&fsutil::read_to_string(path)?)
    }
}
