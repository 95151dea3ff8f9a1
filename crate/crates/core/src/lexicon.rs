//! Source→target translation lexicon induced from sentence-level
//! co-occurrence, scored with the Dice coefficient.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};
use crate::fsutil;

pub const DEFAULT_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationLexicon {
    entries: BTreeMap<String, BTreeMap<String, f64>>,
    threshold: f64,
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

/// `2·cooc / (count_s + count_t)`.
pub fn dice(cooc: u64, count_s: u64, count_t: u64) -> f64 {
    if cooc == 0 {
        return 0.0;
    }
    2.0 * cooc as f64 / (count_s + count_t) as f64
}

impl TranslationLexicon {
    /// Keeps every co-occurring (source, target) word pair whose Dice score
    /// is at least `threshold`. Counts are per sentence pair: a word repeated
    /// within one sentence counts once.
    pub fn build(corpus: &ParallelCorpus, threshold: f64) -> Result<Self> {
        check_threshold(threshold)?;
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let mut src_count: HashMap<&str, u64> = HashMap::new();
        let mut tgt_count: HashMap<&str, u64> = HashMap::new();
        let mut cooc: HashMap<(&str, &str), u64> = HashMap::new();
        for pair in corpus.pairs() {
            let src: HashSet<&str> = pair.source.iter().map(String::as_str).collect();
            let tgt: HashSet<&str> = pair.target.iter().map(String::as_str).collect();
            for &s in &src {
                *src_count.entry(s).or_insert(0) += 1;
                for &t in &tgt {
                    *cooc.entry((s, t)).or_insert(0) += 1;
                }
            }
            for &t in &tgt {
                *tgt_count.entry(t).or_insert(0) += 1;
            }
        }

        let mut entries: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for ((s, t), c) in cooc {
            let score = dice(c, src_count[s], tgt_count[t]);
            if score >= threshold {
                entries
                    .entry(s.to_owned())
                    .or_default()
                    .insert(t.to_owned(), score);
            }
        }
        Ok(TranslationLexicon { entries, threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn translations(&self, source: &str) -> Option<&BTreeMap<String, f64>> {
        self.entries.get(source)
    }

    pub fn score(&self, source: &str, target: &str) -> Option<f64> {
        self.entries.get(source)?.get(target).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Mean number of stored translations per source token (0 for tokens
    /// absent from the lexicon and for an empty sentence).
    pub fn translations_per_word(&self, source_tokens: &[String]) -> f64 {
        if source_tokens.is_empty() {
            return 0.0;
        }
        let total: usize = source_tokens
            .iter()
            .map(|w| self.entries.get(w).map_or(0, BTreeMap::len))
            .sum();
        total as f64 / source_tokens.len() as f64
    }

    /// `source<TAB>target<TAB>score` rows sorted by source then target.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, ts) in &self.entries {
            for (t, score) in ts {
                writeln!(out, "{s}\t{t}\t{score:e}").unwrap();
            }
        }
        out
    }

    /// Parses a lexicon TSV. The threshold of a loaded lexicon is the lowest
    /// score it contains (1 for an empty file).
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        let mut threshold = 1.0f64;
        for (idx, line) in text.lines().enumerate() {
            let row = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').collect();
            let [s, t, score] = cells.as_slice() else {
                return Err(Error::malformed(row, "expected source, target, score"));
            };
            let score: f64 = score
                .parse()
                .ok()
                .filter(|v: &f64| *v > 0.0 && *v <= 1.0)
                .ok_or_else(|| Error::malformed(row, format!("score {score:?} outside (0, 1]")))?;
            if s.is_empty() || t.is_empty() {
                return Err(Error::malformed(row, "empty token"));
            }
            threshold = threshold.min(score);
            entries
                .entry(s.to_string())
                .or_default()
                .insert(t.to_string(), score);
        }
        Ok(TranslationLexicon { entries, threshold })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fsutil::write_atomic(path, self.to_tsv().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_tsv(&fsutil::read_to_string(path)?)
    }
}
