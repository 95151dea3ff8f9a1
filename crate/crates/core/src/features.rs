//! The sixteen sentence-pair features used for quality estimation.
//!
//! | #  | feature                                               |
//! |----|-------------------------------------------------------|
//! | 1  | source token count                                    |
//! | 2  | target token count                                    |
//! | 3  | mean source token length, in Unicode scalars          |
//! | 4  | source LM mean log-probability                        |
//! | 5  | target LM mean log-probability                        |
//! | 6  | target tokens per distinct target token               |
//! | 7  | mean lexicon translations per source token            |
//! | 8  | % low-frequency source unigrams                       |
//! | 9  | % high-frequency source unigrams                      |
//! | 10 | % low-frequency source bigrams                        |
//! | 11 | % high-frequency source bigrams                       |
//! | 12 | % high-frequency source trigrams                      |
//! | 13 | % low-frequency source trigrams                       |
//! | 14 | % source unigrams seen in the LM training data        |
//! | 15 | source punctuation tokens                             |
//! | 16 | target punctuation tokens                             |
//!
//! Rows 12 and 13 are deliberately high-then-low. Percentages are on a
//! 0..=100 scale, and a sentence too short to contain any n-gram of a given
//! length scores 0 on the corresponding percentages.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::{is_punctuation_token, SentencePair};
use crate::error::{Error, Result};
use crate::fsutil;
use crate::grading::Grade;
use crate::lexicon::TranslationLexicon;
use crate::lm::{FreqClass, NgramModel};

pub const FEATURE_COUNT: usize = 16;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "src_token_count",
    "tgt_token_count",
    "avg_src_token_len",
    "src_lm_logprob",
    "tgt_lm_logprob",
    "tgt_tokens_per_type",
    "avg_translations_per_src_word",
    "pct_low_freq_unigrams",
    "pct_high_freq_unigrams",
    "pct_low_freq_bigrams",
    "pct_high_freq_bigrams",
    "pct_high_freq_trigrams",
    "pct_low_freq_trigrams",
    "pct_unigrams_seen",
    "src_punct_count",
    "tgt_punct_count",
];

/// Features stored as whole numbers; written without decimals.
const INTEGER_FEATURES: [usize; 4] = [0, 1, 14, 15];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    /// Feature by its 1-based row number.
    pub fn get(&self, number: usize) -> f64 {
        self.0[number - 1]
    }

    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.0
    }

    /// Checks the range and consistency rules every extracted vector obeys.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let f = |n: usize| self.get(n);
        let is_count = |v: f64| v >= 0.0 && v.fract() == 0.0;
        for n in [1, 2, 15, 16] {
            if !is_count(f(n)) {
                return Err(format!("f{n} = {} is not a count", f(n)));
            }
        }
        if f(15) > f(1) {
            return Err("f15 > f1".into());
        }
        if f(16) > f(2) {
            return Err("f16 > f2".into());
        }
        for n in 8..=14 {
            if !(0.0..=100.0).contains(&f(n)) {
                return Err(format!("f{n} = {} outside [0, 100]", f(n)));
            }
        }
        // low/high pairs never overlap
        for (a, b) in [(8, 9), (10, 11), (12, 13)] {
            if f(a) + f(b) > 100.0 + 1e-9 {
                return Err(format!("f{a} + f{b} > 100"));
            }
        }
        for n in [4, 5] {
            if !(f(n).is_finite() && f(n) <= 0.0) {
                return Err(format!("f{n} = {} is not a finite log-probability", f(n)));
            }
        }
        let f6_ok = if f(2) > 0.0 { f(6) >= 1.0 } else { f(6) == 0.0 };
        if !f6_ok {
            return Err(format!("f6 = {} inconsistent with f2 = {}", f(6), f(2)));
        }
        let f3_ok = if f(1) > 0.0 { f(3) > 0.0 } else { f(3) == 0.0 };
        if !f3_ok {
            return Err(format!("f3 = {} inconsistent with f1 = {}", f(3), f(1)));
        }
        if !(f(7).is_finite() && f(7) >= 0.0) {
            return Err(format!("f7 = {} negative", f(7)));
        }
        Ok(())
    }
}

/// Percent of the sentence's n-grams the model classes Low and High.
fn freq_band_percentages(tokens: &[String], n: usize, lm: &NgramModel) -> (f64, f64) {
    if n > lm.order() || tokens.len() < n {
        return (0.0, 0.0);
    }
    let (mut low, mut high, mut total) = (0usize, 0usize, 0usize);
    for gram in tokens.windows(n) {
        total += 1;
        match lm.freq_class(gram) {
            FreqClass::Low => low += 1,
            FreqClass::High => high += 1,
            FreqClass::Mid => {}
        }
    }
    let pct = |k: usize| 100.0 * k as f64 / total as f64;
    (pct(low), pct(high))
}

pub fn extract_features(
    pair: &SentencePair,
    src_lm: &NgramModel,
    tgt_lm: &NgramModel,
    lexicon: &TranslationLexicon,
) -> FeatureVector {
    let src = &pair.source;
    let tgt = &pair.target;

    let avg_len = if src.is_empty() {
        0.0
    } else {
        src.iter().map(|t| t.chars().count()).sum::<usize>() as f64 / src.len() as f64
    };
    let tgt_types = tgt.iter().collect::<HashSet<_>>().len();
    let tokens_per_type = if tgt.is_empty() {
        0.0
    } else {
        tgt.len() as f64 / tgt_types as f64
    };

    let (uni_low, uni_high) = freq_band_percentages(src, 1, src_lm);
    let (bi_low, bi_high) = freq_band_percentages(src, 2, src_lm);
    let (tri_low, tri_high) = freq_band_percentages(src, 3, src_lm);
    let unigrams: Vec<&[String]> = src.chunks(1).collect();
    let seen = 100.0 * src_lm.seen_fraction(&unigrams);

    let punct = |toks: &[String]| toks.iter().filter(|t| is_punctuation_token(t)).count() as f64;

    FeatureVector([
        src.len() as f64,
        tgt.len() as f64,
        avg_len,
        src_lm.sentence_log_prob(src),
        tgt_lm.sentence_log_prob(tgt),
        tokens_per_type,
        lexicon.translations_per_word(src),
        uni_low,
        uni_high,
        bi_low,
        bi_high,
        tri_high,
        tri_low,
        seen,
        punct(src),
        punct(tgt),
    ])
}

/// Extracts features for many pairs on all available cores. Output order
/// follows input order.
pub fn extract_all(
    pairs: &[SentencePair],
    src_lm: &NgramModel,
    tgt_lm: &NgramModel,
    lexicon: &TranslationLexicon,
) -> Vec<FeatureVector> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(pairs.len().div_ceil(64).max(1));
    if workers <= 1 {
        return pairs
            .iter()
            .map(|p| extract_features(p, src_lm, tgt_lm, lexicon))
            .collect();
    }
    let chunk = pairs.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|p| extract_features(p, src_lm, tgt_lm, lexicon))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("feature worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: usize,
    pub features: FeatureVector,
    pub grade: Option<Grade>,
}

fn header(labeled: bool) -> String {
    let mut h = String::from("id");
    for i in 1..=FEATURE_COUNT {
        write!(h, ",f{i}").unwrap();
    }
    if labeled {
        h.push_str(",grade");
    }
    h
}

/// Renders rows as CSV sorted by id. Either every row carries a grade or
/// none does.
pub fn format_features(rows: &[FeatureRow]) -> Result<String> {
    let labeled = rows.first().is_some_and(|r| r.grade.is_some());
    if rows.iter().any(|r| r.grade.is_some() != labeled) {
        return Err(Error::MixedLabeling);
    }
    let mut sorted: Vec<&FeatureRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.id);

    let mut out = header(labeled);
    out.push('\n');
    for row in sorted {
        write!(out, "{}", row.id).unwrap();
        for (i, v) in row.features.0.iter().enumerate() {
            if INTEGER_FEATURES.contains(&i) {
                write!(out, ",{}", *v as u64).unwrap();
            } else {
                write!(out, ",{v:.6}").unwrap();
            }
        }
        if let Some(g) = row.grade {
            write!(out, ",{g}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_features(rows: &[FeatureRow], path: &Path) -> Result<()> {
    fsutil::write_atomic(path, format_features(rows)?.as_bytes())
}

pub fn parse_features(text: &str) -> Result<Vec<FeatureRow>> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let labeled = match lines.next() {
        Some(h) if h == header(true) => true,
        Some(h) if h == header(false) => false,
        _ => return Err(Error::malformed(0, "expected header id,f1,..,f16[,grade]")),
    };
    let width = FEATURE_COUNT + 1 + labeled as usize;

    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width {
            return Err(Error::malformed(
                row,
                format!("expected {width} cells, found {}", cells.len()),
            ));
        }
        let id = cells[0]
            .parse()
            .map_err(|_| Error::malformed(row, format!("bad id {:?}", cells[0])))?;
        let mut values = [0.0; FEATURE_COUNT];
        for (v, cell) in values.iter_mut().zip(&cells[1..=FEATURE_COUNT]) {
            *v = cell
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::malformed(row, format!("bad value {cell:?}")))?;
        }
        let grade = if labeled {
            Some(cells[width - 1].parse::<Grade>()?)
        } else {
            None
        };
        rows.push(FeatureRow {
            id,
            features: FeatureVector(values),
            grade,
        });
    }
    Ok(rows)
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureRow>> {
    parse_features(&fsutil::read_to_string(path)?)
}
