//! Seeded synthetic data: labeled Gaussian clusters in feature space, and a
//! toy English→Hindi parallel corpus with human-style judgments whose
//! translation quality is controlled per sentence.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{HumanJudgment, JUDGMENT_PARAMS};
use crate::features::{FeatureVector, FEATURE_COUNT};
use crate::grading::Grade;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Four classes of isotropic Gaussians. Class `k` is centred at
/// `separation · σ` along feature `k` and 0 elsewhere, so any two centres
/// are `separation · σ · √2` apart.
#[derive(Debug, Clone, Copy)]
pub struct ClusterSpec {
    pub per_class: usize,
    pub separation: f64,
    pub sigma: f64,
}

pub fn class_center(grade: Grade, spec: &ClusterSpec) -> [f64; FEATURE_COUNT] {
    let mut c = [0.0; FEATURE_COUNT];
    c[grade.index()] = spec.separation * spec.sigma;
    c
}

pub fn gaussian_clusters(spec: &ClusterSpec, rng: &mut impl Rng) -> Vec<(FeatureVector, Grade)> {
    let noise = Normal::new(0.0, spec.sigma).expect("sigma must be finite and non-negative");
    let mut rows = Vec::with_capacity(4 * spec.per_class);
    for grade in Grade::ALL {
        let center = class_center(grade, spec);
        for _ in 0..spec.per_class {
            let mut v = center;
            for x in v.iter_mut() {
                *x += noise.sample(rng);
            }
            rows.push((FeatureVector(v), grade));
        }
    }
    rows
}

const LEXICON: &[(&str, &str)] = &[
    ("the", "यह"),
    ("boy", "लड़का"),
    ("girl", "लड़की"),
    ("man", "आदमी"),
    ("woman", "औरत"),
    ("teacher", "शिक्षक"),
    ("farmer", "किसान"),
    ("doctor", "डॉक्टर"),
    ("child", "बच्चा"),
    ("city", "शहर"),
    ("village", "गाँव"),
    ("house", "घर"),
    ("school", "विद्यालय"),
    ("market", "बाज़ार"),
    ("river", "नदी"),
    ("water", "पानी"),
    ("food", "खाना"),
    ("book", "किताब"),
    ("letter", "पत्र"),
    ("road", "सड़क"),
    ("goes", "जाता"),
    ("comes", "आता"),
    ("reads", "पढ़ता"),
    ("writes", "लिखता"),
    ("eats", "खाता"),
    ("drinks", "पीता"),
    ("sees", "देखता"),
    ("buys", "खरीदता"),
    ("to", "को"),
    ("in", "में"),
    ("from", "से"),
    ("with", "साथ"),
    ("big", "बड़ा"),
    ("small", "छोटा"),
    ("old", "पुराना"),
    ("new", "नया"),
    ("good", "अच्छा"),
    ("every", "हर"),
    ("day", "दिन"),
    ("today", "आज"),
];

/// One generated sentence pair plus its hidden quality level (0 worst,
/// 3 best) and the judgment drawn from that level.
#[derive(Debug, Clone)]
pub struct ToyPair {
    pub source: String,
    pub target: String,
    pub level: usize,
    pub judgment: HumanJudgment,
}

#[derive(Debug, Clone, Default)]
pub struct ToyCorpus {
    pub pairs: Vec<ToyPair>,
}

impl ToyCorpus {
    pub fn source_text(&self) -> String {
        self.pairs.iter().map(|p| format!("{}\n", p.source)).collect()
    }

    pub fn target_text(&self) -> String {
        self.pairs.iter().map(|p| format!("{}\n", p.target)).collect()
    }

    pub fn judgments(&self) -> Vec<HumanJudgment> {
        self.pairs.iter().map(|p| p.judgment).collect()
    }
}

fn garbage_word(rng: &mut impl Rng) -> String {
    let len = rng.random_range(2..=4);
    (0..len)
        .map(|_| char::from_u32(rng.random_range(0x0915..=0x0939)).unwrap())
        .collect()
}

/// Per-word (garble, drop, copy-untranslated) probabilities by level.
fn corruption(level: usize) -> (f64, f64, f64) {
    match level {
        3 => (0.0, 0.0, 0.0),
        2 => (0.15, 0.05, 0.05),
        1 => (0.35, 0.15, 0.15),
        _ => (0.6, 0.2, 0.15),
    }
}

pub fn toy_corpus(n_pairs: usize, rng: &mut impl Rng) -> ToyCorpus {
    let mut pairs = Vec::with_capacity(n_pairs);
    for id in 0..n_pairs {
        let level = rng.random_range(0..4);
        let len = rng.random_range(3..=9);
        let words: Vec<&(&str, &str)> = (0..len).map(|_| LEXICON.choose(rng).unwrap()).collect();

        let mut source: Vec<String> = words.iter().map(|(en, _)| en.to_string()).collect();
        if rng.random_bool(0.5) {
            source[0] = capitalize(&source[0]);
        }
        let source = format!("{}.", source.join(" "));

        let (garble, drop, copy) = corruption(level);
        let mut target: Vec<String> = Vec::with_capacity(len + 2);
        for (en, hi) in &words {
            let r: f64 = rng.random();
            if r < garble {
                target.push(garbage_word(rng));
            } else if r < garble + drop {
            } else if r < garble + drop + copy {
                target.push(en.to_string());
            } else {
                target.push(hi.to_string());
            }
        }
        if level == 0 && rng.random_bool(0.5) {
            target.push(garbage_word(rng));
        }
        let mut target = target.join(" ");
        if level >= 2 || rng.random_bool(0.3) {
            target.push_str(" ।");
        }

        // Each parameter sits at `level` or one above it, so the sum falls in
        // the grade band for `level` (with a little spill at the edges).
        let mut params = [0u8; JUDGMENT_PARAMS];
        for p in params.iter_mut() {
            *p = (level + rng.random_bool(0.5) as usize).min(4) as u8;
        }
        let judgment = HumanJudgment::new(id, params).expect("params in range");

        pairs.push(ToyPair {
            source,
            target,
            level,
            judgment,
        });
    }
    ToyCorpus { pairs }
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::grade_judgment;

    #[test]
    fn clusters_are_seeded() {
        let spec = ClusterSpec {
            per_class: 5,
            separation: 6.0,
            sigma: 1.0,
        };
        let a = gaussian_clusters(&spec, &mut rng(7));
        let b = gaussian_clusters(&spec, &mut rng(7));
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert_ne!(a, gaussian_clusters(&spec, &mut rng(8)));
    }

    #[test]
    fn toy_corpus_grades_track_level() {
        let c = toy_corpus(400, &mut rng(0));
        let mut agree = 0;
        for p in &c.pairs {
            if grade_judgment(&p.judgment).index() == p.level {
                agree += 1;
            }
        }
        assert!(agree > 300, "{agree}");
        assert_eq!(c.source_text().lines().count(), 400);
        assert_eq!(c.target_text().lines().count(), 400);
        assert!(c.pairs.iter().all(|p| !p.target.contains('\n')));
    }
}
