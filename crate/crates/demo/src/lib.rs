//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use mtqe::corpus::{HumanJudgment, ParallelCorpus, SentencePair, Side};
use mtqe::evaluation::{confusion, histogram};
use mtqe::features::{extract_features, FEATURE_NAMES};
use mtqe::grading::{aggregate_judgment, Grade};
use mtqe::synth::{self, ClusterSpec};
use mtqe::{NaiveBayesModel, NgramModel, TranslationLexicon};

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Score and grade for ten parameter scores, each 0 to 4.
#[wasm_bindgen]
pub fn grade_judgment(params: &[u8]) -> String {
    respond((|| {
        let params: [u8; 10] = params
            .try_into()
            .map_err(|_| format!("expected 10 parameter scores, got {}", params.len()))?;
        let judgment = HumanJudgment::new(0, params).map_err(|e| e.to_string())?;
        let score = aggregate_judgment(&judgment);
        Ok(json!({
            "total": judgment.total(),
            "score": score.value(),
            "grade": score.grade().as_str(),
        }))
    })())
}

/// Seeded toy parallel corpus, one sentence per line on each side.
#[wasm_bindgen]
pub fn toy_corpus(pairs: usize, seed: u64) -> String {
    let toy = synth::toy_corpus(pairs, &mut synth::rng(seed));
    json!({ "source": toy.source_text(), "target": toy.target_text() }).to_string()
}

/// Train language models and a lexicon on the given corpus, then extract
/// the sixteen features for one sentence pair.
#[wasm_bindgen]
pub fn analyze_pair(
    src_corpus: &str,
    tgt_corpus: &str,
    source: &str,
    target: &str,
    order: usize,
    threshold: f64,
) -> String {
    respond((|| {
        let src_lines: Vec<&str> = src_corpus.lines().collect();
        let tgt_lines: Vec<&str> = tgt_corpus.lines().collect();
        let corpus = ParallelCorpus::from_lines(&src_lines, &tgt_lines).map_err(|e| e.to_string())?;
        let src_lm = NgramModel::train(&corpus.side(Side::Source), order).map_err(|e| e.to_string())?;
        let tgt_lm = NgramModel::train(&corpus.side(Side::Target), order).map_err(|e| e.to_string())?;
        let lexicon = TranslationLexicon::build(&corpus, threshold).map_err(|e| e.to_string())?;

        let pair = SentencePair::from_text(0, source, target);
        let features = extract_features(&pair, &src_lm, &tgt_lm, &lexicon);
        let named: Vec<Value> = FEATURE_NAMES
            .iter()
            .zip(features.values())
            .map(|(name, value)| json!({ "name": name, "value": value }))
            .collect();
        Ok(json!({
            "source_tokens": pair.source,
            "target_tokens": pair.target,
            "features": named,
            "lexicon_entries": lexicon.len(),
            "source_vocab": src_lm.vocab_size(),
            "target_vocab": tgt_lm.vocab_size(),
        }))
    })())
}

/// Train on four Gaussian clusters and report held-out accuracy and the
/// confusion matrix.
#[wasm_bindgen]
pub fn cluster_demo(separation: f64, per_class: usize, seed: u64) -> String {
    respond((|| {
        if !(separation.is_finite() && separation >= 0.0) {
            return Err(format!("separation must be a non-negative number, got {separation}"));
        }
        if per_class == 0 {
            return Err("per_class must be at least 1".into());
        }
        let spec = ClusterSpec {
            per_class,
            separation,
            sigma: 1.0,
        };
        let mut rng = synth::rng(seed);
        let train = synth::gaussian_clusters(&spec, &mut rng);
        let test = synth::gaussian_clusters(&spec, &mut rng);
        let model = NaiveBayesModel::train(&train).map_err(|e| e.to_string())?;

        let human: Vec<Grade> = test.iter().map(|(_, g)| *g).collect();
        let predicted: Vec<Grade> = test.iter().map(|(x, _)| model.predict(x).predicted).collect();
        let matrix = confusion(&human, &predicted).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<usize>> = Grade::ALL
            .iter()
            .map(|h| Grade::ALL.iter().map(|p| matrix.cell(*h, *p)).collect())
            .collect();
        let agreement = matrix.agreement();
        Ok(json!({
            "grades": Grade::ALL.map(|g| g.as_str()),
            "confusion": rows,
            "predicted_counts": histogram(&predicted).counts(),
            "same": agreement.same,
            "total": agreement.total,
            "accuracy": agreement.same as f64 / agreement.total as f64,
        }))
    })())
}
