//! Reference-free quality estimation for English→Hindi machine translation.
//!
//! The pipeline tokenizes a parallel corpus, trains n-gram language models
//! for both sides and a Dice translation lexicon, extracts sixteen features
//! per sentence pair, and fits a Gaussian Naive Bayes classifier against
//! graded human judgments. The [`evaluation`] module compares predicted and
//! human grades.

pub mod bayes;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
mod fsutil;
pub mod grading;
pub mod lexicon;
pub mod lm;
pub mod synth;

pub use bayes::{NaiveBayesModel, Posterior};
pub use corpus::{tokenize, CorpusStats, HumanJudgment, ParallelCorpus, SentencePair, Side};
pub use error::{Error, Result};
pub use evaluation::{AgreementReport, ConfusionMatrix, EvaluationReport, GradeHistogram};
pub use features::{extract_features, FeatureRow, FeatureVector, FEATURE_COUNT};
pub use fsutil::write_atomic;
pub use grading::{Grade, QualityScore};
pub use lexicon::TranslationLexicon;
pub use lm::{FreqClass, NgramModel};
