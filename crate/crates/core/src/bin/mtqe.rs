use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mtqe::bayes::{NaiveBayesModel, DEFAULT_VARIANCE_FLOOR};
use mtqe::corpus::{self, Side};
use mtqe::evaluation::{self, EvaluationReport};
use mtqe::features::{self, FeatureRow};
use mtqe::grading::grade_judgment;
use mtqe::lexicon::{TranslationLexicon, DEFAULT_THRESHOLD};
use mtqe::lm::{NgramModel, DEFAULT_ORDER};
use mtqe::{synth, write_atomic, Error, Result};

/// Reference-free quality estimation for English→Hindi machine translation.
#[derive(Debug, Parser)]
#[command(name = "mtqe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train an n-gram language model on one side of a corpus.
    BuildLm {
        /// One sentence per line.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(Side))]
        side: Side,
        #[arg(long, default_value_t = DEFAULT_ORDER as u8, value_parser = clap::value_parser!(u8).range(1..=5))]
        order: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Induce a Dice translation lexicon from a parallel corpus.
    BuildLexicon {
        #[arg(long)]
        pairs_src: PathBuf,
        #[arg(long)]
        pairs_tgt: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the sixteen features for every sentence pair.
    Extract {
        #[arg(long)]
        pairs_src: PathBuf,
        #[arg(long)]
        pairs_tgt: PathBuf,
        #[arg(long)]
        src_lm: PathBuf,
        #[arg(long)]
        tgt_lm: PathBuf,
        /// Lexicon TSV (source, target, score).
        #[arg(long)]
        lexicon: PathBuf,
        /// Human judgment TSV; when given, every row is labeled with a grade.
        #[arg(long)]
        judgments: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a Gaussian Naive Bayes model on a labeled feature file.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VARIANCE_FLOOR)]
        variance_floor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict grades for a feature file, writing `id,grade` CSV.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare human and predicted grades.
    Evaluate {
        /// CSV with `id` and `grade` columns (a labeled feature file works).
        #[arg(long)]
        human: PathBuf,
        #[arg(long)]
        predicted: PathBuf,
        /// Histogram and agreement CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also write the text report (histograms, confusion matrix) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print sentence, word and unique-word counts for a corpus file.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(Side))]
        side: Side,
    },
    /// Write a seeded toy parallel corpus with judgments.
    Synth {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Receives src.txt, tgt.txt and judgments.tsv.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildLm {
            corpus,
            side,
            order,
            out,
        } => {
            let sentences = corpus::load_side(&corpus, side)?;
            let model = NgramModel::train(&sentences, order as usize)?;
            model.save(&out)?;
            println!("{}", corpus::sentence_stats(&sentences));
            println!("vocab_size\t{}", model.vocab_size());
        }
        Command::BuildLexicon {
            pairs_src,
            pairs_tgt,
            threshold,
            out,
        } => {
            let corpus = corpus::load_parallel(&pairs_src, &pairs_tgt)?;
            let lexicon = TranslationLexicon::build(&corpus, threshold)?;
            lexicon.save(&out)?;
            println!("entries\t{}", lexicon.len());
        }
        Command::Extract {
            pairs_src,
            pairs_tgt,
            src_lm,
            tgt_lm,
            lexicon,
            judgments,
            out,
        } => {
            let corpus = corpus::load_parallel(&pairs_src, &pairs_tgt)?;
            let src_lm = NgramModel::load(&src_lm)?;
            let tgt_lm = NgramModel::load(&tgt_lm)?;
            let lexicon = TranslationLexicon::load(&lexicon)?;

            let grades = match judgments {
                Some(path) => Some(grades_for(&path, corpus.len())?),
                None => None,
            };
            let vectors = features::extract_all(corpus.pairs(), &src_lm, &tgt_lm, &lexicon);
            let rows: Vec<FeatureRow> = corpus
                .pairs()
                .iter()
                .zip(vectors)
                .map(|(pair, features)| FeatureRow {
                    id: pair.id,
                    features,
                    grade: grades.as_ref().map(|g| g[pair.id]),
                })
                .collect();
            features::write_features(&rows, &out)?;
            println!("rows\t{}", rows.len());
        }
        Command::Train {
            features,
            variance_floor,
            out,
        } => {
            let rows = features::read_features(&features)?;
            let labeled: Vec<_> = rows
                .iter()
                .map(|r| {
                    r.grade
                        .map(|g| (r.features, g))
                        .ok_or_else(|| Error::MalformedRow {
                            row: r.id,
                            reason: "training rows need a grade".into(),
                        })
                })
                .collect::<Result<_>>()?;
            let model = NaiveBayesModel::train_with_floor(&labeled, variance_floor)?;
            model.save(&out)?;
            for c in model.classes() {
                println!("{}\t{:.6}", c.grade, c.prior);
            }
        }
        Command::Predict {
            model,
            features,
            out,
        } => {
            let model = NaiveBayesModel::load(&model)?;
            let rows = features::read_features(&features)?;
            let predictions: Vec<_> = rows
                .iter()
                .map(|r| (r.id, model.predict(&r.features).predicted))
                .collect();
            write_atomic(&out, evaluation::format_grade_file(&predictions).as_bytes())?;
            println!("rows\t{}", predictions.len());
        }
        Command::Evaluate {
            human,
            predicted,
            out,
            report,
        } => {
            let human = evaluation::read_grade_file(&human)?;
            let predicted = evaluation::read_grade_file(&predicted)?;
            let (h, p) = evaluation::align_by_id(&human, &predicted)?;
            let result = EvaluationReport::new(&h, &p)?;
            result.write_csv(&out)?;
            if let Some(path) = report {
                write_atomic(&path, format!("{result}\n").as_bytes())?;
            }
            println!("{result}");
        }
        Command::Stats { corpus, side } => {
            let sentences = corpus::load_side(&corpus, side)?;
            println!("{}", corpus::sentence_stats(&sentences));
        }
        Command::Synth {
            pairs,
            seed,
            out_dir,
        } => {
            fs::create_dir_all(&out_dir).map_err(|e| Error::Io {
                path: out_dir.clone(),
                source: e,
            })?;
            let toy = synth::toy_corpus(pairs, &mut synth::rng(seed));
            write_atomic(&out_dir.join("src.txt"), toy.source_text().as_bytes())?;
            write_atomic(&out_dir.join("tgt.txt"), toy.target_text().as_bytes())?;
            write_atomic(
                &out_dir.join("judgments.tsv"),
                corpus::format_judgments(&toy.judgments()).as_bytes(),
            )?;
            println!("pairs\t{pairs}");
        }
    }
    Ok(())
}

/// Human grade for each sentence id `0..n`.
fn grades_for(path: &Path, n: usize) -> Result<Vec<mtqe::Grade>> {
    let judgments = corpus::load_judgments(path)?;
    if judgments.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: judgments.len(),
        });
    }
    let by_id: HashMap<usize, _> = judgments.iter().map(|j| (j.sentence_id, j)).collect();
    (0..n)
        .map(|id| {
            by_id
                .get(&id)
                .map(|j| grade_judgment(j))
                .ok_or(Error::MissingId(id))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(1),
    }
}
