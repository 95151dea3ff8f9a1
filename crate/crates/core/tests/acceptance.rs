//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any failed.

mod common;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use common::{footer, mtqe, path_str, run_pipeline};
use mtqe::bayes::NaiveBayesModel;
use mtqe::corpus::{tokenize, HumanJudgment, ParallelCorpus, SentencePair, Side};
use mtqe::evaluation::{self, histogram, parse_grade_file};
use mtqe::features::{extract_features, read_features, FeatureVector, FEATURE_COUNT};
use mtqe::grading::{aggregate_judgment, score_to_grade, Grade};
use mtqe::lexicon::TranslationLexicon;
use mtqe::lm::NgramModel;
use mtqe::synth::{self, ClusterSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(
        elapsed < limit,
        format!("took {elapsed:?}, limit {limit:?}"),
    )
}

/// Published grade histograms, Poor..Excellent, per engine.
const CLASSIFIER_COLUMNS: [(&str, [usize; 4]); 3] = [
    ("Bing", [29, 1019, 228, 24]),
    ("Google", [48, 1008, 221, 23]),
    ("Babylon", [63, 1025, 200, 12]),
];
const HUMAN_COLUMNS: [(&str, [usize; 4]); 3] = [
    ("Bing", [17, 956, 231, 96]),
    ("Google", [12, 1002, 194, 92]),
    ("Babylon", [53, 1006, 234, 7]),
];
const TEST_CORPUS_SIZE: usize = 1300;

fn expand(counts: [usize; 4]) -> Vec<Grade> {
    Grade::ALL
        .iter()
        .zip(counts)
        .flat_map(|(g, n)| std::iter::repeat_n(*g, n))
        .collect()
}

// 1. exp(log_joint) against the literal product of prior and densities
fn eq1_oracle() -> Outcome {
    let start = Instant::now();

    // 20 rows, 5 per grade, built from a fixed integer pattern
    let rows: Vec<(FeatureVector, Grade)> = (0..20)
        .map(|r| {
            let grade = Grade::ALL[r % 4];
            let mut v = [0.0; FEATURE_COUNT];
            for (i, x) in v.iter_mut().enumerate() {
                let wobble = ((r * 31 + i * 17) % 11) as f64 / 5.0;
                *x = 0.75 * grade.index() as f64 + wobble - 1.0 + 0.1 * i as f64;
            }
            (FeatureVector(v), grade)
        })
        .collect();
    let model = NaiveBayesModel::train(&rows).map_err(|e| e.to_string())?;

    // independent per-class statistics
    let mut oracle = Vec::new();
    for grade in Grade::ALL {
        let members: Vec<&FeatureVector> =
            rows.iter().filter(|(_, g)| *g == grade).map(|(x, _)| x).collect();
        let n = members.len() as f64;
        let prior = n / rows.len() as f64;
        let mut mean = [0.0; FEATURE_COUNT];
        let mut var = [0.0; FEATURE_COUNT];
        for i in 0..FEATURE_COUNT {
            mean[i] = members.iter().map(|x| x.0[i]).sum::<f64>() / n;
            var[i] = members.iter().map(|x| (x.0[i] - mean[i]).powi(2)).sum::<f64>() / n;
        }
        oracle.push((grade, prior, mean, var));
    }
    for ((grade, prior, mean, var), class) in oracle.iter().zip(model.classes()) {
        check(class.grade == *grade, "class order")?;
        check((class.prior - prior).abs() <= 1e-12, format!("{grade} prior"))?;
        for i in 0..FEATURE_COUNT {
            check((class.means[i] - mean[i]).abs() <= 1e-12, format!("{grade} mean f{}", i + 1))?;
            check(
                (class.variances[i] - var[i]).abs() <= 1e-12 * var[i].max(1.0),
                format!("{grade} variance f{}", i + 1),
            )?;
        }
    }

    let mut rng = synth::rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut q = [0.0; FEATURE_COUNT];
        for (i, x) in q.iter_mut().enumerate() {
            *x = rng.random_range(-1.0..3.5) + 0.1 * i as f64;
        }
        let q = FeatureVector(q);
        let log_joint = model.log_joint(&q);
        for ((grade, prior, mean, var), (g, lj)) in oracle.iter().zip(&log_joint) {
            check(grade == g, "class order")?;
            let mut literal = *prior;
            for i in 0..FEATURE_COUNT {
                let d = q.0[i] - mean[i];
                literal *= (-d * d / (2.0 * var[i])).exp() / (2.0 * std::f64::consts::PI * var[i]).sqrt();
            }
            check(literal > 1e-300, "literal product underflowed; fixture too spread")?;
            let rel = (lj.exp() - literal).abs() / literal;
            worst = worst.max(rel);
        }
    }
    check(worst <= 1e-9, format!("max relative error {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("max relative error {worst:.2e} over 100 queries x 4 classes"))
}

// 2. Laplace distributions sum to one for every observed context
fn lm_normalization() -> Outcome {
    let start = Instant::now();
    let toy = synth::toy_corpus(50, &mut synth::rng(2));
    let src: Vec<String> = toy.pairs.iter().map(|p| p.source.clone()).collect();
    let tgt: Vec<String> = toy.pairs.iter().map(|p| p.target.clone()).collect();
    let corpus = ParallelCorpus::from_lines(&src, &tgt).map_err(|e| e.to_string())?;

    let mut contexts = 0;
    let mut worst = 0.0f64;
    for side in [Side::Source, Side::Target] {
        let sents = corpus.side(side);
        for order in 1..=3 {
            let lm = NgramModel::train(&sents, order).map_err(|e| e.to_string())?;
            for k in 0..order {
                for ctx in lm.contexts(k) {
                    let total: f64 = lm.distribution(&ctx).iter().sum();
                    worst = worst.max((total - 1.0).abs());
                    contexts += 1;
                }
            }
        }
    }
    check(worst <= 1e-9, format!("max |sum - 1| = {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{contexts} contexts, max |sum - 1| = {worst:.1e}"))
}

// 3. every judgment sum 0..=40 lands in its grade band
fn grade_partition() -> Outcome {
    let start = Instant::now();
    for sum in 0..=40u32 {
        let mut params = [0u8; 10];
        let mut left = sum;
        for p in params.iter_mut() {
            let take = left.min(4);
            *p = take as u8;
            left -= take;
        }
        let j = HumanJudgment::new(0, params).map_err(|e| e.to_string())?;
        check(j.total() == sum, "fixture sum")?;
        let got = score_to_grade(aggregate_judgment(&j));
        let want = match sum {
            0..=10 => Grade::Poor,
            11..=20 => Grade::Average,
            21..=30 => Grade::Good,
            _ => Grade::Excellent,
        };
        check(got == want, format!("sum {sum}: {got}, expected {want}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("0-10 Poor, 11-20 Average, 21-30 Good, 31-40 Excellent".into())
}

/// Human grades from `human`, predictions equal on the first `same`
/// positions and shifted to another grade elsewhere.
fn write_agreement_fixture(dir: &Path, name: &str, human: [usize; 4], same: usize) -> (String, String) {
    let human = expand(human);
    let rows_h: Vec<(usize, Grade)> = human.iter().copied().enumerate().collect();
    let rows_p: Vec<(usize, Grade)> = human
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let p = if i < same { *g } else { Grade::ALL[(g.index() + 1) % 4] };
            (i, p)
        })
        .collect();
    let h = dir.join(format!("{name}_human.csv"));
    let p = dir.join(format!("{name}_predicted.csv"));
    fs::write(&h, evaluation::format_grade_file(&rows_h)).unwrap();
    fs::write(&p, evaluation::format_grade_file(&rows_p)).unwrap();
    (path_str(&h).to_owned(), path_str(&p).to_owned())
}

// 4. same-grade percentages at two decimals
fn agreement_arithmetic() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = [
        ("Google", HUMAN_COLUMNS[1].1, 756, 58.15, "58.15"),
        ("Babylon", HUMAN_COLUMNS[2].1, 711, 54.69, "54.69"),
        ("Bing", HUMAN_COLUMNS[0].1, 771, 59.31, "59.31"),
    ];
    let mut summary = Vec::new();
    for (name, human, same, expected, text) in cases {
        let (h, p) = write_agreement_fixture(dir.path(), name, human, same);
        let out_path = dir.path().join(format!("{name}_eval.csv"));
        let out = mtqe(&["evaluate", "--human", &h, "--predicted", &p, "--out", path_str(&out_path)]);
        check(out.status.success(), format!("{name}: evaluate exited {:?}", out.status.code()))?;
        let csv = fs::read_to_string(&out_path).map_err(|e| e.to_string())?;
        let (got_same, total, pct) = footer(&csv);
        check(got_same == same && total == TEST_CORPUS_SIZE, format!("{name}: {got_same}/{total}"))?;
        let value: f64 = pct.parse().map_err(|_| format!("{name}: bad percentage {pct:?}"))?;
        check((value - expected).abs() <= 0.005, format!("{name}: {value} vs {expected}"))?;
        check(pct == text, format!("{name}: rendered {pct}, expected {text}"))?;
        summary.push(format!("{name} {same}/{total}={pct}%"));
    }
    Ok(format!(
        "{}; 771/1300 = 59.3077 renders 59.31 (59.30 would be truncation, not rounding)",
        summary.join(", ")
    ))
}

// 5. every transcribed histogram column covers the 1300-sentence test set
fn histogram_columns() -> Outcome {
    for (table, columns) in [("classifier", CLASSIFIER_COLUMNS), ("human", HUMAN_COLUMNS)] {
        for (engine, counts) in columns {
            let h = histogram(&expand(counts));
            check(h.counts() == counts, format!("{table} {engine}: histogram differs"))?;
            check(
                h.total() == TEST_CORPUS_SIZE,
                format!("{table} {engine}: sums to {}", h.total()),
            )?;
        }
    }
    Ok("6 columns, each sums to 1300".into())
}

fn accuracy(model: &NaiveBayesModel, rows: &[(FeatureVector, Grade)]) -> f64 {
    let hits = rows.iter().filter(|(x, g)| model.predict(x).predicted == *g).count();
    hits as f64 / rows.len() as f64
}

// 6. separable clusters are learned, shuffled labels are not
fn synthetic_classification() -> Outcome {
    let start = Instant::now();
    let spec = ClusterSpec {
        per_class: 200,
        separation: 6.0,
        sigma: 1.0,
    };
    let mut rng = synth::rng(6);
    let train = synth::gaussian_clusters(&spec, &mut rng);
    let test = synth::gaussian_clusters(&spec, &mut rng);

    let model = NaiveBayesModel::train(&train).map_err(|e| e.to_string())?;
    let acc = accuracy(&model, &test);

    let mut labels: Vec<Grade> = train.iter().map(|(_, g)| *g).collect();
    labels.shuffle(&mut rng);
    let shuffled: Vec<_> = train.iter().zip(labels).map(|((x, _), g)| (*x, g)).collect();
    let control = NaiveBayesModel::train(&shuffled).map_err(|e| e.to_string())?;
    let control_acc = accuracy(&control, &test);

    check(acc >= 0.99, format!("held-out accuracy {acc:.4} < 0.99"))?;
    check(control_acc <= 0.35, format!("shuffled-label accuracy {control_acc:.4} > 0.35"))?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("accuracy {acc:.4}, shuffled-label control {control_acc:.4}"))
}

// 7. full CLI pipeline on a 200-pair toy corpus beats the majority baseline
fn end_to_end(dir: &Path) -> Outcome {
    let start = Instant::now();
    let run = run_pipeline(dir, 200, 0);
    check(run.codes.iter().all(|(_, c)| *c == 0), "non-zero stage exit")?;
    let elapsed = start.elapsed();

    let human = parse_grade_file(&fs::read_to_string(run.file("features.csv")).unwrap())
        .map_err(|e| e.to_string())?;
    let grades: Vec<Grade> = human.iter().map(|(_, g)| *g).collect();
    let hist = histogram(&grades);
    let majority = hist.mode().ok_or("no human grades")?;
    let baseline = 100.0 * hist.count(majority) as f64 / grades.len() as f64;

    let (same, total, pct) = footer(&fs::read_to_string(run.file("evaluation.csv")).unwrap());
    let agreement = 100.0 * same as f64 / total as f64;
    check(total == 200, format!("evaluated {total} rows"))?;
    check(
        agreement > baseline,
        format!("agreement {agreement:.2}% does not beat majority baseline {baseline:.2}%"),
    )?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "8 stages exit 0 in {:.2?}; agreement {pct}% vs majority ({majority}) {baseline:.2}%",
        elapsed
    ))
}

// 8. reruns are byte-identical; saved models predict bit-identically
fn determinism(first: &Path, second: &Path) -> Outcome {
    let a = run_pipeline(first, 200, 0);
    let b = run_pipeline(second, 200, 0);
    for (x, y) in a.outputs.iter().zip(&b.outputs) {
        let (bx, by) = (fs::read(x).unwrap(), fs::read(y).unwrap());
        check(bx == by, format!("{} differs between runs", x.display()))?;
    }

    // LM: in-memory model vs the file the CLI wrote
    let sentences: Vec<Vec<String>> = fs::read_to_string(a.file("tgt.txt"))
        .unwrap()
        .lines()
        .map(|l| tokenize(l, Side::Target))
        .collect();
    let trained = NgramModel::train(&sentences, 3).map_err(|e| e.to_string())?;
    let loaded = NgramModel::load(&a.file("tgt.lm")).map_err(|e| e.to_string())?;
    let vocab: Vec<String> = trained.vocab().map(String::from).collect();
    let mut rng = synth::rng(8);
    for _ in 0..1000 {
        let len = rng.random_range(0..12);
        let s: Vec<String> = (0..len)
            .map(|_| {
                if rng.random_bool(0.1) {
                    "unseen-token".to_string()
                } else {
                    vocab.choose(&mut rng).unwrap().clone()
                }
            })
            .collect();
        check(
            trained.sentence_log_prob(&s).to_bits() == loaded.sentence_log_prob(&s).to_bits(),
            "LM log-probability changed after save/load",
        )?;
    }

    // NB: train in memory, round-trip through a file
    let rows = read_features(&a.file("features.csv")).map_err(|e| e.to_string())?;
    let labeled: Vec<_> = rows.iter().map(|r| (r.features, r.grade.unwrap())).collect();
    let model = NaiveBayesModel::train(&labeled).map_err(|e| e.to_string())?;
    let path = first.join("roundtrip.model");
    model.save(&path).map_err(|e| e.to_string())?;
    let back = NaiveBayesModel::load(&path).map_err(|e| e.to_string())?;
    let from_cli = NaiveBayesModel::load(&a.file("nb.model")).map_err(|e| e.to_string())?;
    check(back == model && from_cli == model, "NB parameters changed after save/load")?;
    for _ in 0..1000 {
        let mut q = [0.0; FEATURE_COUNT];
        for x in q.iter_mut() {
            *x = rng.random_range(-20.0..60.0);
        }
        let q = FeatureVector(q);
        let (p1, p2) = (model.predict(&q), back.predict(&q));
        check(p1.predicted == p2.predicted, "NB prediction changed after save/load")?;
        for ((_, x), (_, y)) in p1.log_joint.iter().zip(&p2.log_joint) {
            check(x.to_bits() == y.to_bits(), "NB log-joint changed after save/load")?;
        }
    }
    Ok(format!("{} output files identical; 1000 LM + 1000 NB queries bit-identical", a.outputs.len()))
}

// 9. feature invariants on random sentence pairs
fn feature_invariants() -> Outcome {
    let toy = synth::toy_corpus(200, &mut synth::rng(9));
    let src: Vec<String> = toy.pairs.iter().map(|p| p.source.clone()).collect();
    let tgt: Vec<String> = toy.pairs.iter().map(|p| p.target.clone()).collect();
    let corpus = ParallelCorpus::from_lines(&src, &tgt).map_err(|e| e.to_string())?;
    let src_lm = NgramModel::train(&corpus.side(Side::Source), 3).map_err(|e| e.to_string())?;
    let tgt_lm = NgramModel::train(&corpus.side(Side::Target), 3).map_err(|e| e.to_string())?;
    let lexicon = TranslationLexicon::build(&corpus, 0.2).map_err(|e| e.to_string())?;

    let src_vocab: Vec<String> = corpus.side(Side::Source).concat();
    let tgt_vocab: Vec<String> = corpus.side(Side::Target).concat();
    let extras = [".", ",", "!", "?", "।", "॥", "zzz", "नया-शब्द"];
    let mut rng = synth::rng(99);
    let draw = |pool: &[String], rng: &mut rand_chacha::ChaCha8Rng| -> Vec<String> {
        let len = rng.random_range(0..=15);
        (0..len)
            .map(|_| {
                if rng.random_bool(0.15) {
                    extras.choose(rng).unwrap().to_string()
                } else {
                    pool.choose(rng).unwrap().clone()
                }
            })
            .collect()
    };

    let mut degenerate = 0;
    for id in 0..1000 {
        let pair = SentencePair {
            id,
            source: draw(&src_vocab, &mut rng),
            target: draw(&tgt_vocab, &mut rng),
        };
        let f = extract_features(&pair, &src_lm, &tgt_lm, &lexicon);
        f.validate().map_err(|e| format!("pair {id}: {e}"))?;
        let n = pair.source.len();
        if n < 2 {
            degenerate += 1;
            check(f.get(10) == 0.0 && f.get(11) == 0.0, format!("pair {id}: bigram % not 0"))?;
        }
        if n < 3 {
            check(f.get(12) == 0.0 && f.get(13) == 0.0, format!("pair {id}: trigram % not 0"))?;
        }
        if n == 0 {
            check(f.get(3) == 0.0 && f.get(14) == 0.0, format!("pair {id}: empty source"))?;
        }
        if pair.target.is_empty() {
            check(f.get(6) == 0.0, format!("pair {id}: empty target f6"))?;
        }
    }
    Ok(format!("1000 pairs valid ({degenerate} with fewer than 2 source tokens)"))
}

fn main() -> ExitCode {
    let work = tempfile::tempdir().expect("tempdir");
    let e2e = work.path().join("e2e");
    let rerun_a = work.path().join("rerun_a");
    let rerun_b = work.path().join("rerun_b");

    let criteria: Vec<Criterion> = vec![
        ("AC1 Naive Bayes joint equals literal product", Box::new(eq1_oracle)),
        ("AC2 LM normalization", Box::new(lm_normalization)),
        ("AC3 grade partition over judgment sums", Box::new(grade_partition)),
        ("AC4 same-grade percentages", Box::new(agreement_arithmetic)),
        ("AC5 grade histogram columns", Box::new(histogram_columns)),
        ("AC6 synthetic classification", Box::new(synthetic_classification)),
        ("AC7 end-to-end pipeline", Box::new(move || end_to_end(&e2e))),
        ("AC8 determinism and persistence", Box::new(move || determinism(&rerun_a, &rerun_b))),
        ("AC9 feature invariants", Box::new(feature_invariants)),
    ];

    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
