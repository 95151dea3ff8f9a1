#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn mtqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtqe"))
        .args(args)
        .output()
        .expect("failed to spawn mtqe")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn assert_ok(out: &Output, stage: &str) {
    assert!(
        out.status.success(),
        "{stage} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Output files of one full pipeline run, in the order they were produced.
pub struct PipelineRun {
    pub dir: PathBuf,
    pub outputs: Vec<PathBuf>,
    pub codes: Vec<(&'static str, i32)>,
}

impl PipelineRun {
    pub fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

/// synth → build-lm ×2 → build-lexicon → extract → train → predict → evaluate
pub fn run_pipeline(dir: &Path, pairs: usize, seed: u64) -> PipelineRun {
    fs::create_dir_all(dir).unwrap();
    let p = |name: &str| dir.join(name);
    let s = |name: &str| p(name).to_str().unwrap().to_owned();
    let pairs = pairs.to_string();
    let seed = seed.to_string();

    let stages: Vec<(&'static str, Vec<String>)> = vec![
        ("synth", vec!["synth".into(), "--pairs".into(), pairs, "--seed".into(), seed, "--out-dir".into(), s("")]),
        ("build-lm source", vec!["build-lm".into(), "--corpus".into(), s("src.txt"), "--side".into(), "source".into(), "--out".into(), s("src.lm")]),
        ("build-lm target", vec!["build-lm".into(), "--corpus".into(), s("tgt.txt"), "--side".into(), "target".into(), "--out".into(), s("tgt.lm")]),
        ("build-lexicon", vec!["build-lexicon".into(), "--pairs-src".into(), s("src.txt"), "--pairs-tgt".into(), s("tgt.txt"), "--out".into(), s("lexicon.tsv")]),
        ("extract", vec![
            "extract".into(), "--pairs-src".into(), s("src.txt"), "--pairs-tgt".into(), s("tgt.txt"),
            "--src-lm".into(), s("src.lm"), "--tgt-lm".into(), s("tgt.lm"), "--lexicon".into(), s("lexicon.tsv"),
            "--judgments".into(), s("judgments.tsv"), "--out".into(), s("features.csv"),
        ]),
        ("train", vec!["train".into(), "--features".into(), s("features.csv"), "--out".into(), s("nb.model")]),
        ("predict", vec!["predict".into(), "--model".into(), s("nb.model"), "--features".into(), s("features.csv"), "--out".into(), s("predicted.csv")]),
        ("evaluate", vec![
            "evaluate".into(), "--human".into(), s("features.csv"), "--predicted".into(), s("predicted.csv"),
            "--out".into(), s("evaluation.csv"), "--report".into(), s("evaluation.txt"),
        ]),
    ];

    let mut codes = Vec::new();
    for (name, args) in stages {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = mtqe(&args);
        assert_ok(&out, name);
        codes.push((name, out.status.code().unwrap()));
    }
    let outputs = [
        "src.txt", "tgt.txt", "judgments.tsv", "src.lm", "tgt.lm", "lexicon.tsv",
        "features.csv", "nb.model", "predicted.csv", "evaluation.csv", "evaluation.txt",
    ]
    .iter()
    .map(|n| p(n))
    .collect();
    PipelineRun {
        dir: dir.to_path_buf(),
        outputs,
        codes,
    }
}

/// `(same, total, percentage text)` from an evaluation CSV footer.
pub fn footer(csv: &str) -> (usize, usize, String) {
    let last = csv.lines().last().unwrap();
    let cells: Vec<&str> = last.split(',').collect();
    (cells[0].parse().unwrap(), cells[1].parse().unwrap(), cells[2].to_owned())
}
