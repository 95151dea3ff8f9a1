//! Tokenization, parallel-corpus and human-judgment loading, corpus statistics.
//!
//! Tokens are whitespace-delimited chunks with leading and trailing
//! punctuation split off one character at a time. The source side (English)
//! is lowercased; the target side (Hindi) is kept as written. Punctuation is
//! Unicode general category P, which includes the Devanagari danda `।` and
//! double danda `॥`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};
use crate::fsutil;

pub const DANDA: char = '\u{0964}';
pub const DOUBLE_DANDA: char = '\u{0965}';

/// Number of parameters a human judge scores per sentence.
pub const JUDGMENT_PARAMS: usize = 10;
/// Highest value on the per-parameter judgment scale.
pub const MAX_PARAM_SCORE: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "source" | "src" => Ok(Side::Source),
            "target" | "tgt" => Ok(Side::Target),
            other => Err(format!("unknown side {other:?} (expected source or target)")),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

pub fn is_punctuation(c: char) -> bool {
    if c == DANDA || c == DOUBLE_DANDA {
        return true;
    }
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

/// A token counts as punctuation when every character in it is punctuation.
pub fn is_punctuation_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(is_punctuation)
}

pub fn tokenize(text: &str, side: Side) -> Vec<String> {
    let text = match side {
        Side::Source => text.to_lowercase(),
        Side::Target => text.to_owned(),
    };

    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        let lead = chars.iter().take_while(|(_, c)| is_punctuation(*c)).count();
        if lead == chars.len() {
            tokens.extend(chars.iter().map(|(_, c)| c.to_string()));
            continue;
        }
        let trail = chars
            .iter()
            .rev()
            .take_while(|(_, c)| is_punctuation(*c))
            .count();

        tokens.extend(chars[..lead].iter().map(|(_, c)| c.to_string()));
        let start = chars[lead].0;
        let end = chars
            .get(chars.len() - trail)
            .map_or(chunk.len(), |(i, _)| *i);
        tokens.push(chunk[start..end].to_owned());
        tokens.extend(chars[chars.len() - trail..].iter().map(|(_, c)| c.to_string()));
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: usize,
    pub source: Vec<String>,
    pub target: Vec<String>,
}

impl SentencePair {
    pub fn from_text(id: usize, source: &str, target: &str) -> Self {
        SentencePair {
            id,
            source: tokenize(source, Side::Source),
            target: tokenize(target, Side::Target),
        }
    }

    pub fn side(&self, side: Side) -> &[String] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }
}

/// Line-aligned sentence pairs; pair `i` has id `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pairs: Vec<SentencePair>,
}

impl ParallelCorpus {
    pub fn from_lines<S: AsRef<str>, T: AsRef<str>>(source: &[S], target: &[T]) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::LineCountMismatch(source.len(), target.len()));
        }
        let pairs = source
            .iter()
            .zip(target)
            .enumerate()
            .map(|(id, (s, t))| SentencePair::from_text(id, s.as_ref(), t.as_ref()))
            .collect();
        Ok(ParallelCorpus { pairs })
    }

    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn side(&self, side: Side) -> Vec<&[String]> {
        self.pairs.iter().map(|p| p.side(side)).collect()
    }
}

/// Reads a file as one sentence per line. A trailing newline does not start
/// an extra sentence.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fsutil::read_to_string(path)?;
    Ok(text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_owned())
        .collect())
}

pub fn load_parallel(source_path: &Path, target_path: &Path) -> Result<ParallelCorpus> {
    let source = read_lines(source_path)?;
    let target = read_lines(target_path)?;
    ParallelCorpus::from_lines(&source, &target)
}

/// One side of a corpus, tokenized, one sentence per line.
pub fn load_side(path: &Path, side: Side) -> Result<Vec<Vec<String>>> {
    Ok(read_lines(path)?
        .iter()
        .map(|l| tokenize(l, side))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HumanJudgment {
    pub sentence_id: usize,
    pub params: [u8; JUDGMENT_PARAMS],
}

impl HumanJudgment {
    pub fn new(sentence_id: usize, params: [u8; JUDGMENT_PARAMS]) -> Result<Self> {
        if let Some((col, &v)) = params
            .iter()
            .enumerate()
            .find(|(_, &v)| v > MAX_PARAM_SCORE)
        {
            return Err(Error::OutOfRangeScore {
                row: sentence_id,
                col: col + 1,
                value: v as i64,
            });
        }
        Ok(HumanJudgment {
            sentence_id,
            params,
        })
    }

    pub fn total(&self) -> u32 {
        self.params.iter().map(|&p| p as u32).sum()
    }
}

pub fn judgment_header() -> String {
    let mut h = String::from("id");
    for i in 1..=JUDGMENT_PARAMS {
        h.push_str(&format!("\tp{i}"));
    }
    h
}

/// Parses a judgment TSV. Rows are numbered from 1 (the header is row 0) and
/// parameter columns from 1.
pub fn parse_judgments(text: &str) -> Result<Vec<HumanJudgment>> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    match lines.next() {
        Some(h) if h == judgment_header() => {}
        Some(_) => return Err(Error::malformed(0, "header must be id, p1 .. p10")),
        None => return Err(Error::malformed(0, "missing header")),
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != JUDGMENT_PARAMS + 1 {
            return Err(Error::malformed(
                row,
                format!("expected {} cells, found {}", JUDGMENT_PARAMS + 1, cells.len()),
            ));
        }
        let id: usize = cells[0]
            .parse()
            .map_err(|_| Error::malformed(row, format!("bad id {:?}", cells[0])))?;
        let mut params = [0u8; JUDGMENT_PARAMS];
        for (col, cell) in cells[1..].iter().enumerate() {
            let value: i64 = cell
                .parse()
                .map_err(|_| Error::malformed(row, format!("non-integer cell {cell:?}")))?;
            if !(0..=MAX_PARAM_SCORE as i64).contains(&value) {
                return Err(Error::OutOfRangeScore {
                    row,
                    col: col + 1,
                    value,
                });
            }
            params[col] = value as u8;
        }
        if !seen.insert(id) {
            return Err(Error::malformed(row, format!("duplicate id {id}")));
        }
        out.push(HumanJudgment {
            sentence_id: id,
            params,
        });
    }
    Ok(out)
}

pub fn load_judgments(path: &Path) -> Result<Vec<HumanJudgment>> {
    parse_judgments(&fsutil::read_to_string(path)?)
}

pub fn format_judgments(judgments: &[HumanJudgment]) -> String {
    let mut out = judgment_header();
    out.push('\n');
    for j in judgments {
        out.push_str(&j.sentence_id.to_string());
        for p in j.params {
            out.push('\t');
            out.push_str(&p.to_string());
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorpusStats {
    pub sentences: usize,
    pub words: usize,
    pub unique_words: usize,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sentences\t{}\nwords\t{}\nunique_words\t{}",
            self.sentences, self.words, self.unique_words
        )
    }
}

pub fn sentence_stats<S: AsRef<[String]>>(sentences: &[S]) -> CorpusStats {
    let mut distinct = HashSet::new();
    let mut words = 0;
    for s in sentences {
        let s = s.as_ref();
        words += s.len();
        distinct.extend(s.iter().map(String::as_str));
    }
    CorpusStats {
        sentences: sentences.len(),
        words,
        unique_words: distinct.len(),
    }
}

pub fn corpus_stats(corpus: &ParallelCorpus, side: Side) -> CorpusStats {
    sentence_stats(&corpus.side(side))
}
