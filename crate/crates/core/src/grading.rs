//! Human judgment aggregation and the four-level grade scale.
//!
//! Ten parameters scored 0..=4 are summed and divided by 40. The resulting
//! score maps to a grade through intervals closed on the right:
//!
//! | score            | grade     |
//! |------------------|-----------|
//! | `[0, 0.25]`      | Poor      |
//! | `(0.25, 0.50]`   | Average   |
//! | `(0.50, 0.75]`   | Good      |
//! | `(0.75, 1.0]`    | Excellent |

use std::fmt;
use std::str::FromStr;

use crate::corpus::{HumanJudgment, JUDGMENT_PARAMS, MAX_PARAM_SCORE};
use crate::error::{Error, Result};

/// Quality grade, ordered from worst to best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Poor,
    Average,
    Good,
    Excellent,
}

impl Grade {
    pub const ALL: [Grade; 4] = [Grade::Poor, Grade::Average, Grade::Good, Grade::Excellent];

    /// 1 for Poor through 4 for Excellent.
    pub fn rank(self) -> u8 {
        self.index() as u8 + 1
    }

    /// 0-based position in [`Grade::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grade::Poor => "Poor",
            Grade::Average => "Average",
            Grade::Good => "Good",
            Grade::Excellent => "Excellent",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Grade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Grade::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnknownGrade(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QualityScore(f64);

impl QualityScore {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(QualityScore(value))
        } else {
            Err(Error::InvalidScore(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn grade(self) -> Grade {
        score_to_grade(self)
    }
}

pub fn aggregate_judgment(j: &HumanJudgment) -> QualityScore {
    let max = (JUDGMENT_PARAMS as u32 * MAX_PARAM_SCORE as u32) as f64;
    QualityScore(j.total() as f64 / max)
}

pub fn score_to_grade(s: QualityScore) -> Grade {
    let v = s.value();
    if v <= 0.25 {
        Grade::Poor
    } else if v <= 0.50 {
        Grade::Average
    } else if v <= 0.75 {
        Grade::Good
    } else {
        Grade::Excellent
    }
}

pub fn grade_judgment(j: &HumanJudgment) -> Grade {
    score_to_grade(aggregate_judgment(j))
}

pub fn grade_to_rank(g: Grade) -> u8 {
    g.rank()
}
