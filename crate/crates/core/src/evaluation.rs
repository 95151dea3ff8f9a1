//! Human vs classifier comparison: grade histograms, same-grade agreement and
//! a 4×4 confusion matrix.

use std::fmt::{self, Write as _};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fsutil;
use crate::grading::Grade;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GradeHistogram {
    counts: [usize; 4],
}

impl GradeHistogram {
    pub fn from_counts(counts: [usize; 4]) -> Self {
        GradeHistogram { counts }
    }

    pub fn count(&self, g: Grade) -> usize {
        self.counts[g.index()]
    }

    pub fn counts(&self) -> [usize; 4] {
        self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The most frequent grade; ties go to the lower grade. `None` when empty.
    pub fn mode(&self) -> Option<Grade> {
        if self.total() == 0 {
            return None;
        }
        let mut best = Grade::Poor;
        for g in Grade::ALL {
            if self.count(g) > self.count(best) {
                best = g;
            }
        }
        Some(best)
    }
}

impl std::ops::Add for GradeHistogram {
    type Output = GradeHistogram;

    fn add(self, rhs: Self) -> Self {
        let mut counts = self.counts;
        for (c, r) in counts.iter_mut().zip(rhs.counts) {
            *c += r;
        }
        GradeHistogram { counts }
    }
}

pub fn histogram(grades: &[Grade]) -> GradeHistogram {
    let mut counts = [0; 4];
    for g in grades {
        counts[g.index()] += 1;
    }
    GradeHistogram { counts }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementReport {
    pub same: usize,
    pub total: usize,
    /// `100 · same / total`, unrounded.
    pub percentage: f64,
}

impl AgreementReport {
    pub fn new(same: usize, total: usize) -> Self {
        AgreementReport {
            same,
            total,
            percentage: percentage(same, total),
        }
    }

    /// Two decimals; exact ties round half to even.
    pub fn percentage_2dp(&self) -> String {
        format!("{:.2}", self.percentage)
    }
}

fn percentage(same: usize, total: usize) -> f64 {
    100.0 * same as f64 / total as f64
}

fn check_lengths(human: &[Grade], predicted: &[Grade]) -> Result<()> {
    if human.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: human.len(),
            right: predicted.len(),
        });
    }
    Ok(())
}

pub fn agreement(human: &[Grade], predicted: &[Grade]) -> Result<AgreementReport> {
    check_lengths(human, predicted)?;
    if human.is_empty() {
        return Err(Error::LengthMismatch { left: 0, right: 0 });
    }
    let same = human.iter().zip(predicted).filter(|(h, p)| h == p).count();
    Ok(AgreementReport::new(same, human.len()))
}

/// Rows are human grades, columns predicted grades.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    cells: [[usize; 4]; 4],
}

impl ConfusionMatrix {
    pub fn cell(&self, human: Grade, predicted: Grade) -> usize {
        self.cells[human.index()][predicted.index()]
    }

    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..4).map(|i| self.cells[i][i]).sum()
    }

    pub fn human_marginal(&self) -> GradeHistogram {
        GradeHistogram::from_counts(self.cells.map(|row| row.iter().sum()))
    }

    pub fn predicted_marginal(&self) -> GradeHistogram {
        let mut counts = [0; 4];
        for row in &self.cells {
            for (c, v) in counts.iter_mut().zip(row) {
                *c += v;
            }
        }
        GradeHistogram::from_counts(counts)
    }

    pub fn agreement(&self) -> AgreementReport {
        AgreementReport::new(self.trace(), self.total())
    }
}

pub fn confusion(human: &[Grade], predicted: &[Grade]) -> Result<ConfusionMatrix> {
    check_lengths(human, predicted)?;
    let mut cells = [[0; 4]; 4];
    for (h, p) in human.iter().zip(predicted) {
        cells[h.index()][p.index()] += 1;
    }
    Ok(ConfusionMatrix { cells })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub human: GradeHistogram,
    pub predicted: GradeHistogram,
    pub confusion: ConfusionMatrix,
    pub agreement: AgreementReport,
}

impl EvaluationReport {
    pub fn new(human: &[Grade], predicted: &[Grade]) -> Result<Self> {
        let agreement = agreement(human, predicted)?;
        Ok(EvaluationReport {
            human: histogram(human),
            predicted: histogram(predicted),
            confusion: confusion(human, predicted)?,
            agreement,
        })
    }

    /// `grade,human_count,predicted_count` rows, then a
    /// `same,total,percentage` footer.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grade,human_count,predicted_count\n");
        for g in Grade::ALL {
            writeln!(out, "{g},{},{}", self.human.count(g), self.predicted.count(g)).unwrap();
        }
        out.push_str("same,total,percentage\n");
        writeln!(
            out,
            "{},{},{}",
            self.agreement.same,
            self.agreement.total,
            self.agreement.percentage_2dp()
        )
        .unwrap();
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fsutil::write_atomic(path, self.to_csv().as_bytes())
    }
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>8} {:>10}", "grade", "human", "predicted")?;
        for g in Grade::ALL.iter().rev() {
            writeln!(
                f,
                "{:<10} {:>8} {:>10}",
                g.as_str(),
                self.human.count(*g),
                self.predicted.count(*g)
            )?;
        }
        writeln!(f)?;
        writeln!(f, "confusion (rows = human, columns = predicted)")?;
        write!(f, "{:<10}", "")?;
        for g in Grade::ALL {
            write!(f, " {:>9}", g.as_str())?;
        }
        writeln!(f)?;
        for h in Grade::ALL {
            write!(f, "{:<10}", h.as_str())?;
            for p in Grade::ALL {
                write!(f, " {:>9}", self.confusion.cell(h, p))?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        write!(
            f,
            "same grade: {} of {} ({}%)",
            self.agreement.same,
            self.agreement.total,
            self.agreement.percentage_2dp()
        )
    }
}

/// Reads `(id, grade)` rows from any CSV whose header has `id` and `grade`
/// columns, such as prediction files or labeled feature files.
pub fn parse_grade_file(text: &str) -> Result<Vec<(usize, Grade)>> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::malformed(0, format!("missing {name} column")))
    };
    let (id_col, grade_col) = (col("id")?, col("grade")?);

    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::malformed(row, "wrong number of cells"));
        }
        let id = cells[id_col]
            .parse()
            .map_err(|_| Error::malformed(row, format!("bad id {:?}", cells[id_col])))?;
        rows.push((id, cells[grade_col].parse()?));
    }
    Ok(rows)
}

pub fn read_grade_file(path: &Path) -> Result<Vec<(usize, Grade)>> {
    parse_grade_file(&fsutil::read_to_string(path)?)
}

pub fn format_grade_file(rows: &[(usize, Grade)]) -> String {
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|(id, _)| *id);
    let mut out = String::from("id,grade\n");
    for (id, g) in sorted {
        writeln!(out, "{id},{g}").unwrap();
    }
    out
}

/// Pairs human and predicted grades by sentence id, in id order.
pub fn align_by_id(
    human: &[(usize, Grade)],
    predicted: &[(usize, Grade)],
) -> Result<(Vec<Grade>, Vec<Grade>)> {
    if human.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: human.len(),
            right: predicted.len(),
        });
    }
    let mut h = human.to_vec();
    let mut p = predicted.to_vec();
    h.sort_by_key(|(id, _)| *id);
    p.sort_by_key(|(id, _)| *id);
    for (a, b) in h.iter().zip(&p) {
        if a.0 != b.0 {
            return Err(Error::MissingId(a.0.min(b.0)));
        }
    }
    Ok((
        h.into_iter().map(|(_, g)| g).collect(),
        p.into_iter().map(|(_, g)| g).collect(),
    ))
}
