//! Gaussian Naive Bayes over the sixteen quality features.
//!
//! The joint density factors as `P(y) · Π_i P(f_i | y)` with each
//! `P(f_i | y)` a normal density. Everything is computed in log space.
//!
//! Per-class statistics are summed over values sorted by magnitude, so the
//! trained model does not depend on the order of the training rows.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_COUNT};
use crate::fsutil;
use crate::grading::Grade;

/// Absolute lower bound on any per-class variance.
pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-12;
/// Variance floor relative to the feature's variance over the whole
/// training set.
pub const RELATIVE_VARIANCE_FLOOR: f64 = 1e-9;

const FORMAT_TAG: &str = "mtqe-nb";
const FORMAT_VERSION: &str = "1";

const LN_2PI: f64 = 1.837_877_066_409_345_3;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    pub grade: Grade,
    pub prior: f64,
    pub means: [f64; FEATURE_COUNT],
    pub variances: [f64; FEATURE_COUNT],
}

impl ClassModel {
    fn log_joint(&self, x: &FeatureVector) -> f64 {
        let mut total = self.prior.ln();
        for i in 0..FEATURE_COUNT {
            total += gaussian_log_density(x.0[i], self.means[i], self.variances[i]);
        }
        total
    }
}

pub fn gaussian_log_density(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * (LN_2PI + variance.ln()) - d * d / (2.0 * variance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    classes: Vec<ClassModel>,
    variance_floor: [f64; FEATURE_COUNT],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    /// `ln P(y) + Σ ln P(f_i | y)` per class, in grade order.
    pub log_joint: Vec<(Grade, f64)>,
    pub predicted: Grade,
}

/// Mean and population variance of `values`, summed in sorted order.
fn sorted_stats(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut devs: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    devs.sort_by(f64::total_cmp);
    (mean, devs.iter().sum::<f64>() / n)
}

impl NaiveBayesModel {
    pub fn train(rows: &[(FeatureVector, Grade)]) -> Result<Self> {
        Self::train_with_floor(rows, DEFAULT_VARIANCE_FLOOR)
    }

    /// Trains with an absolute variance floor. Each feature's floor is the
    /// larger of `floor` and `RELATIVE_VARIANCE_FLOOR` times that feature's
    /// variance over all rows. Grades absent from `rows` are left out.
    pub fn train_with_floor(rows: &[(FeatureVector, Grade)], floor: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let floor = if floor > 0.0 { floor } else { DEFAULT_VARIANCE_FLOOR };

        let mut variance_floor = [0.0; FEATURE_COUNT];
        for (i, slot) in variance_floor.iter_mut().enumerate() {
            let mut column: Vec<f64> = rows.iter().map(|(x, _)| x.0[i]).collect();
            let (_, var) = sorted_stats(&mut column);
            *slot = (RELATIVE_VARIANCE_FLOOR * var).max(floor);
        }

        let n = rows.len() as f64;
        let mut classes = Vec::new();
        for grade in Grade::ALL {
            let members: Vec<&FeatureVector> = rows
                .iter()
                .filter(|(_, g)| *g == grade)
                .map(|(x, _)| x)
                .collect();
            if members.is_empty() {
                continue;
            }
            let mut means = [0.0; FEATURE_COUNT];
            let mut variances = [0.0; FEATURE_COUNT];
            for i in 0..FEATURE_COUNT {
                let mut column: Vec<f64> = members.iter().map(|x| x.0[i]).collect();
                let (mean, var) = sorted_stats(&mut column);
                means[i] = mean;
                variances[i] = var.max(variance_floor[i]);
            }
            classes.push(ClassModel {
                grade,
                prior: members.len() as f64 / n,
                means,
                variances,
            });
        }
        Ok(NaiveBayesModel {
            classes,
            variance_floor,
        })
    }

    pub fn classes(&self) -> &[ClassModel] {
        &self.classes
    }

    pub fn variance_floor(&self) -> &[f64; FEATURE_COUNT] {
        &self.variance_floor
    }

    pub fn log_joint(&self, x: &FeatureVector) -> Vec<(Grade, f64)> {
        self.classes
            .iter()
            .map(|c| (c.grade, c.log_joint(x)))
            .collect()
    }

    /// Highest log-joint class; ties go to the lower grade.
    pub fn predict(&self, x: &FeatureVector) -> Posterior {
        let log_joint = self.log_joint(x);
        let mut best = log_joint[0];
        for &(g, v) in &log_joint[1..] {
            if v > best.1 {
                best = (g, v);
            }
        }
        Posterior {
            log_joint,
            predicted: best.0,
        }
    }

    pub fn to_text(&self) -> String {
        fn row(out: &mut String, key: &str, values: &[f64]) {
            out.push_str(key);
            for v in values {
                write!(out, "\t{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        let mut out = String::new();
        writeln!(out, "{FORMAT_TAG}\t{FORMAT_VERSION}").unwrap();
        writeln!(out, "features\t{FEATURE_COUNT}").unwrap();
        writeln!(out, "classes\t{}", self.classes.len()).unwrap();
        row(&mut out, "floor", &self.variance_floor);
        for c in &self.classes {
            writeln!(out, "class\t{}\t{:.16e}", c.grade, c.prior).unwrap();
            row(&mut out, "mean", &c.means);
            row(&mut out, "var", &c.variances);
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let corrupt = |msg: String| Error::CorruptModel(msg);
        let mut lines = text.lines();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| corrupt(format!("truncated before {what}")))
        };

        match next("header")?.split_once('\t') {
            Some((FORMAT_TAG, FORMAT_VERSION)) => {}
            Some((FORMAT_TAG, v)) => {
                return Err(Error::VersionMismatch {
                    expected: FORMAT_VERSION.into(),
                    found: v.into(),
                })
            }
            _ => return Err(corrupt("not a Naive Bayes model file".into())),
        }

        fn count(line: &str, key: &str) -> Result<usize> {
            line.split_once('\t')
                .filter(|(k, _)| *k == key)
                .and_then(|(_, v)| v.parse().ok())
                .ok_or_else(|| Error::CorruptModel(format!("expected {key}, got {line:?}")))
        }
        fn vector(line: &str, key: &str) -> Result<[f64; FEATURE_COUNT]> {
            let mut cells = line.split('\t');
            if cells.next() != Some(key) {
                return Err(Error::CorruptModel(format!("expected {key} row")));
            }
            let values: Vec<f64> = cells
                .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::CorruptModel(format!("bad number in {key} row")))?;
            values
                .try_into()
                .map_err(|_| Error::CorruptModel(format!("{key} row has wrong width")))
        }

        if count(next("features")?, "features")? != FEATURE_COUNT {
            return Err(corrupt("feature count mismatch".into()));
        }
        let k = count(next("classes")?, "classes")?;
        if k == 0 || k > Grade::ALL.len() {
            return Err(corrupt(format!("bad class count {k}")));
        }
        let variance_floor = vector(next("floor")?, "floor")?;
        if variance_floor.iter().any(|&v| v <= 0.0) {
            return Err(corrupt("non-positive variance floor".into()));
        }

        let mut classes: Vec<ClassModel> = Vec::with_capacity(k);
        for _ in 0..k {
            let line = next("class")?;
            let parts: Vec<&str> = line.split('\t').collect();
            let (grade, prior) = match parts.as_slice() {
                ["class", g, p] => (
                    g.parse::<Grade>().map_err(|_| corrupt(format!("bad grade {g:?}")))?,
                    p.parse::<f64>()
                        .ok()
                        .filter(|p| *p > 0.0 && *p <= 1.0)
                        .ok_or_else(|| corrupt(format!("bad prior {p:?}")))?,
                ),
                _ => return Err(corrupt(format!("expected class row, got {line:?}"))),
            };
            if classes.last().is_some_and(|c| c.grade >= grade) {
                return Err(corrupt("classes out of order".into()));
            }
            let means = vector(next("mean")?, "mean")?;
            let variances = vector(next("var")?, "var")?;
            if variances.iter().zip(&variance_floor).any(|(v, f)| v < f) {
                return Err(corrupt(format!("{grade} variance below floor")));
            }
            classes.push(ClassModel {
                grade,
                prior,
                means,
                variances,
            });
        }
        if next("end marker")? != "end" {
            return Err(corrupt("missing end marker".into()));
        }
        let mass: f64 = classes.iter().map(|c| c.prior).sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(corrupt(format!("priors sum to {mass}")));
        }
        Ok(NaiveBayesModel {
            classes,
            variance_floor,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fsutil::write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&fsutil::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(first: f64, rest: f64) -> FeatureVector {
        let mut v = [rest; FEATURE_COUNT];
        v[0] = first;
        FeatureVector(v)
    }

    #[test]
    fn single_class_model() {
        let rows = vec![(fv(1.0, 0.0), Grade::Good), (fv(3.0, 2.0), Grade::Good)];
        let m = NaiveBayesModel::train(&rows).unwrap();
        assert_eq!(m.classes().len(), 1);
        assert_eq!(m.classes()[0].prior, 1.0);
        assert_eq!(m.predict(&fv(-100.0, 50.0)).predicted, Grade::Good);
    }

    #[test]
    fn priors_are_relative_frequencies() {
        let rows = vec![
            (fv(1.0, 0.0), Grade::Good),
            (fv(2.0, 0.0), Grade::Good),
            (fv(3.0, 0.0), Grade::Good),
            (fv(9.0, 0.0), Grade::Poor),
        ];
        let m = NaiveBayesModel::train(&rows).unwrap();
        let priors: Vec<(Grade, f64)> = m.classes().iter().map(|c| (c.grade, c.prior)).collect();
        assert_eq!(priors, vec![(Grade::Poor, 0.25), (Grade::Good, 0.75)]);
    }

    #[test]
    fn empty_training_set() {
        assert!(matches!(
            NaiveBayesModel::train(&[]),
            Err(Error::EmptyTrainingSet)
        ));
    }

    #[test]
    fn zero_variance_is_floored() {
        let rows = vec![(fv(1.0, 5.0), Grade::Poor), (fv(1.0, 5.0), Grade::Poor)];
        let m = NaiveBayesModel::train(&rows).unwrap();
        for (v, f) in m.classes()[0].variances.iter().zip(m.variance_floor()) {
            assert_eq!(v, f);
            assert_eq!(*f, DEFAULT_VARIANCE_FLOOR);
        }
        assert!(m.predict(&fv(1.0, 5.0)).log_joint[0].1.is_finite());
    }

    #[test]
    fn nearer_mean_wins() {
        // unit variances on feature 1 (values mean±1), others identical
        let rows = vec![
            (fv(-1.0, 0.0), Grade::Poor),
            (fv(1.0, 0.0), Grade::Poor),
            (fv(9.0, 0.0), Grade::Excellent),
            (fv(11.0, 0.0), Grade::Excellent),
        ];
        let m = NaiveBayesModel::train(&rows).unwrap();
        assert_eq!(m.classes()[0].variances[0], 1.0);
        assert_eq!(m.predict(&fv(1.0, 0.0)).predicted, Grade::Poor);
        assert_eq!(m.predict(&fv(6.0, 0.0)).predicted, Grade::Excellent);
    }

    #[test]
    fn exact_tie_goes_to_lower_grade() {
        let rows = vec![
            (fv(-1.0, 0.0), Grade::Average),
            (fv(1.0, 0.0), Grade::Average),
            (fv(-1.0, 0.0), Grade::Good),
            (fv(1.0, 0.0), Grade::Good),
        ];
        let m = NaiveBayesModel::train(&rows).unwrap();
        let p = m.predict(&fv(0.3, 0.0));
        assert_eq!(p.log_joint[0].1, p.log_joint[1].1);
        assert_eq!(p.predicted, Grade::Average);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let rows: Vec<(FeatureVector, Grade)> = (0..40)
            .map(|i| {
                let mut v = [0.0; FEATURE_COUNT];
                for (j, x) in v.iter_mut().enumerate() {
                    *x = ((i * 7 + j * 13) % 17) as f64 / 3.0 + (i % 4) as f64;
                }
                (FeatureVector(v), Grade::ALL[i % 4])
            })
            .collect();
        let m = NaiveBayesModel::train(&rows).unwrap();
        let back = NaiveBayesModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn load_errors() {
        let rows = vec![(fv(1.0, 0.0), Grade::Good), (fv(2.0, 0.5), Grade::Poor)];
        let text = NaiveBayesModel::train(&rows).unwrap().to_text();
        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            NaiveBayesModel::from_text(&truncated),
            Err(Error::CorruptModel(_))
        ));
        assert!(matches!(
            NaiveBayesModel::from_text(&text.replacen("mtqe-nb\t1", "mtqe-nb\t2", 1)),
            Err(Error::VersionMismatch { .. })
        ));
        assert!(matches!(
            NaiveBayesModel::from_text("garbage"),
            Err(Error::CorruptModel(_))
        ));
    }
}
