use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::Class;

/// Precision, recall and F-measure of one class, in percent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub f_measure: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Overall accuracy plus both classes' metrics, in percent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelMetrics {
    pub accuracy: f64,
    pub legit: ClassMetrics,
    pub fake: ClassMetrics,
    /// Number of evaluated items.
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn count(predicted: &[Class], actual: &[Class], positive: Class) -> Result<Confusion> {
        if predicted.len() != actual.len() {
            return Err(Error::LengthMismatch(predicted.len(), actual.len()));
        }
        let mut c = Confusion::default();
        for (&p, &a) in predicted.iter().zip(actual) {
            match (p == positive, a == positive) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// `(accuracy, precision, recall, f_measure)` for `positive`, in percent.
pub fn confusion_metrics(
    predicted: &[Class],
    actual: &[Class],
    positive: Class,
) -> Result<(f64, f64, f64, f64)> {
    if predicted.is_empty() && actual.is_empty() {
        return Err(Error::InsufficientData("no items to evaluate".into()));
    }
    let c = Confusion::count(predicted, actual, positive)?;
    let precision = pct(c.tp, c.tp + c.fp);
    let recall = pct(c.tp, c.tp + c.fn_);
    Ok((
        pct(c.tp + c.tn, c.total()),
        precision,
        recall,
        f_measure(precision, recall),
    ))
}

pub fn level_metrics(predicted: &[Class], actual: &[Class]) -> Result<LevelMetrics> {
    let (accuracy, lp, lr, lf) = confusion_metrics(predicted, actual, Class::Legit)?;
    let (_, fp, fr, ff) = confusion_metrics(predicted, actual, Class::Fake)?;
    Ok(LevelMetrics {
        accuracy,
        legit: ClassMetrics {
            f_measure: lf,
            precision: lp,
            recall: lr,
        },
        fake: ClassMetrics {
            f_measure: ff,
            precision: fp,
            recall: fr,
        },
        count: actual.len(),
    })
}

/// Field-wise arithmetic mean.
pub fn mean_metrics(rows: &[LevelMetrics]) -> LevelMetrics {
    let n = rows.len().max(1) as f64;
    let avg = |f: &dyn Fn(&LevelMetrics) -> f64| rows.iter().map(f).sum::<f64>() / n;
    LevelMetrics {
        accuracy: avg(&|m| m.accuracy),
        legit: ClassMetrics {
            f_measure: avg(&|m| m.legit.f_measure),
            precision: avg(&|m| m.legit.precision),
            recall: avg(&|m| m.legit.recall),
        },
        fake: ClassMetrics {
            f_measure: avg(&|m| m.fake.f_measure),
            precision: avg(&|m| m.fake.precision),
            recall: avg(&|m| m.fake.recall),
        },
        count: (rows.iter().map(|m| m.count).sum::<usize>() as f64 / n).round() as usize,
    }
}
