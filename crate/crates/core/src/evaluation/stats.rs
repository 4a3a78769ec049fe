use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTTest {
    pub t: f64,
    /// Two-tailed.
    pub p: f64,
    pub n: usize,
    pub mean_diff: f64,
    /// The differences had zero variance but a nonzero mean; `t` is infinite
    /// and `p` is reported as 0.
    pub degenerate: bool,
}

/// Paired Student t-test on `a[i] - b[i]`, with n - 1 degrees of freedom.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<PairedTTest> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "paired t-test needs at least 2 pairs, got {n}"
        )));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // Differences that are all equal can still leave rounding noise in `var`.
    let all_equal = diffs.iter().all(|&d| d == diffs[0]);

    if all_equal || var == 0.0 {
        if mean == 0.0 {
            return Ok(PairedTTest {
                t: 0.0,
                p: 1.0,
                n,
                mean_diff: 0.0,
                degenerate: false,
            });
        }
        return Ok(PairedTTest {
            t: f64::INFINITY.copysign(mean),
            p: 0.0,
            n,
            mean_diff: mean,
            degenerate: true,
        });
    }

    let t = mean / (var.sqrt() / (n as f64).sqrt());
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("dof >= 1");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(PairedTTest {
        t,
        p,
        n,
        mean_diff: mean,
        degenerate: false,
    })
}
