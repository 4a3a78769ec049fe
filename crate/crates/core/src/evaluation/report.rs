use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::experiment::{Granularity, Level};
use super::metrics::LevelMetrics;
use super::stats::PairedTTest;
use crate::labels::Class;
use crate::propagation::{Algorithm, PropagationParams};

/// One run x algorithm x level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub algorithm: Algorithm,
    pub level: Level,
    pub metrics: LevelMetrics,
    pub params: PropagationParams,
    pub threshold: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub algorithm: Algorithm,
    pub level: Level,
    pub metrics: LevelMetrics,
    pub runs: usize,
    pub nonconverged_runs: usize,
}

/// Mean top-K accuracy over runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKCurve {
    pub algorithm: Algorithm,
    pub class: Class,
    pub points: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub level: Level,
    pub a: String,
    pub b: String,
    pub test: PairedTTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub granularity: Granularity,
    pub runs: usize,
    pub records: Vec<RunRecord>,
    pub means: Vec<MeanRow>,
    pub topk: Vec<TopKCurve>,
    pub comparisons: Vec<PairedComparison>,
}

impl EvalReport {
    pub(crate) fn empty(granularity: Granularity, runs: usize) -> Self {
        EvalReport {
            granularity,
            runs,
            records: Vec::new(),
            means: Vec::new(),
            topk: Vec::new(),
            comparisons: Vec::new(),
        }
    }

    pub fn mean(&self, algorithm: Algorithm, level: Level) -> Option<&LevelMetrics> {
        self.means
            .iter()
            .find(|m| m.algorithm == algorithm && m.level == level)
            .map(|m| &m.metrics)
    }

    pub fn comparison(&self, level: Level, a: Algorithm, b: Algorithm) -> Option<PairedTTest> {
        self.comparisons.iter().find_map(|c| {
            if c.level != level {
                return None;
            }
            if c.a == a.name() && c.b == b.name() {
                Some(c.test)
            } else if c.a == b.name() && c.b == a.name() {
                Some(PairedTTest {
                    t: -c.test.t,
                    mean_diff: -c.test.mean_diff,
                    ..c.test
                })
            } else {
                None
            }
        })
    }

    /// One JSON object per run record.
    pub fn write_records_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Mean metrics laid out as Overall Accuracy | Legit F/P/R | Fake F/P/R,
    /// one block per level.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let levels: &[Level] = match self.granularity {
            Granularity::PageGraph => &[Level::Site, Level::Page],
            Granularity::SiteGraph => &[Level::Site],
        };
        let graph = match self.granularity {
            Granularity::PageGraph => "page-level graph",
            Granularity::SiteGraph => "site-level graph",
        };
        for &level in levels {
            let title = match level {
                Level::Site => "Site Level Performance",
                Level::Page => "Page Level Performance",
            };
            let _ = writeln!(out, "{title} ({graph}, mean of {} runs)", self.runs);
            let _ = writeln!(
                out,
                "{:<14} {:>8} | {:>7} {:>7} {:>7} | {:>7} {:>7} {:>7}",
                "", "Overall", "Legit", "", "", "Fake", "", ""
            );
            let _ = writeln!(
                out,
                "{:<14} {:>8} | {:>7} {:>7} {:>7} | {:>7} {:>7} {:>7}",
                "Algorithm", "Acc.", "F-Meas.", "Prec.", "Recall", "F-Meas.", "Prec.", "Recall"
            );
            for row in self.means.iter().filter(|m| m.level == level) {
                let m = &row.metrics;
                let _ = write!(
                    out,
                    "{:<14} {:>8.2} | {:>7.2} {:>7.2} {:>7.2} | {:>7.2} {:>7.2} {:>7.2}",
                    row.algorithm.name(),
                    m.accuracy,
                    m.legit.f_measure,
                    m.legit.precision,
                    m.legit.recall,
                    m.fake.f_measure,
                    m.fake.precision,
                    m.fake.recall,
                );
                if row.nonconverged_runs > 0 {
                    let _ = write!(out, "  ({} runs not converged)", row.nonconverged_runs);
                }
                out.push('\n');
            }
            out.push('\n');
        }
        if !self.comparisons.is_empty() {
            let _ = writeln!(out, "Paired t-tests on accuracy (n = {})", self.runs);
            for c in &self.comparisons {
                let _ = writeln!(
                    out,
                    "{:<5} {:<14} vs {:<14} t = {:>9.3}  p = {:.3e}{}",
                    match c.level {
                        Level::Site => "site",
                        Level::Page => "page",
                    },
                    c.a,
                    c.b,
                    c.test.t,
                    c.test.p,
                    if c.test.degenerate { "  (zero variance)" } else { "" }
                );
            }
        }
        out
    }
}

impl TopKCurve {
    /// `k,accuracy` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,accuracy\n");
        for (k, acc) in &self.points {
            let _ = writeln!(out, "{k},{acc}");
        }
        out
    }
}
