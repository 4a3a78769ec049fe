//! The seven link-based scoring algorithms.
//!
//! | algorithm     | seeds                | gathers from | divisor          | orientation |
//! |---------------|----------------------|--------------|------------------|-------------|
//! | PageRank      | none                 | in-links     | out-degree       | good        |
//! | TrustRank     | train legit          | in-links     | out-degree       | good        |
//! | AntiTrustRank | train fake           | in-links     | out-degree       | bad         |
//! | BadRank       | train fake           | out-links    | in-degree        | bad         |
//! | ParentPenalty | shared parent sites  | out-links    | threshold count  | bad         |
//! | QoC           | train legit          | in-links     | out-degree       | good        |
//! | QoL           | link-quality prior   | out-links    | in-degree        | good        |
//!
//! Only PageRank redistributes dangling mass; the seeded recurrences are
//! applied as written, so their vectors are not distributions.

mod engine;
mod parentpenalty;
mod qoc;
mod ranks;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use engine::{det_sum, iterate_to_fixpoint, l1_distance, par_fill, Fixpoint, Kernel, CHUNK};
pub use parentpenalty::parentpenalty;
pub use qoc::qoc_qol;
pub use ranks::{antitrustrank, badrank, pagerank, trustrank};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SiteMapping, WebGraph};
use crate::labels::SeedLabels;
use crate::seeds::{seed_binary, seed_parentpenalty, seed_qol, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationParams {
    /// Damping factor, in (0, 1).
    pub damping: f64,
    /// Weight of in-neighbors' QoC (vs. QoL) in the QoC update.
    pub alpha: f64,
    /// Weight of out-neighbors' QoC (vs. QoL) in the QoL update.
    pub beta: f64,
    /// QoL prior: maximum (exclusive) number of bad out-links.
    pub k: usize,
    /// ParentPenalty seeding: common-site count must exceed this.
    pub t: usize,
    /// ParentPenalty propagation: flagged out-links needed to flag a page.
    pub p: usize,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PropagationParams {
    fn default() -> Self {
        PropagationParams {
            damping: 0.85,
            alpha: 0.5,
            beta: 0.5,
            k: 3,
            t: 3,
            p: 3,
            tol: 1e-8,
            max_iters: 100,
        }
    }
}

impl PropagationParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, msg: String| Err(Error::InvalidParam { name, msg });
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return bad("d", format!("must lie in (0, 1), got {}", self.damping));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad("alpha", format!("must lie in [0, 1], got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return bad("beta", format!("must lie in [0, 1], got {}", self.beta));
        }
        if self.p == 0 {
            return bad("p", "must be >= 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol", format!("must be a positive number, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters", "must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    HigherIsGood,
    HigherIsBad,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub values: Vec<f64>,
    pub orientation: Orientation,
    pub iterations: usize,
    pub converged: bool,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Score of `v` on the higher-is-good scale.
    #[inline]
    pub fn goodness(&self, v: NodeId) -> f64 {
        let x = self.values[v as usize];
        match self.orientation {
            Orientation::HigherIsGood => x,
            Orientation::HigherIsBad => -x,
        }
    }

    /// Same ranking, opposite orientation tag.
    pub fn negated(&self) -> ScoreVector {
        ScoreVector {
            values: self.values.iter().map(|x| -x).collect(),
            orientation: match self.orientation {
                Orientation::HigherIsGood => Orientation::HigherIsBad,
                Orientation::HigherIsBad => Orientation::HigherIsGood,
            },
            ..self.clone()
        }
    }

    fn from_fixpoint(f: Fixpoint, orientation: Orientation) -> Self {
        ScoreVector {
            values: f.values,
            orientation,
            iterations: f.iterations,
            converged: f.converged,
        }
    }
}

/// AntiTrustRank variants: the in-link recurrence as tabulated, or the same
/// recurrence on the transposed graph (distrust flows to pages that link to
/// bad pages).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtrDirection {
    #[default]
    Table1,
    Reversed,
}

impl FromStr for AtrDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(AtrDirection::Table1),
            "reversed" => Ok(AtrDirection::Reversed),
            _ => Err(Error::Config(format!("unknown AntiTrustRank direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    BadRank,
    TrustRank,
    PageRank,
    AntiTrustRank,
    ParentPenalty,
    QoL,
    QoC,
}

impl Algorithm {
    /// Reporting order.
    pub const ALL: [Algorithm; 7] = [
        Algorithm::BadRank,
        Algorithm::TrustRank,
        Algorithm::PageRank,
        Algorithm::AntiTrustRank,
        Algorithm::ParentPenalty,
        Algorithm::QoL,
        Algorithm::QoC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BadRank => "BadRank",
            Algorithm::TrustRank => "TrustRank",
            Algorithm::PageRank => "PageRank",
            Algorithm::AntiTrustRank => "AntiTrustRank",
            Algorithm::ParentPenalty => "ParentPenalty",
            Algorithm::QoL => "QoL",
            Algorithm::QoC => "QoC",
        }
    }

    /// Propagates both classes (QoC and QoL).
    pub fn is_dual(self) -> bool {
        matches!(self, Algorithm::QoC | Algorithm::QoL)
    }

    pub fn orientation(self) -> Orientation {
        match self {
            Algorithm::BadRank | Algorithm::AntiTrustRank | Algorithm::ParentPenalty => {
                Orientation::HigherIsBad
            }
            _ => Orientation::HigherIsGood,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Seeds from `labels` (train role only) and runs one algorithm.
///
/// For QoC and QoL the coupled system is solved and the requested half is
/// returned; use [`score_qoc_qol`] to get both from one solve.
pub fn score(
    algorithm: Algorithm,
    g: &WebGraph,
    sites: &SiteMapping,
    labels: &SeedLabels,
    params: &PropagationParams,
    atr: AtrDirection,
) -> Result<ScoreVector> {
    params.validate()?;
    match algorithm {
        Algorithm::PageRank => pagerank(g, params),
        Algorithm::TrustRank => trustrank(g, &seed_binary(labels, Polarity::Good)?, params),
        Algorithm::AntiTrustRank => {
            antitrustrank(g, &seed_binary(labels, Polarity::Bad)?, params, atr)
        }
        Algorithm::BadRank => badrank(g, &seed_binary(labels, Polarity::Bad)?, params),
        Algorithm::ParentPenalty => {
            parentpenalty(g, &seed_parentpenalty(g, sites, params.t)?, params)
        }
        Algorithm::QoC => Ok(score_qoc_qol(g, labels, params)?.0),
        Algorithm::QoL => Ok(score_qoc_qol(g, labels, params)?.1),
    }
}

pub fn score_qoc_qol(
    g: &WebGraph,
    labels: &SeedLabels,
    params: &PropagationParams,
) -> Result<(ScoreVector, ScoreVector)> {
    let ec = seed_binary(labels, Polarity::Good)?;
    let el = seed_qol(g, labels, params.k)?;
    qoc_qol(g, &ec, &el, params)
}

fn check_seeds(g: &WebGraph, seeds: &crate::seeds::SeedVector) -> Result<()> {
    if seeds.len() != g.num_nodes() {
        return Err(Error::LengthMismatch(seeds.len(), g.num_nodes()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_ranges_enforced() {
        assert!(PropagationParams::default().validate().is_ok());
        for p in [
            PropagationParams { damping: 1.0, ..Default::default() },
            PropagationParams { damping: 0.0, ..Default::default() },
            PropagationParams { alpha: 1.5, ..Default::default() },
            PropagationParams { beta: -0.1, ..Default::default() },
            PropagationParams { p: 0, ..Default::default() },
            PropagationParams { tol: 0.0, ..Default::default() },
            PropagationParams { max_iters: 0, ..Default::default() },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("hits".parse::<Algorithm>().is_err());
    }

    #[test]
    fn negation_keeps_goodness() {
        let s = ScoreVector {
            values: vec![0.9, 0.0],
            orientation: Orientation::HigherIsBad,
            iterations: 1,
            converged: true,
        };
        let n = s.negated();
        assert_eq!(s.goodness(0), n.goodness(0));
        assert_eq!(n.orientation, Orientation::HigherIsGood);
    }
}
