//! ParentPenalty flag saturation.
//!
//! Starting from the seed flags, a page becomes flagged once at least `p` of
//! its out-links point to flagged pages. Flags are never cleared, so the
//! result is the least fixed point above the seed. A flag counter per page
//! turns this into one pass over the edges.

use super::{check_seeds, Orientation, PropagationParams, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WebGraph};
use crate::seeds::SeedVector;

/// `iterations` on the result counts propagation waves: wave `w` flags pages
/// whose `p`-th flagged out-link was flagged in wave `w - 1`.
pub fn parentpenalty(
    g: &WebGraph,
    seeds: &SeedVector,
    params: &PropagationParams,
) -> Result<ScoreVector> {
    check_seeds(g, seeds)?;
    if params.p == 0 {
        return Err(Error::InvalidParam {
            name: "p",
            msg: "must be >= 1".into(),
        });
    }
    if seeds.values.iter().any(|&x| x != 0.0 && x != 1.0) {
        return Err(Error::Config("ParentPenalty seeds must be 0/1 flags".into()));
    }
    let n = g.num_nodes();
    let mut flagged: Vec<bool> = seeds.values.iter().map(|&x| x == 1.0).collect();
    let mut hits = vec![0usize; n];
    let mut frontier: Vec<NodeId> = (0..n as NodeId).filter(|&v| flagged[v as usize]).collect();
    let mut waves = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &t in &frontier {
            for &a in g.predecessors(t) {
                let a = a as usize;
                hits[a] += 1;
                if !flagged[a] && hits[a] >= params.p {
                    flagged[a] = true;
                    next.push(a as NodeId);
                }
            }
        }
        if !next.is_empty() {
            waves += 1;
        }
        next.sort_unstable();
        frontier = next;
    }
    Ok(ScoreVector {
        values: flagged.into_iter().map(|f| f64::from(u8::from(f))).collect(),
        orientation: Orientation::HigherIsBad,
        iterations: waves,
        converged: true,
    })
}
