//! PageRank-family linear recurrences.

use super::engine::{det_sum, iterate_to_fixpoint, par_fill, Kernel};
use super::{check_seeds, AtrDirection, Orientation, PropagationParams, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WebGraph};
use crate::seeds::{SeedKind, SeedVector};

#[derive(Clone, Copy)]
enum Gather {
    /// Sum over in-neighbors j of x[j] / outdeg(j).
    InLinks,
    /// Sum over out-neighbors t of x[t] / indeg(t).
    OutLinks,
}

/// `x'[i] = base[i] + d * gather(x)[i]`, plus uniform dangling mass when
/// `dangling` is set.
struct LinearKernel<'a> {
    g: &'a WebGraph,
    gather: Gather,
    base: Vec<f64>,
    damping: f64,
    dangling: bool,
}

impl LinearKernel<'_> {
    #[inline]
    fn gathered(&self, i: usize, x: &[f64]) -> f64 {
        let v = i as NodeId;
        match self.gather {
            Gather::InLinks => self
                .g
                .predecessors(v)
                .iter()
                .map(|&j| x[j as usize] / self.g.out_degree(j) as f64)
                .sum(),
            // in-degree of an out-neighbor is at least 1
            Gather::OutLinks => self
                .g
                .successors(v)
                .iter()
                .map(|&t| x[t as usize] / self.g.in_degree(t) as f64)
                .sum(),
        }
    }
}

impl Kernel for LinearKernel<'_> {
    fn sweep(&self, prev: &[f64], next: &mut [f64]) {
        let n = prev.len();
        let spread = if self.dangling {
            let g = self.g;
            det_sum(n, |j| {
                if g.out_degree(j as NodeId) == 0 {
                    prev[j]
                } else {
                    0.0
                }
            }) / n as f64
        } else {
            0.0
        };
        let d = self.damping;
        par_fill(next, |i| self.base[i] + d * (self.gathered(i, prev) + spread));
    }
}

fn require_kind(seeds: &SeedVector, kinds: &[SeedKind]) -> Result<()> {
    if !kinds.contains(&seeds.kind) {
        return Err(Error::Config(format!("unexpected seed vector {:?}", seeds.kind)));
    }
    if !seeds.values.iter().any(|&x| x != 0.0) {
        return Err(Error::EmptySeeds("nonzero"));
    }
    Ok(())
}

fn run(kernel: LinearKernel<'_>, params: &PropagationParams, orientation: Orientation) -> Result<ScoreVector> {
    let initial = kernel.base.clone();
    let fix = iterate_to_fixpoint(&kernel, initial, params.tol, params.max_iters)?;
    Ok(ScoreVector::from_fixpoint(fix, orientation))
}

/// PR(A) = (1-d)/n + d * (sum over in-links I of PR(I)/outdeg(I) + dangling/n).
pub fn pagerank(g: &WebGraph, params: &PropagationParams) -> Result<ScoreVector> {
    params.validate()?;
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::Config("PageRank needs at least one node".into()));
    }
    let d = params.damping;
    let kernel = LinearKernel {
        g,
        gather: Gather::InLinks,
        base: vec![(1.0 - d) / n as f64; n],
        damping: d,
        dangling: true,
    };
    let initial = vec![1.0 / n as f64; n];
    let fix = iterate_to_fixpoint(&kernel, initial, params.tol, params.max_iters)?;
    Ok(ScoreVector::from_fixpoint(fix, Orientation::HigherIsGood))
}

/// TR(A) = E(A)(1-d)/n + d * sum over in-links I of TR(I)/outdeg(I).
pub fn trustrank(g: &WebGraph, seeds: &SeedVector, params: &PropagationParams) -> Result<ScoreVector> {
    params.validate()?;
    check_seeds(g, seeds)?;
    require_kind(seeds, &[SeedKind::BinaryGood, SeedKind::BinaryBad])?;
    run(in_link_kernel(g, seeds, params), params, Orientation::HigherIsGood)
}

fn in_link_kernel<'a>(g: &'a WebGraph, seeds: &SeedVector, params: &PropagationParams) -> LinearKernel<'a> {
    let n = g.num_nodes() as f64;
    let d = params.damping;
    LinearKernel {
        g,
        gather: Gather::InLinks,
        base: seeds.values.iter().map(|e| e * (1.0 - d) / n).collect(),
        damping: d,
        dangling: false,
    }
}

/// TrustRank's recurrence seeded with bad pages. In `Reversed` mode it runs
/// on the transpose, so badness reaches pages that link to bad pages.
pub fn antitrustrank(
    g: &WebGraph,
    seeds: &SeedVector,
    params: &PropagationParams,
    direction: AtrDirection,
) -> Result<ScoreVector> {
    params.validate()?;
    check_seeds(g, seeds)?;
    require_kind(seeds, &[SeedKind::BinaryBad, SeedKind::BinaryGood])?;
    match direction {
        AtrDirection::Table1 => run(in_link_kernel(g, seeds, params), params, Orientation::HigherIsBad),
        AtrDirection::Reversed => {
            let t = g.transpose();
            run(in_link_kernel(&t, seeds, params), params, Orientation::HigherIsBad)
        }
    }
}

/// BR(A) = E(A)(1-d) + d * sum over out-links T of BR(T)/indeg(T).
pub fn badrank(g: &WebGraph, seeds: &SeedVector, params: &PropagationParams) -> Result<ScoreVector> {
    params.validate()?;
    check_seeds(g, seeds)?;
    require_kind(seeds, &[SeedKind::BinaryBad])?;
    let d = params.damping;
    let kernel = LinearKernel {
        g,
        gather: Gather::OutLinks,
        base: seeds.values.iter().map(|e| e * (1.0 - d)).collect(),
        damping: d,
        dangling: false,
    };
    run(kernel, params, Orientation::HigherIsBad)
}
