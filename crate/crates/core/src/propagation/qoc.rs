//! Coupled content-quality (QoC) and link-quality (QoL) scores.
//!
//! QoC(A) = EC(A)(1-d) + d * sum over in-links I of
//!          (alpha QoC(I) + (1-alpha) QoL(I)) / outdeg(I)
//! QoL(A) = EL(A)(1-d) + d * sum over out-links T of
//!          (beta QoC(T) + (1-beta) QoL(T)) / indeg(T)
//!
//! Both halves live in one state vector `[qoc | qol]` and are swept together.

use super::engine::{iterate_to_fixpoint, par_fill, Kernel};
use super::{check_seeds, Orientation, PropagationParams, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WebGraph};
use crate::seeds::{SeedKind, SeedVector};

struct CoupledKernel<'a> {
    g: &'a WebGraph,
    /// `[EC (1-d) | EL (1-d)]`
    base: Vec<f64>,
    damping: f64,
    alpha: f64,
    beta: f64,
}

impl Kernel for CoupledKernel<'_> {
    fn sweep(&self, prev: &[f64], next: &mut [f64]) {
        let n = self.g.num_nodes();
        let (qoc, qol) = prev.split_at(n);
        let (g, a, b, d) = (self.g, self.alpha, self.beta, self.damping);
        par_fill(next, |i| {
            let flow: f64 = if i < n {
                g.predecessors(i as NodeId)
                    .iter()
                    .map(|&j| {
                        let j = j as usize;
                        (a * qoc[j] + (1.0 - a) * qol[j]) / g.out_degree(j as NodeId) as f64
                    })
                    .sum()
            } else {
                g.successors((i - n) as NodeId)
                    .iter()
                    .map(|&t| {
                        let t = t as usize;
                        (b * qoc[t] + (1.0 - b) * qol[t]) / g.in_degree(t as NodeId) as f64
                    })
                    .sum()
            };
            self.base[i] + d * flow
        });
    }

    fn blocks(&self) -> usize {
        2
    }
}

/// Joint fixed point of QoC and QoL; both results share the iteration count
/// and convergence flag.
pub fn qoc_qol(
    g: &WebGraph,
    seeds_ec: &SeedVector,
    seeds_el: &SeedVector,
    params: &PropagationParams,
) -> Result<(ScoreVector, ScoreVector)> {
    params.validate()?;
    check_seeds(g, seeds_ec)?;
    check_seeds(g, seeds_el)?;
    if seeds_ec.kind != SeedKind::BinaryGood || seeds_el.kind != SeedKind::QolTristate {
        return Err(Error::Config(format!(
            "QoC/QoL expects (BinaryGood, QolTristate) seeds, got ({:?}, {:?})",
            seeds_ec.kind, seeds_el.kind
        )));
    }
    if !seeds_ec.values.iter().any(|&x| x != 0.0) {
        return Err(Error::EmptySeeds("legit"));
    }
    let n = g.num_nodes();
    let d = params.damping;
    let base: Vec<f64> = seeds_ec
        .values
        .iter()
        .chain(&seeds_el.values)
        .map(|e| e * (1.0 - d))
        .collect();
    let kernel = CoupledKernel {
        g,
        base: base.clone(),
        damping: d,
        alpha: params.alpha,
        beta: params.beta,
    };
    let fix = iterate_to_fixpoint(&kernel, base, params.tol, params.max_iters)?;
    let mut values = fix.values;
    let qol = values.split_off(n);
    let wrap = |values| ScoreVector {
        values,
        orientation: Orientation::HigherIsGood,
        iterations: fix.iterations,
        converged: fix.converged,
    };
    Ok((wrap(values), wrap(qol)))
}
