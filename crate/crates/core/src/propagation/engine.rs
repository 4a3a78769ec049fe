//! Double-buffered fixed-point iteration.
//!
//! Every per-node update is a pure function of the previous vector, and
//! every reduction is split into fixed-size chunks whose partial sums are
//! combined in chunk order. Results are therefore bit-identical for any
//! number of worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Chunk length for parallel fills and reductions. Fixed, so that reduction
/// order never depends on the thread pool.
pub const CHUNK: usize = 4096;

/// One synchronous sweep `next = F(prev)`.
pub trait Kernel: Sync {
    fn sweep(&self, prev: &[f64], next: &mut [f64]);

    /// The state is split into this many equal-length blocks; convergence
    /// requires every block's L1 delta to drop below the tolerance.
    fn blocks(&self) -> usize {
        1
    }
}

impl<F> Kernel for F
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn sweep(&self, prev: &[f64], next: &mut [f64]) {
        self(prev, next)
    }
}

/// Sets `out[i] = f(i)` in parallel.
pub fn par_fill(out: &mut [f64], f: impl Fn(usize) -> f64 + Sync) {
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
        let base = c * CHUNK;
        for (j, x) in chunk.iter_mut().enumerate() {
            *x = f(base + j);
        }
    });
}

/// Sum of `f(i)` over `0..len`, in a thread-count-independent order.
pub fn det_sum(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum::<f64>())
        .collect();
    partials.iter().sum()
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    det_sum(a.len(), |i| (a[i] - b[i]).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixpoint {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest per-block L1 delta of the last sweep.
    pub last_delta: f64,
}

pub fn iterate_to_fixpoint<K: Kernel + ?Sized>(
    kernel: &K,
    initial: Vec<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<Fixpoint> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParam {
            name: "tol",
            msg: format!("must be > 0, got {tol}"),
        });
    }
    let blocks = kernel.blocks().max(1);
    if initial.len() % blocks != 0 {
        return Err(Error::LengthMismatch(initial.len(), blocks));
    }
    let block_len = initial.len() / blocks;

    let mut prev = initial;
    let mut next = vec![0.0; prev.len()];
    let mut delta = f64::INFINITY;
    for iteration in 1..=max_iters {
        kernel.sweep(&prev, &mut next);
        if let Some(node) = next.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { iteration, node });
        }
        delta = (0..blocks)
            .map(|b| {
                let r = b * block_len..(b + 1) * block_len;
                l1_distance(&prev[r.clone()], &next[r])
            })
            .fold(0.0, f64::max);
        std::mem::swap(&mut prev, &mut next);
        if delta < tol {
            return Ok(Fixpoint {
                values: prev,
                iterations: iteration,
                converged: true,
                last_delta: delta,
            });
        }
    }
    Ok(Fixpoint {
        values: prev,
        iterations: max_iters,
        converged: false,
        last_delta: delta,
    })
}
