//! Dense reference implementations. They work from plain edge lists and
//! never touch the CSR structure, so they share no code with the crate.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edges = BTreeSet<(usize, usize)>;

/// Random edge list with duplicates and self-loops mixed in; returns the raw
/// list and its cleaned set.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64) -> (Vec<(u32, u32)>, Edges) {
    let mut raw = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.random::<f64>() < density {
                raw.push((u as u32, v as u32));
                if rng.random::<f64>() < 0.1 {
                    raw.push((u as u32, v as u32));
                }
            }
        }
    }
    let clean = raw
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u as usize, v as usize))
        .collect();
    (raw, clean)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn out_deg(n: usize, e: &Edges) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, _) in e {
        d[u] += 1;
    }
    d
}

pub fn in_deg(n: usize, e: &Edges) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(_, v) in e {
        d[v] += 1;
    }
    d
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 1e-12, "singular system");
        for row in col + 1..n {
            let f = a[row][col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

fn identity_minus(d: f64, m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j)) - d * m[i][j]).collect())
        .collect()
}

/// `m[i][j]` = weight with which `x_j` flows into `x_i` along `j -> i`.
fn forward_matrix(n: usize, e: &Edges, dangling: bool) -> Vec<Vec<f64>> {
    let od = out_deg(n, e);
    let mut m = vec![vec![0.0; n]; n];
    for &(u, v) in e {
        m[v][u] += 1.0 / od[u] as f64;
    }
    if dangling {
        for j in (0..n).filter(|&j| od[j] == 0) {
            for row in m.iter_mut() {
                row[j] += 1.0 / n as f64;
            }
        }
    }
    m
}

/// `m[i][t]` = weight with which `x_t` flows back into `x_i` along `i -> t`.
fn backward_matrix(n: usize, e: &Edges) -> Vec<Vec<f64>> {
    let id = in_deg(n, e);
    let mut m = vec![vec![0.0; n]; n];
    for &(u, v) in e {
        m[u][v] += 1.0 / id[v] as f64;
    }
    m
}

pub fn pagerank_exact(n: usize, e: &Edges, d: f64) -> Vec<f64> {
    let m = forward_matrix(n, e, true);
    solve(identity_minus(d, &m), vec![(1.0 - d) / n as f64; n])
}

pub fn trustrank_exact(n: usize, e: &Edges, seeds: &[f64], d: f64) -> Vec<f64> {
    let m = forward_matrix(n, e, false);
    let b = seeds.iter().map(|s| s * (1.0 - d) / n as f64).collect();
    solve(identity_minus(d, &m), b)
}

pub fn reversed(e: &Edges) -> Edges {
    e.iter().map(|&(u, v)| (v, u)).collect()
}

pub fn badrank_exact(n: usize, e: &Edges, seeds: &[f64], d: f64) -> Vec<f64> {
    let m = backward_matrix(n, e);
    let b = seeds.iter().map(|s| s * (1.0 - d)).collect();
    solve(identity_minus(d, &m), b)
}

/// Joint fixed point of the coupled system, as `(qoc, qol)`.
pub fn qocqol_exact(
    n: usize,
    e: &Edges,
    ec: &[f64],
    el: &[f64],
    d: f64,
    alpha: f64,
    beta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let f = forward_matrix(n, e, false);
    let bk = backward_matrix(n, e);
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = alpha * f[i][j];
            m[i][n + j] = (1.0 - alpha) * f[i][j];
            m[n + i][j] = beta * bk[i][j];
            m[n + i][n + j] = (1.0 - beta) * bk[i][j];
        }
    }
    let b = ec.iter().chain(el).map(|s| s * (1.0 - d)).collect();
    let mut x = solve(identity_minus(d, &m), b);
    let qol = x.split_off(n);
    (x, qol)
}

/// Plain power iteration for PageRank with the same stopping rule as the
/// crate: stop once the L1 change drops below `tol`.
pub fn pagerank_power(n: usize, e: &Edges, d: f64, tol: f64, max_iters: usize) -> (Vec<f64>, usize) {
    let m = forward_matrix(n, e, true);
    let mut x = vec![1.0 / n as f64; n];
    for it in 1..=max_iters {
        let next: Vec<f64> = (0..n)
            .map(|i| (1.0 - d) / n as f64 + d * (0..n).map(|j| m[i][j] * x[j]).sum::<f64>())
            .collect();
        let delta: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta < tol {
            return (x, it);
        }
    }
    (x, max_iters)
}

/// ParentPenalty by repeated full sweeps until nothing changes.
pub fn parentpenalty_naive(n: usize, e: &Edges, seeds: &[bool], p: usize) -> Vec<bool> {
    let mut flagged = seeds.to_vec();
    loop {
        let mut changed = false;
        let snapshot = flagged.clone();
        for a in 0..n {
            if snapshot[a] {
                continue;
            }
            let hits = e.iter().filter(|&&(u, v)| u == a && snapshot[v]).count();
            if hits >= p {
                flagged[a] = true;
                changed = true;
            }
        }
        if !changed {
            return flagged;
        }
    }
}

/// Seed rule: in-link sites and out-link sites (own site excluded) share
/// more than `t` sites.
pub fn parentpenalty_seeds_naive(n: usize, e: &Edges, site_of: &[u32], t: usize) -> Vec<bool> {
    (0..n)
        .map(|a| {
            let own = site_of[a];
            let ins: BTreeSet<u32> = e
                .iter()
                .filter(|&&(_, v)| v == a)
                .map(|&(u, _)| site_of[u])
                .filter(|&s| s != own)
                .collect();
            let outs: BTreeSet<u32> = e
                .iter()
                .filter(|&&(u, _)| u == a)
                .map(|&(_, v)| site_of[v])
                .filter(|&s| s != own)
                .collect();
            ins.intersection(&outs).count() > t
        })
        .collect()
}

/// QoL prior from labeled out-neighbors.
pub fn qol_seeds_naive(n: usize, e: &Edges, class: &[Option<bool>], k: usize) -> Vec<f64> {
    (0..n)
        .map(|a| {
            let good = e.iter().filter(|&&(u, v)| u == a && class[v] == Some(true)).count();
            let bad = e.iter().filter(|&&(u, v)| u == a && class[v] == Some(false)).count();
            if good > bad && bad < k {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Top-k accuracy by sorting `(key, id)` pairs in full.
pub fn topk_full_sort(goodness: &[f64], ids: &[u32], is_good: &[bool], k: usize, want_good: bool) -> f64 {
    let mut items: Vec<(f64, u32, bool)> = goodness
        .iter()
        .zip(ids)
        .zip(is_good)
        .map(|((&g, &id), &good)| (if want_good { g } else { -g }, id, good))
        .collect();
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    items[..k].iter().filter(|x| x.2 == want_good).count() as f64 / k as f64
}
