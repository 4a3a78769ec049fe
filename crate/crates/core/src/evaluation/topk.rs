//! Accuracy among the top-K ranked good or bad items.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::labels::Class;
use crate::propagation::ScoreVector;

/// Orders `nodes` most-`class` first: descending goodness for `Legit`,
/// descending badness for `Fake`. Ties go to the smaller node id.
pub fn rank_nodes(scores: &ScoreVector, nodes: &[NodeId], class: Class) -> Vec<usize> {
    let key = |v: NodeId| match class {
        Class::Legit => scores.goodness(v),
        Class::Fake => -scores.goodness(v),
    };
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| {
        key(nodes[b])
            .total_cmp(&key(nodes[a]))
            .then(nodes[a].cmp(&nodes[b]))
    });
    order
}

/// Fraction of the `k` highest-ranked `nodes` whose true label is `class`.
/// `actual[i]` is the label of `nodes[i]`.
pub fn topk_accuracy(
    scores: &ScoreVector,
    nodes: &[NodeId],
    actual: &[Class],
    k: usize,
    class: Class,
) -> Result<f64> {
    Ok(topk_curve(scores, nodes, actual, &[k], class)?[0].1)
}

/// `(k, accuracy)` for each requested `k`, from one sort.
pub fn topk_curve(
    scores: &ScoreVector,
    nodes: &[NodeId],
    actual: &[Class],
    ks: &[usize],
    class: Class,
) -> Result<Vec<(usize, f64)>> {
    if nodes.len() != actual.len() {
        return Err(Error::LengthMismatch(nodes.len(), actual.len()));
    }
    for &k in ks {
        if k == 0 || k > nodes.len() {
            return Err(Error::Config(format!(
                "top-k needs 1 <= k <= {}, got {k}",
                nodes.len()
            )));
        }
    }
    let order = rank_nodes(scores, nodes, class);
    let mut prefix = Vec::with_capacity(order.len() + 1);
    prefix.push(0usize);
    for &i in &order {
        prefix.push(prefix.last().unwrap() + usize::from(actual[i] == class));
    }
    Ok(ks.iter().map(|&k| (k, prefix[k] as f64 / k as f64)).collect())
}

/// `points` roughly evenly spaced cut-offs in `1..=max_k`.
pub fn even_ks(max_k: usize, points: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (1..=points.max(1))
        .map(|i| ((i * max_k) as f64 / points.max(1) as f64).round() as usize)
        .filter(|&k| k >= 1)
        .collect();
    ks.dedup();
    ks
}
