//! Initial score vectors for the seeded algorithms.
//!
//! Only train-role labels are ever read here; test-role pages are treated
//! exactly like unlabeled ones.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, SiteMapping, WebGraph};
use crate::labels::{Class, Role, SeedLabels};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedKind {
    /// 1 on train-role legit pages.
    BinaryGood,
    /// 1 on train-role fake pages.
    BinaryBad,
    /// +1/-1 on every page (QoL's link-quality prior).
    QolTristate,
    /// 1 on pages whose in- and out-links share too many sites.
    ParentPenaltyFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedVector {
    pub values: Vec<f64>,
    pub kind: SeedKind,
}

impl SeedVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(v, _)| v as NodeId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Good,
    Bad,
}

impl Polarity {
    fn class(self) -> Class {
        match self {
            Polarity::Good => Class::Legit,
            Polarity::Bad => Class::Fake,
        }
    }
}

/// 1 on train-role pages of the requested class, 0 elsewhere.
pub fn seed_binary(labels: &SeedLabels, polarity: Polarity) -> Result<SeedVector> {
    let class = polarity.class();
    let values: Vec<f64> = (0..labels.len() as NodeId)
        .map(|v| f64::from(u8::from(labels.class_in(v, Role::Train) == Some(class))))
        .collect();
    if !values.iter().any(|&x| x != 0.0) {
        return Err(Error::EmptySeeds(class.as_str()));
    }
    let kind = match polarity {
        Polarity::Good => SeedKind::BinaryGood,
        Polarity::Bad => SeedKind::BinaryBad,
    };
    Ok(SeedVector { values, kind })
}

/// EL(A) = +1 iff A links to more train-good than train-bad pages and to
/// fewer than `k` train-bad pages; -1 otherwise, including pages with no
/// labeled out-links.
pub fn seed_qol(g: &WebGraph, labels: &SeedLabels, k: usize) -> Result<SeedVector> {
    if labels.len() != g.num_nodes() {
        return Err(Error::LengthMismatch(labels.len(), g.num_nodes()));
    }
    let values = (0..g.num_nodes() as NodeId)
        .into_par_iter()
        .map(|a| {
            let (mut good, mut bad) = (0usize, 0usize);
            for &t in g.successors(a) {
                match labels.class_in(t, Role::Train) {
                    Some(Class::Legit) => good += 1,
                    Some(Class::Fake) => bad += 1,
                    None => {}
                }
            }
            if good > bad && bad < k {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    Ok(SeedVector {
        values,
        kind: SeedKind::QolTristate,
    })
}

/// Flags A when the sites of its in-links and the sites of its out-links,
/// both excluding A's own site, have more than `t` sites in common.
pub fn seed_parentpenalty(g: &WebGraph, sites: &SiteMapping, t: usize) -> Result<SeedVector> {
    if sites.num_nodes() != g.num_nodes() {
        return Err(Error::LengthMismatch(sites.num_nodes(), g.num_nodes()));
    }
    let values = (0..g.num_nodes() as NodeId)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(ins, outs), a| {
                let own = sites.site_of(a);
                let collect = |buf: &mut Vec<u32>, nodes: &[NodeId]| {
                    buf.clear();
                    buf.extend(nodes.iter().map(|&x| sites.site_of(x)).filter(|&s| s != own));
                    buf.sort_unstable();
                    buf.dedup();
                };
                collect(ins, g.predecessors(a));
                collect(outs, g.successors(a));
                let common = count_common(ins, outs);
                f64::from(u8::from(common > t))
            },
        )
        .collect();
    Ok(SeedVector {
        values,
        kind: SeedKind::ParentPenaltyFlag,
    })
}

fn count_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}
