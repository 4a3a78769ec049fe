//! Score thresholds and site-level majority votes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SiteId, SiteMapping};
use crate::labels::{Class, Role, SeedLabels};
use crate::propagation::ScoreVector;

/// `Legit` iff the oriented goodness score is strictly above `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    pub threshold: f64,
    /// Accuracy (fraction) reached on the nodes the threshold was fit on.
    pub fit_accuracy: f64,
}

impl Classifier {
    /// ParentPenalty output is already a verdict: flagged pages are fake.
    pub fn flags() -> Classifier {
        Classifier {
            threshold: -0.5,
            fit_accuracy: f64::NAN,
        }
    }

    #[inline]
    pub fn label(&self, scores: &ScoreVector, v: NodeId) -> Class {
        if scores.goodness(v) > self.threshold {
            Class::Legit
        } else {
            Class::Fake
        }
    }
}

/// Picks the threshold with the best accuracy over the `role` nodes.
///
/// Candidates are one value below every score, the midpoint of each pair of
/// adjacent distinct scores, and the largest score (everything fake). Among
/// equally accurate candidates the lowest threshold wins.
pub fn fit_threshold(scores: &ScoreVector, labels: &SeedLabels, role: Role) -> Result<Classifier> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch(scores.len(), labels.len()));
    }
    let mut points: Vec<(f64, Class)> = labels
        .nodes_in(role)
        .map(|v| (scores.goodness(v), labels.class(v).expect("role implies class")))
        .collect();
    fit_points(&mut points)
}

pub(crate) fn fit_points(points: &mut [(f64, Class)]) -> Result<Classifier> {
    let total = points.len();
    let legit_total = points.iter().filter(|p| p.1 == Class::Legit).count();
    if legit_total == 0 || legit_total == total {
        return Err(Error::SingleClass(format!(
            "{legit_total} legit of {total} fitting nodes"
        )));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Threshold below everything: all predicted legit.
    let mut best_correct = legit_total;
    let mut best_threshold = points[0].0 - 1.0;
    let mut fake_below = 0;
    let mut legit_below = 0;
    let mut i = 0;
    while i < total {
        // Move the whole run of equal scores below the threshold.
        let value = points[i].0;
        while i < total && points[i].0 == value {
            match points[i].1 {
                Class::Fake => fake_below += 1,
                Class::Legit => legit_below += 1,
            }
            i += 1;
        }
        let correct = fake_below + (legit_total - legit_below);
        if correct > best_correct {
            best_correct = correct;
            best_threshold = if i < total {
                let upper = points[i].0;
                let mid = value + (upper - value) / 2.0;
                if mid < upper {
                    mid
                } else {
                    value
                }
            } else {
                value
            };
        }
    }
    Ok(Classifier {
        threshold: best_threshold,
        fit_accuracy: best_correct as f64 / total as f64,
    })
}

pub fn classify_pages(scores: &ScoreVector, c: &Classifier) -> Vec<Class> {
    (0..scores.len() as NodeId).map(|v| c.label(scores, v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteVerdicts {
    pub sites: Vec<SiteId>,
    pub labels: Vec<Class>,
    pub legit_fraction: Vec<f64>,
}

/// A site is legit only if strictly more than half of its pages are; ties
/// go to fake.
pub fn aggregate_sites(
    page_labels: &[Class],
    sites: &SiteMapping,
    restrict_to: &[SiteId],
) -> Result<SiteVerdicts> {
    if page_labels.len() != sites.num_nodes() {
        return Err(Error::LengthMismatch(page_labels.len(), sites.num_nodes()));
    }
    let mut pages = vec![0usize; sites.num_sites()];
    let mut legit = vec![0usize; sites.num_sites()];
    for (v, &label) in page_labels.iter().enumerate() {
        let s = sites.site_of(v as NodeId) as usize;
        pages[s] += 1;
        if label == Class::Legit {
            legit[s] += 1;
        }
    }
    let mut out = SiteVerdicts {
        sites: Vec::with_capacity(restrict_to.len()),
        labels: Vec::with_capacity(restrict_to.len()),
        legit_fraction: Vec::with_capacity(restrict_to.len()),
    };
    for &s in restrict_to {
        let (p, l) = (pages[s as usize], legit[s as usize]);
        if p == 0 {
            return Err(Error::EmptySite(sites.name(s).to_string()));
        }
        out.sites.push(s);
        out.labels.push(if 2 * l > p { Class::Legit } else { Class::Fake });
        out.legit_fraction.push(l as f64 / p as f64);
    }
    Ok(out)
}
