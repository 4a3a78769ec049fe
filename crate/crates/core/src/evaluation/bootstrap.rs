use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SiteId;
use crate::labels::{Class, Role};

/// Per-run train/test roles for the labeled sites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapPlan {
    pub rng_seed: u64,
    /// `runs[r][site]` is the role of `site` in run `r`; `None` for unlabeled
    /// sites.
    pub runs: Vec<Vec<Option<Role>>>,
}

impl BootstrapPlan {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn sites_in(&self, run: usize, role: Role) -> Vec<SiteId> {
        self.runs[run]
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Some(role))
            .map(|(s, _)| s as SiteId)
            .collect()
    }
}

/// Stratified halving: each run shuffles the legit and the fake sites
/// separately and sends the first `count / 2` of each class to train, the
/// rest to test. Runs draw from one ChaCha8 stream, so a plan with more runs
/// extends a shorter plan with the same seed.
pub fn make_bootstrap_plan(
    site_class: &[Option<Class>],
    run_count: usize,
    rng_seed: u64,
) -> Result<BootstrapPlan> {
    let by_class = |c| {
        site_class
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == Some(c))
            .map(|(s, _)| s)
            .collect::<Vec<_>>()
    };
    let (legit, fake) = (by_class(Class::Legit), by_class(Class::Fake));
    if legit.len() < 2 || fake.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs at least 2 labeled sites per class, have {} legit and {} fake",
            legit.len(),
            fake.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let runs = (0..run_count)
        .map(|_| {
            let mut roles = vec![None; site_class.len()];
            for group in [&legit, &fake] {
                let mut order = group.clone();
                order.shuffle(&mut rng);
                let half = order.len() / 2;
                for (i, &s) in order.iter().enumerate() {
                    roles[s] = Some(if i < half { Role::Train } else { Role::Test });
                }
            }
            roles
        })
        .collect();
    Ok(BootstrapPlan { rng_seed, runs })
}
