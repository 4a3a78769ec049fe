//! Labeled synthetic webs with store-like structure.
//!
//! Sites are laid out contiguously: legit sites first, then fake ones, each
//! site's pages numbered consecutively from its home page. Every site gets a
//! navigation skeleton (page `j` links to `j + 1`, and every non-home page
//! links back to the home page) plus independent random internal links. Links
//! between pages of different sites are independent Bernoulli draws whose
//! probability depends on the (source class, target class) pair:
//!
//! | source -> target | probability                 |
//! |------------------|-----------------------------|
//! | legit -> legit   | `legit_to_legit_inter_prob` |
//! | fake -> fake     | `farm_density`              |
//! | fake -> legit    | `camouflage_prob`           |
//! | legit -> fake    | `contamination_prob`        |
//!
//! Bernoulli blocks are sampled by geometric skipping, so generation costs
//! O(pages + edges) rather than O(pairs).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SiteId, SiteMapping, WebGraph};
use crate::labels::Class;

/// Page-count model, recorded in generated metadata.
pub const PAGE_COUNT_MODEL: &str = "floor(mean/2) + geometric(mean - floor(mean/2)), min 1, max 4*mean";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub legit_site_count: usize,
    pub fake_site_count: usize,
    /// Mean pages per legit site.
    pub pages_per_legit_site: f64,
    /// Fake sites' mean size relative to legit ones.
    pub fake_size_multiplier: f64,
    pub intra_site_link_prob: f64,
    pub legit_to_legit_inter_prob: f64,
    pub farm_density: f64,
    pub camouflage_prob: f64,
    pub contamination_prob: f64,
    pub rng_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            legit_site_count: 100,
            fake_site_count: 100,
            pages_per_legit_site: 10.0,
            fake_size_multiplier: 2.0,
            intra_site_link_prob: 0.2,
            legit_to_legit_inter_prob: 0.008,
            farm_density: 0.003,
            camouflage_prob: 0.001,
            contamination_prob: 0.001,
            rng_seed: 1,
        }
    }
}

impl SynthConfig {
    /// Every invalid field, one message each.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, p) in [
            ("intra_site_link_prob", self.intra_site_link_prob),
            ("legit_to_legit_inter_prob", self.legit_to_legit_inter_prob),
            ("farm_density", self.farm_density),
            ("camouflage_prob", self.camouflage_prob),
            ("contamination_prob", self.contamination_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                out.push(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.legit_site_count == 0 {
            out.push("legit_site_count must be >= 1".into());
        }
        if self.fake_site_count == 0 {
            out.push("fake_site_count must be >= 1".into());
        }
        if !(self.pages_per_legit_site >= 1.0 && self.pages_per_legit_site.is_finite()) {
            out.push(format!(
                "pages_per_legit_site must be >= 1, got {}",
                self.pages_per_legit_site
            ));
        }
        if !(self.fake_size_multiplier > 0.0 && self.fake_size_multiplier.is_finite()) {
            out.push(format!(
                "fake_size_multiplier must be > 0, got {}",
                self.fake_size_multiplier
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthWeb {
    pub graph: WebGraph,
    pub sites: SiteMapping,
    /// Ground truth per site.
    pub site_class: Vec<Option<Class>>,
    /// First page of each site, plus a final entry equal to the page count.
    pub site_offsets: Vec<usize>,
}

pub fn site_name(class: Class, index: usize) -> String {
    match class {
        Class::Legit => format!("legit{index:05}.example"),
        Class::Fake => format!("fake{index:05}.example"),
    }
}

fn sample_pages(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    let mean = mean.max(1.0);
    let base = (mean / 2.0).floor().max(1.0);
    let extra_mean = (mean - base).max(0.0);
    let extra = if extra_mean > 0.0 {
        let q = 1.0 / (1.0 + extra_mean);
        let u: f64 = 1.0 - rng.random::<f64>();
        (u.ln() / (1.0 - q).ln()).floor()
    } else {
        0.0
    };
    ((base + extra) as usize).clamp(1, (4.0 * mean).ceil() as usize)
}

/// Calls `hit(i)` for each index in `0..len` independently with probability
/// `p`, in increasing order.
fn bernoulli_indices(rng: &mut ChaCha8Rng, len: u64, p: f64, mut hit: impl FnMut(u64)) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(hit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (len - i) as f64 {
            return;
        }
        i += skip as u64;
        hit(i);
        i += 1;
        if i >= len {
            return;
        }
    }
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthWeb> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let site_count = cfg.legit_site_count + cfg.fake_site_count;

    let mut site_class = Vec::with_capacity(site_count);
    let mut names = Vec::with_capacity(site_count);
    let mut offsets = vec![0usize];
    for s in 0..site_count {
        let (class, index, mean) = if s < cfg.legit_site_count {
            (Class::Legit, s, cfg.pages_per_legit_site)
        } else {
            (
                Class::Fake,
                s - cfg.legit_site_count,
                cfg.pages_per_legit_site * cfg.fake_size_multiplier,
            )
        };
        let pages = sample_pages(&mut rng, mean);
        offsets.push(offsets[s] + pages);
        site_class.push(Some(class));
        names.push(site_name(class, index));
    }
    let n = offsets[site_count];
    if n == 0 {
        return Err(Error::Config("configuration yields no pages".into()));
    }
    crate::graph::check_node_count(n)?;

    let mut site_of = vec![0 as SiteId; n];
    for s in 0..site_count {
        site_of[offsets[s]..offsets[s + 1]].fill(s as SiteId);
    }

    let pack = |u: usize, v: usize| ((u as u64) << 32) | v as u64;
    let mut packed = Vec::new();
    for s in 0..site_count {
        let (lo, hi) = (offsets[s], offsets[s + 1]);
        let size = hi - lo;
        for j in lo..hi.saturating_sub(1) {
            packed.push(pack(j, j + 1));
        }
        for j in lo + 1..hi {
            packed.push(pack(j, lo));
        }
        bernoulli_indices(&mut rng, (size * size) as u64, cfg.intra_site_link_prob, |i| {
            let (a, b) = ((i / size as u64) as usize, (i % size as u64) as usize);
            if a != b {
                packed.push(pack(lo + a, lo + b));
            }
        });
    }

    let legit_pages = 0..offsets[cfg.legit_site_count];
    let fake_pages = offsets[cfg.legit_site_count]..n;
    for (src, dst, p) in [
        (&legit_pages, &legit_pages, cfg.legit_to_legit_inter_prob),
        (&legit_pages, &fake_pages, cfg.contamination_prob),
        (&fake_pages, &legit_pages, cfg.camouflage_prob),
        (&fake_pages, &fake_pages, cfg.farm_density),
    ] {
        let width = dst.len() as u64;
        bernoulli_indices(&mut rng, src.len() as u64 * width, p, |i| {
            let u = src.start + (i / width) as usize;
            let v = dst.start + (i % width) as usize;
            if site_of[u] != site_of[v] {
                packed.push(pack(u, v));
            }
        });
    }

    Ok(SynthWeb {
        graph: WebGraph::from_packed(n, packed),
        sites: SiteMapping::new(site_of, names)?,
        site_class,
        site_offsets: offsets,
    })
}

impl SynthWeb {
    /// Whether `u -> v` belongs to the navigation skeleton of a site.
    pub fn is_skeleton_pair(&self, u: NodeId, v: NodeId) -> bool {
        let s = self.sites.site_of(u);
        if s != self.sites.site_of(v) {
            return false;
        }
        let home = self.site_offsets[s as usize] as NodeId;
        (v == u + 1) || (v == home && u != home)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_web() {
        let cfg = SynthConfig {
            legit_site_count: 5,
            fake_site_count: 5,
            ..Default::default()
        };
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = SynthConfig { rng_seed: 2, ..cfg.clone() };
        assert_ne!(generate(&cfg).unwrap().graph, generate(&other).unwrap().graph);
    }

    #[test]
    fn fake_sites_are_larger() {
        let cfg = SynthConfig {
            legit_site_count: 1,
            fake_site_count: 1,
            pages_per_legit_site: 10.0,
            fake_size_multiplier: 2.0,
            ..Default::default()
        };
        let web = generate(&cfg).unwrap();
        let counts = web.sites.page_counts();
        assert!((1..=40).contains(&counts[0]), "{counts:?}");
        assert!((1..=80).contains(&counts[1]), "{counts:?}");
        assert_eq!(web.site_class, vec![Some(Class::Legit), Some(Class::Fake)]);
    }

    #[test]
    fn invalid_fields_named() {
        let cfg = SynthConfig {
            farm_density: 1.5,
            legit_site_count: 0,
            ..Default::default()
        };
        let p = cfg.problems();
        assert_eq!(p.len(), 2);
        assert!(p[0].contains("farm_density"));
        assert!(p[1].contains("legit_site_count"));
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut hits = Vec::new();
        bernoulli_indices(&mut rng, 5, 1.0, |i| hits.push(i));
        assert_eq!(hits, vec![0, 1, 2, 3, 4]);
        hits.clear();
        bernoulli_indices(&mut rng, 5, 0.0, |i| hits.push(i));
        assert!(hits.is_empty());
    }
}
