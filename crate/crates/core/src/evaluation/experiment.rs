//! The bootstrap experiment: seed from train sites, propagate, classify and
//! score test sites only.

use std::borrow::Cow;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{level_metrics, mean_metrics};
use super::report::{EvalReport, MeanRow, PairedComparison, RunRecord, TopKCurve};
use super::stats::paired_t_test;
use super::topk::{even_ks, topk_curve};
use super::BootstrapPlan;
use crate::classify::{aggregate_sites, classify_pages, fit_points, Classifier};
use crate::error::{Error, Result};
use crate::graph::{build_site_graph, NodeId, SiteId, SiteMapping, WebGraph};
use crate::labels::{Class, Role, SeedLabels};
use crate::propagation::{
    antitrustrank, badrank, pagerank, parentpenalty, qoc_qol, trustrank, Algorithm, AtrDirection,
    PropagationParams, ScoreVector,
};
use crate::seeds::{seed_binary, seed_parentpenalty, seed_qol, Polarity, SeedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    /// Propagate over pages; report page metrics and majority-vote site
    /// metrics.
    PageGraph,
    /// Propagate over the site graph; report site metrics.
    SiteGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Site,
    Page,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    /// Candidate settings; each run keeps, per algorithm, the one with the
    /// best accuracy on the selection role.
    pub param_grid: Vec<PropagationParams>,
    pub granularity: Granularity,
    pub atr_direction: AtrDirection,
    /// Fit thresholds and pick parameters on the test role instead of the
    /// train role.
    pub paper_fidelity: bool,
    /// Number of cut-offs on each top-K curve.
    pub topk_points: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algorithms: Algorithm::ALL.to_vec(),
            param_grid: vec![PropagationParams::default()],
            granularity: Granularity::PageGraph,
            atr_direction: AtrDirection::Table1,
            paper_fidelity: false,
            topk_points: 20,
        }
    }
}

/// Labeled page graph.
#[derive(Debug, Clone, Copy)]
pub struct Dataset<'a> {
    pub graph: &'a WebGraph,
    pub sites: &'a SiteMapping,
    /// Ground truth per site.
    pub site_class: &'a [Option<Class>],
}

/// What one run fed into seeding and into the metrics, in the node space of
/// the graph that was propagated over.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunAudit {
    pub run: usize,
    /// Nodes whose labels were visible to seed construction.
    pub seed_label_nodes: BTreeSet<NodeId>,
    /// Nonzero entries of every binary seed vector built.
    pub binary_seed_nodes: BTreeSet<NodeId>,
    /// Nodes scored by node-level metrics.
    pub metric_nodes: BTreeSet<NodeId>,
    /// Sites scored by site-level metrics.
    pub metric_sites: BTreeSet<SiteId>,
}

pub fn run_experiment(
    data: Dataset<'_>,
    plan: &BootstrapPlan,
    cfg: &ExperimentConfig,
) -> Result<EvalReport> {
    Ok(run_experiment_audited(data, plan, cfg)?.0)
}

pub fn run_experiment_audited(
    data: Dataset<'_>,
    plan: &BootstrapPlan,
    cfg: &ExperimentConfig,
) -> Result<(EvalReport, Vec<RunAudit>)> {
    if data.sites.num_nodes() != data.graph.num_nodes() {
        return Err(Error::LengthMismatch(data.sites.num_nodes(), data.graph.num_nodes()));
    }
    if data.site_class.len() != data.sites.num_sites() {
        return Err(Error::LengthMismatch(data.site_class.len(), data.sites.num_sites()));
    }
    if let Some(bad) = plan.runs.iter().find(|r| r.len() != data.sites.num_sites()) {
        return Err(Error::LengthMismatch(bad.len(), data.sites.num_sites()));
    }
    if cfg.algorithms.is_empty() {
        return Ok((EvalReport::empty(cfg.granularity, plan.run_count()), Vec::new()));
    }
    if cfg.param_grid.is_empty() {
        return Err(Error::Config("empty parameter grid".into()));
    }
    for p in &cfg.param_grid {
        p.validate()?;
    }
    let mut algorithms = cfg.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();

    let (graph, sites): (Cow<'_, WebGraph>, Cow<'_, SiteMapping>) = match cfg.granularity {
        Granularity::PageGraph => (Cow::Borrowed(data.graph), Cow::Borrowed(data.sites)),
        Granularity::SiteGraph => {
            let (g, s) = build_site_graph(data.graph, data.sites)?;
            (Cow::Owned(g), Cow::Owned(s))
        }
    };
    let ctx = Context {
        graph: &graph,
        sites: &sites,
        site_class: data.site_class,
        algorithms: &algorithms,
        cfg,
    };

    // Top-K cut-offs must exist in every run.
    let unit_counts = sites.page_counts();
    let min_eval = (0..plan.run_count())
        .map(|r| {
            plan.sites_in(r, Role::Test)
                .iter()
                .map(|&s| unit_counts[s as usize])
                .sum::<usize>()
        })
        .min()
        .unwrap_or(0);
    let ks = if min_eval == 0 {
        Vec::new()
    } else {
        even_ks(min_eval, cfg.topk_points)
    };

    let outputs = (0..plan.run_count())
        .into_par_iter()
        .map(|r| ctx.run_one(r, &plan.runs[r], &ks))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    let mut audits = Vec::new();
    let mut curves: Vec<(Algorithm, Class, Vec<Vec<(usize, f64)>>)> = Vec::new();
    for out in outputs {
        records.extend(out.records);
        audits.push(out.audit);
        for (a, c, points) in out.curves {
            match curves.iter_mut().find(|(x, y, _)| *x == a && *y == c) {
                Some(entry) => entry.2.push(points),
                None => curves.push((a, c, vec![points])),
            }
        }
    }

    let levels = match cfg.granularity {
        Granularity::PageGraph => vec![Level::Site, Level::Page],
        Granularity::SiteGraph => vec![Level::Site],
    };
    let mut means = Vec::new();
    let mut comparisons = Vec::new();
    for &level in &levels {
        let series = |a: Algorithm| -> Vec<f64> {
            records
                .iter()
                .filter(|r| r.algorithm == a && r.level == level)
                .map(|r| r.metrics.accuracy)
                .collect()
        };
        for &a in &algorithms {
            let rows: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.algorithm == a && r.level == level)
                .collect();
            let metrics: Vec<_> = rows.iter().map(|r| r.metrics).collect();
            means.push(MeanRow {
                algorithm: a,
                level,
                metrics: mean_metrics(&metrics),
                runs: rows.len(),
                nonconverged_runs: rows.iter().filter(|r| !r.converged).count(),
            });
        }
        if plan.run_count() >= 2 {
            for (i, &a) in algorithms.iter().enumerate() {
                for &b in &algorithms[i + 1..] {
                    comparisons.push(PairedComparison {
                        level,
                        a: a.name().to_string(),
                        b: b.name().to_string(),
                        test: paired_t_test(&series(a), &series(b))?,
                    });
                }
            }
        }
    }

    let topk = curves
        .into_iter()
        .map(|(algorithm, class, runs)| {
            let points = (0..ks.len())
                .map(|i| {
                    let k = runs[0][i].0;
                    (k, runs.iter().map(|p| p[i].1).sum::<f64>() / runs.len() as f64)
                })
                .collect();
            TopKCurve {
                algorithm,
                class,
                points,
            }
        })
        .collect();

    Ok((
        EvalReport {
            granularity: cfg.granularity,
            runs: plan.run_count(),
            records,
            means,
            topk,
            comparisons,
        },
        audits,
    ))
}

struct Context<'a> {
    graph: &'a WebGraph,
    sites: &'a SiteMapping,
    site_class: &'a [Option<Class>],
    algorithms: &'a [Algorithm],
    cfg: &'a ExperimentConfig,
}

struct RunOutput {
    records: Vec<RunRecord>,
    curves: Vec<(Algorithm, Class, Vec<(usize, f64)>)>,
    audit: RunAudit,
}

struct Best {
    scores: ScoreVector,
    classifier: Classifier,
    params: PropagationParams,
    selection_accuracy: f64,
}

impl Context<'_> {
    fn run_one(&self, run: usize, roles: &[Option<Role>], ks: &[usize]) -> Result<RunOutput> {
        let labels = SeedLabels::from_sites(self.sites, self.site_class, roles)?;
        // Seeding only ever sees this view.
        let train_view = labels.restricted(Role::Train);
        let select_role = if self.cfg.paper_fidelity {
            Role::Test
        } else {
            Role::Train
        };
        let mut audit = RunAudit {
            run,
            seed_label_nodes: train_view.labeled().collect(),
            ..Default::default()
        };

        let wants = |a: Algorithm| self.algorithms.contains(&a);
        let needs_good = wants(Algorithm::TrustRank) || wants(Algorithm::QoC) || wants(Algorithm::QoL);
        let needs_bad = wants(Algorithm::BadRank) || wants(Algorithm::AntiTrustRank);
        let good = needs_good
            .then(|| seed_binary(&train_view, Polarity::Good))
            .transpose()?;
        let bad = needs_bad
            .then(|| seed_binary(&train_view, Polarity::Bad))
            .transpose()?;
        for s in good.iter().chain(bad.iter()) {
            audit.binary_seed_nodes.extend(s.nonzero());
        }

        let mut best: Vec<Option<Best>> = (0..self.algorithms.len()).map(|_| None).collect();
        for params in &self.cfg.param_grid {
            for (i, scores) in self.score_all(&train_view, params, good.as_ref(), bad.as_ref())? {
                let algorithm = self.algorithms[i];
                let (classifier, selection_accuracy) =
                    self.fit(algorithm, &scores, &labels, select_role)?;
                if best[i]
                    .as_ref()
                    .is_none_or(|b| selection_accuracy > b.selection_accuracy)
                {
                    best[i] = Some(Best {
                        scores,
                        classifier,
                        params: *params,
                        selection_accuracy,
                    });
                }
            }
        }

        let eval_nodes: Vec<NodeId> = labels.nodes_in(Role::Test).collect();
        let eval_actual: Vec<Class> = eval_nodes
            .iter()
            .map(|&v| labels.class(v).expect("test nodes are labeled"))
            .collect();
        let test_sites: Vec<SiteId> = roles
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Some(Role::Test))
            .map(|(s, _)| s as SiteId)
            .collect();
        let site_actual: Vec<Class> = test_sites
            .iter()
            .map(|&s| self.site_class[s as usize].expect("test sites are labeled"))
            .collect();

        let mut records = Vec::new();
        let mut curves = Vec::new();
        for (i, b) in best.into_iter().enumerate() {
            let b = b.expect("grid is nonempty");
            let algorithm = self.algorithms[i];
            let page_labels = classify_pages(&b.scores, &b.classifier);
            let predicted: Vec<Class> = eval_nodes.iter().map(|&v| page_labels[v as usize]).collect();
            let record = |level, metrics| RunRecord {
                run,
                algorithm,
                level,
                metrics,
                params: b.params,
                threshold: b.classifier.threshold,
                converged: b.scores.converged,
                iterations: b.scores.iterations,
            };
            match self.cfg.granularity {
                Granularity::PageGraph => {
                    let verdicts = aggregate_sites(&page_labels, self.sites, &test_sites)?;
                    records.push(record(Level::Site, level_metrics(&verdicts.labels, &site_actual)?));
                    records.push(record(Level::Page, level_metrics(&predicted, &eval_actual)?));
                    audit.metric_sites.extend(&verdicts.sites);
                }
                Granularity::SiteGraph => {
                    records.push(record(Level::Site, level_metrics(&predicted, &eval_actual)?));
                    // Site graph nodes are site ids.
                    audit.metric_sites.extend(&eval_nodes);
                }
            }
            audit.metric_nodes.extend(&eval_nodes);
            if !ks.is_empty() {
                for class in [Class::Legit, Class::Fake] {
                    curves.push((
                        algorithm,
                        class,
                        topk_curve(&b.scores, &eval_nodes, &eval_actual, ks, class)?,
                    ));
                }
            }
        }
        Ok(RunOutput {
            records,
            curves,
            audit,
        })
    }

    /// Scores for every requested algorithm (by index into `algorithms`).
    fn score_all(
        &self,
        train: &SeedLabels,
        params: &PropagationParams,
        good: Option<&SeedVector>,
        bad: Option<&SeedVector>,
    ) -> Result<Vec<(usize, ScoreVector)>> {
        let g = self.graph;
        let mut dual: Option<(ScoreVector, ScoreVector)> = None;
        let mut out = Vec::with_capacity(self.algorithms.len());
        for (i, &a) in self.algorithms.iter().enumerate() {
            let scores = match a {
                Algorithm::PageRank => pagerank(g, params)?,
                Algorithm::TrustRank => trustrank(g, good.expect("good seeds"), params)?,
                Algorithm::AntiTrustRank => {
                    antitrustrank(g, bad.expect("bad seeds"), params, self.cfg.atr_direction)?
                }
                Algorithm::BadRank => badrank(g, bad.expect("bad seeds"), params)?,
                Algorithm::ParentPenalty => {
                    parentpenalty(g, &seed_parentpenalty(g, self.sites, params.t)?, params)?
                }
                Algorithm::QoC | Algorithm::QoL => {
                    if dual.is_none() {
                        let el = seed_qol(g, train, params.k)?;
                        dual = Some(qoc_qol(g, good.expect("good seeds"), &el, params)?);
                    }
                    let (qoc, qol) = dual.as_ref().unwrap();
                    if a == Algorithm::QoC {
                        qoc.clone()
                    } else {
                        qol.clone()
                    }
                }
            };
            out.push((i, scores));
        }
        Ok(out)
    }

    fn fit(
        &self,
        algorithm: Algorithm,
        scores: &ScoreVector,
        labels: &SeedLabels,
        role: Role,
    ) -> Result<(Classifier, f64)> {
        let mut points: Vec<(f64, Class)> = labels
            .nodes_in(role)
            .map(|v| (scores.goodness(v), labels.class(v).expect("role implies class")))
            .collect();
        if algorithm == Algorithm::ParentPenalty {
            let c = Classifier::flags();
            let correct = points
                .iter()
                .filter(|&&(x, class)| (x > c.threshold) == (class == Class::Legit))
                .count();
            let acc = correct as f64 / points.len().max(1) as f64;
            return Ok((c, acc));
        }
        let c = fit_points(&mut points)?;
        Ok((c, c.fit_accuracy))
    }
}

/// Paired t-tests across two experiments that share a bootstrap plan, one
/// per algorithm present in both, on the accuracy at the given levels.
pub fn compare_experiments(
    a: &EvalReport,
    level_a: Level,
    b: &EvalReport,
    level_b: Level,
) -> Result<Vec<PairedComparison>> {
    let series = |r: &EvalReport, level, alg| -> Vec<f64> {
        let mut rows: Vec<&RunRecord> = r
            .records
            .iter()
            .filter(|x| x.level == level && x.algorithm == alg)
            .collect();
        rows.sort_by_key(|x| x.run);
        rows.iter().map(|x| x.metrics.accuracy).collect()
    };
    let mut out = Vec::new();
    for alg in Algorithm::ALL {
        let (xa, xb) = (series(a, level_a, alg), series(b, level_b, alg));
        if xa.is_empty() || xb.is_empty() {
            continue;
        }
        out.push(PairedComparison {
            level: level_a,
            a: format!("{alg}@{:?}", a.granularity),
            b: format!("{alg}@{:?}", b.granularity),
            test: paired_t_test(&xa, &xb)?,
        });
    }
    Ok(out)
}
