//! Bootstrap evaluation: stratified splits, classification metrics, top-K
//! curves and paired significance tests.

mod bootstrap;
mod experiment;
mod metrics;
mod report;
mod stats;
mod topk;

pub use bootstrap::{make_bootstrap_plan, BootstrapPlan};
pub use experiment::{
    compare_experiments, run_experiment, run_experiment_audited, Dataset, ExperimentConfig,
    Granularity, Level, RunAudit,
};
pub use metrics::{
    confusion_metrics, f_measure, level_metrics, mean_metrics, ClassMetrics, Confusion,
    LevelMetrics,
};
pub use report::{EvalReport, MeanRow, PairedComparison, RunRecord, TopKCurve};
pub use stats::{paired_t_test, PairedTTest};
pub use topk::{even_ks, rank_nodes, topk_accuracy, topk_curve};
