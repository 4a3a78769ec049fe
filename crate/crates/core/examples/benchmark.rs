//! Runs the default synthetic benchmark at both granularities and prints the
//! result tables.
//!
//! cargo run --release -p linkspam --example benchmark [runs] [seed]

use linkspam::evaluation::{make_bootstrap_plan, run_experiment, Dataset, ExperimentConfig, Granularity};
use linkspam::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let runs = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let web = generate(&SynthConfig::default())?;
    println!(
        "pages {}  links {}  sites {}",
        web.graph.num_nodes(),
        web.graph.num_edges(),
        web.sites.num_sites()
    );
    let plan = make_bootstrap_plan(&web.site_class, runs, seed)?;
    let data = Dataset {
        graph: &web.graph,
        sites: &web.sites,
        site_class: &web.site_class,
    };
    for granularity in [Granularity::PageGraph, Granularity::SiteGraph] {
        let cfg = ExperimentConfig {
            granularity,
            ..Default::default()
        };
        let report = run_experiment(data, &plan, &cfg)?;
        print!("{}", report.table());
    }
    Ok(())
}
