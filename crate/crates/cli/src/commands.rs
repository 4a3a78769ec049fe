use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use linkspam::bundle::GraphBundle;
use linkspam::classify::{aggregate_sites, classify_pages, fit_threshold, Classifier};
use linkspam::evaluation::{
    compare_experiments, even_ks, make_bootstrap_plan, run_experiment, topk_curve, Dataset,
    EvalReport, ExperimentConfig, Granularity, Level,
};
use linkspam::ingest::{ingest_edge_list, read_labels, IdMode};
use linkspam::io::{save_scores, write_edge_file, write_label_file, write_site_file, write_verdicts};
use linkspam::propagation::{score, score_qoc_qol, Algorithm, AtrDirection, ScoreVector};
use linkspam::synth::{generate, SynthConfig, PAGE_COUNT_MODEL};
use linkspam::{build_site_graph, Class, NodeId, Role, SeedLabels, SiteId, SiteMapping, WebGraph};

use crate::manifest::{sidecar, RunManifest};
use crate::{
    AtrArg, ClassArg, Command, EvalGranularityArg, EvaluateArgs, GenerateArgs, GranularityArg,
    IngestArgs, RunArgs, TopkArgs,
};

pub fn dispatch(command: Command, threads: Option<usize>) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a, threads),
        Command::Run(a) => run(a, threads),
        Command::Evaluate(a) => evaluate(a, threads),
        Command::Topk(a) => topk(a, threads),
        Command::Generate(a) => generate_cmd(a, threads),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn load_bundle(path: &Path) -> Result<GraphBundle> {
    GraphBundle::load(path).with_context(|| format!("loading graph bundle {}", path.display()))
}

fn atr(a: AtrArg) -> AtrDirection {
    match a {
        AtrArg::Table1 => AtrDirection::Table1,
        AtrArg::Reversed => AtrDirection::Reversed,
    }
}

fn ingest(a: IngestArgs, threads: Option<usize>) -> Result<()> {
    let mut manifest = RunManifest::new("ingest");
    manifest.threads = threads;
    let mode = if a.url { IdMode::Url } else { IdMode::Integer };
    let (graph, sites) = ingest_edge_list(&a.edges, mode, a.sites.as_deref())?;
    let site_class = a
        .labels
        .as_deref()
        .map(|p| read_labels(p, &sites))
        .transpose()?;
    manifest.inputs = [Some(a.edges), a.sites, a.labels].into_iter().flatten().collect();
    let bundle = GraphBundle {
        graph,
        sites,
        site_class,
    };
    bundle.save(&a.out)?;
    println!("nodes {}", bundle.graph.num_nodes());
    println!("edges {}", bundle.graph.num_edges());
    println!("sites {}", bundle.sites.num_sites());
    manifest.params = serde_json::json!({ "id_mode": if a.url { "url" } else { "integer" } });
    manifest.outputs = vec![a.out.clone()];
    manifest.write(&sidecar(&a.out))
}

/// Graph to propagate over, with its site mapping.
fn working_graph(bundle: &GraphBundle, granularity: GranularityArg) -> Result<(WebGraph, SiteMapping)> {
    Ok(match granularity {
        GranularityArg::Page => (bundle.graph.clone(), bundle.sites.clone()),
        GranularityArg::Site => build_site_graph(&bundle.graph, &bundle.sites)?,
    })
}

/// Every labeled site as training data.
fn all_train_labels(sites: &SiteMapping, site_class: Option<&[Option<Class>]>) -> Result<SeedLabels> {
    let unlabeled = vec![None; sites.num_sites()];
    let class = site_class.unwrap_or(&unlabeled);
    let roles: Vec<Option<Role>> = class.iter().map(|c| c.map(|_| Role::Train)).collect();
    Ok(SeedLabels::from_sites(sites, class, &roles)?)
}

fn parse_run_algorithm(name: &str) -> Result<Vec<Algorithm>> {
    match name.to_ascii_lowercase().as_str() {
        "qocqol" => Ok(vec![Algorithm::QoC, Algorithm::QoL]),
        "qoc" | "qol" => bail!("QoC and QoL are computed together; use `qocqol`"),
        _ => Ok(vec![name.parse::<Algorithm>()?]),
    }
}

fn run(a: RunArgs, threads: Option<usize>) -> Result<()> {
    let mut manifest = RunManifest::new("run");
    manifest.threads = threads;
    let grid = a.params.grid();
    let [params] = grid.as_slice() else {
        bail!("run takes a single value per parameter, got a grid of {}", grid.len());
    };
    params.validate()?;
    let algorithms = parse_run_algorithm(&a.algorithm)?;
    let bundle = load_bundle(&a.graph)?;
    let (graph, sites) = working_graph(&bundle, a.granularity)?;
    let labels = all_train_labels(&sites, bundle.site_class.as_deref())?;
    let seeded = algorithms
        .iter()
        .any(|&x| !matches!(x, Algorithm::PageRank | Algorithm::ParentPenalty));
    if seeded && bundle.site_class.is_none() {
        bail!(
            "{} needs seed labels but {} carries none (ingest with --labels)",
            a.algorithm,
            a.graph.display()
        );
    }
    if a.verdicts && bundle.site_class.is_none() && algorithms != [Algorithm::ParentPenalty] {
        bail!("--verdicts needs labels to fit a threshold, and {} carries none", a.graph.display());
    }

    let results: Vec<(Algorithm, ScoreVector)> = if algorithms.len() == 2 {
        let (qoc, qol) = score_qoc_qol(&graph, &labels, params)?;
        vec![(Algorithm::QoC, qoc), (Algorithm::QoL, qol)]
    } else {
        let alg = algorithms[0];
        vec![(alg, score(alg, &graph, &sites, &labels, params, atr(a.atr_direction))?)]
    };

    create_dir(&a.out)?;
    for (alg, scores) in &results {
        let path = a.out.join(format!("{}.scores.tsv", alg.name()));
        save_scores(&path, *alg, scores, params)?;
        if !scores.converged {
            eprintln!(
                "warning: {} did not converge within {} iterations",
                alg.name(),
                params.max_iters
            );
        }
        manifest.outputs.push(path);
        if a.verdicts {
            let classifier = if *alg == Algorithm::ParentPenalty {
                Classifier::flags()
            } else {
                fit_threshold(scores, &labels, Role::Train)?
            };
            let page_labels = classify_pages(scores, &classifier);
            let all_sites: Vec<SiteId> = (0..sites.num_sites() as SiteId).collect();
            let verdicts = aggregate_sites(&page_labels, &sites, &all_sites)?;
            let path = a.out.join(format!("{}.verdicts.tsv", alg.name()));
            let mut w = BufWriter::new(
                fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?,
            );
            write_verdicts(&mut w, &sites, &verdicts)?;
            w.flush()?;
            manifest.outputs.push(path);
        }
    }
    manifest.inputs = vec![a.graph];
    manifest.algorithm = Some(a.algorithm);
    manifest.params = serde_json::json!({
        "propagation": params,
        "granularity": format!("{:?}", a.granularity).to_lowercase(),
        "atr_direction": atr(a.atr_direction),
        "verdicts": a.verdicts,
    });
    manifest.write(&a.out.join("manifest.json"))
}

fn parse_eval_algorithms(names: &[String]) -> Result<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in names {
        match name.to_ascii_lowercase().as_str() {
            "all" => out.extend(Algorithm::ALL),
            "qocqol" => out.extend([Algorithm::QoC, Algorithm::QoL]),
            _ => out.push(name.parse::<Algorithm>()?),
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn granularity_dir(g: Granularity) -> &'static str {
    match g {
        Granularity::PageGraph => "page_graph",
        Granularity::SiteGraph => "site_graph",
    }
}

fn write_report(dir: &Path, report: &EvalReport) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut outputs = Vec::new();
    let records = dir.join("records.jsonl");
    let mut buf = Vec::new();
    report.write_records_jsonl(&mut buf)?;
    write_file(&records, buf)?;
    outputs.push(records);
    let table = dir.join("table.txt");
    write_file(&table, report.table())?;
    outputs.push(table);
    if !report.topk.is_empty() {
        let topk_dir = dir.join("topk");
        create_dir(&topk_dir)?;
        for curve in &report.topk {
            let path = topk_dir.join(format!("{}_{}.csv", curve.algorithm.name(), curve.class.as_str()));
            write_file(&path, curve.to_csv())?;
            outputs.push(path);
        }
    }
    Ok(outputs)
}

fn evaluate(a: EvaluateArgs, threads: Option<usize>) -> Result<()> {
    let mut manifest = RunManifest::new("evaluate");
    manifest.threads = threads;
    let algorithms = parse_eval_algorithms(&a.algorithm)?;
    let grid = a.params.grid();
    for p in &grid {
        p.validate()?;
    }
    if a.runs == 0 {
        bail!("--runs must be >= 1");
    }
    let bundle = load_bundle(&a.graph)?;
    let site_class = bundle.site_class.as_deref().ok_or_else(|| {
        anyhow!("{} carries no labels (ingest with --labels)", a.graph.display())
    })?;
    let plan = make_bootstrap_plan(site_class, a.runs, a.seed)?;
    let data = Dataset {
        graph: &bundle.graph,
        sites: &bundle.sites,
        site_class,
    };
    let granularities = match a.granularity {
        EvalGranularityArg::Page => vec![Granularity::PageGraph],
        EvalGranularityArg::Site => vec![Granularity::SiteGraph],
        EvalGranularityArg::Both => vec![Granularity::PageGraph, Granularity::SiteGraph],
    };
    create_dir(&a.out)?;
    let mut reports = Vec::new();
    for granularity in granularities {
        let cfg = ExperimentConfig {
            algorithms: algorithms.clone(),
            param_grid: grid.clone(),
            granularity,
            atr_direction: atr(a.atr_direction),
            paper_fidelity: a.paper_fidelity,
            topk_points: a.topk_points,
        };
        let report = run_experiment(data, &plan, &cfg)?;
        print!("{}", report.table());
        manifest
            .outputs
            .extend(write_report(&a.out.join(granularity_dir(granularity)), &report)?);
        reports.push(report);
    }
    if let [page, site] = reports.as_slice() {
        if a.runs >= 2 {
            let comparisons = compare_experiments(site, Level::Site, page, Level::Site)?;
            let path = a.out.join("granularity_comparison.json");
            write_file(&path, serde_json::to_string_pretty(&comparisons)? + "\n")?;
            manifest.outputs.push(path);
        }
    }
    manifest.inputs = vec![a.graph];
    manifest.algorithm = Some(a.algorithm.join(","));
    manifest.rng_seed = Some(a.seed);
    manifest.params = serde_json::json!({
        "param_grid": grid,
        "runs": a.runs,
        "granularity": format!("{:?}", a.granularity).to_lowercase(),
        "paper_fidelity": a.paper_fidelity,
        "atr_direction": atr(a.atr_direction),
        "topk_points": a.topk_points,
    });
    manifest.write(&a.out.join("manifest.json"))
}

fn topk(a: TopkArgs, threads: Option<usize>) -> Result<()> {
    let mut manifest = RunManifest::new("topk");
    manifest.threads = threads;
    let bundle = load_bundle(&a.graph)?;
    let site_class = bundle.site_class.as_deref().ok_or_else(|| {
        anyhow!("{} carries no labels (ingest with --labels)", a.graph.display())
    })?;
    let scores = linkspam::io::read_score_file(&a.scores)?;
    let n = bundle.graph.num_nodes();
    let site_count = bundle.sites.num_sites();
    let (nodes, actual): (Vec<NodeId>, Vec<Class>) = if scores.len() == n {
        (0..n as NodeId)
            .filter_map(|v| site_class[bundle.sites.site_of(v) as usize].map(|c| (v, c)))
            .unzip()
    } else if scores.len() == site_count {
        (0..site_count as NodeId)
            .filter_map(|s| site_class[s as usize].map(|c| (s, c)))
            .unzip()
    } else {
        bail!(
            "{} has {} scores; expected {n} pages or {site_count} sites",
            a.scores.display(),
            scores.len()
        );
    };
    if nodes.is_empty() {
        bail!("no labeled nodes to rank");
    }
    let ks = if a.k.is_empty() {
        even_ks(nodes.len(), a.points)
    } else {
        a.k.clone()
    };
    let class = match a.class {
        ClassArg::Good => Class::Legit,
        ClassArg::Bad => Class::Fake,
    };
    let points = topk_curve(&scores, &nodes, &actual, &ks, class)?;
    let mut csv = String::from("k,accuracy\n");
    for (k, acc) in points {
        csv.push_str(&format!("{k},{acc}\n"));
    }
    write_file(&a.out, csv)?;
    manifest.inputs = vec![a.graph, a.scores];
    manifest.params = serde_json::json!({ "class": class, "k": ks });
    manifest.outputs = vec![a.out.clone()];
    manifest.write(&sidecar(&a.out))
}

/// Config file first, then flags on top.
pub fn synth_config(a: &GenerateArgs) -> Result<SynthConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SynthConfig::default(),
    };
    macro_rules! apply {
        ($($field:ident),*) => {$(
            if let Some(v) = a.$field {
                cfg.$field = v;
            }
        )*};
    }
    apply!(
        legit_site_count,
        fake_site_count,
        pages_per_legit_site,
        fake_size_multiplier,
        intra_site_link_prob,
        legit_to_legit_inter_prob,
        farm_density,
        camouflage_prob,
        contamination_prob
    );
    if let Some(seed) = a.seed {
        cfg.rng_seed = seed;
    }
    let problems = cfg.problems();
    if !problems.is_empty() {
        bail!("invalid generator configuration:\n  {}", problems.join("\n  "));
    }
    Ok(cfg)
}

fn generate_cmd(a: GenerateArgs, threads: Option<usize>) -> Result<()> {
    let mut manifest = RunManifest::new("generate");
    manifest.threads = threads;
    let cfg = synth_config(&a)?;
    let web = generate(&cfg)?;
    create_dir(&a.out)?;
    let edges = a.out.join("edges.tsv");
    let sites = a.out.join("sites.tsv");
    let labels = a.out.join("labels.tsv");
    let header = vec![
        "synthetic web".to_string(),
        format!("config {}", serde_json::to_string(&cfg)?),
        format!("page_count_model {PAGE_COUNT_MODEL}"),
        "navigation skeleton: page j -> j+1 and every non-home page -> home, per site".to_string(),
        "generator constants beyond the config fields are implementation choices".to_string(),
        format!("nodes {} edges {} sites {}", web.graph.num_nodes(), web.graph.num_edges(), web.sites.num_sites()),
    ];
    write_edge_file(&edges, &web.graph, &header)?;
    write_site_file(&sites, &web.sites)?;
    write_label_file(&labels, &web.sites, &web.site_class)?;
    manifest.outputs = vec![edges, sites, labels];
    if a.bundle {
        let path = a.out.join("graph.lspb");
        GraphBundle {
            graph: web.graph.clone(),
            sites: web.sites.clone(),
            site_class: Some(web.site_class.clone()),
        }
        .save(&path)?;
        manifest.outputs.push(path);
    }
    println!("nodes {}", web.graph.num_nodes());
    println!("edges {}", web.graph.num_edges());
    println!("sites {}", web.sites.num_sites());
    manifest.inputs = a.config.clone().into_iter().collect();
    manifest.rng_seed = Some(cfg.rng_seed);
    manifest.params = serde_json::to_value(&cfg)?;
    manifest.write(&a.out.join("manifest.json"))
}
