//! Link-based detection of fake websites.
//!
//! The crate stores web graphs in CSR form, runs seven link-propagation
//! scoring algorithms over them, turns scores into page and site verdicts,
//! and evaluates the whole pipeline with stratified bootstrap splits.

pub mod bundle;
pub mod classify;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod labels;
pub mod propagation;
pub mod seeds;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{build_site_graph, Direction, NodeId, SiteId, SiteMapping, WebGraph};
pub use labels::{Class, Role, SeedLabels};
