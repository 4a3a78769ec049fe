//! Text ingestion: edge lists, site files and label files.
//!
//! All three formats are UTF-8, one tab-separated record per line. Blank
//! lines and lines starting with `#` are skipped.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use url::Url;

use crate::error::{Error, Result};
use crate::graph::{check_node_count, NodeId, SiteId, SiteMapping, WebGraph};
use crate::labels::Class;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdMode {
    /// Fields are dense node indices; sites come from a companion site file.
    Integer,
    /// Fields are absolute URLs; sites are their hostnames.
    Url,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(|f| BufReader::with_capacity(1 << 20, f))
        .map_err(|e| Error::io(path, e))
}

/// Iterates `(line_number, record)` over the data lines of a reader.
fn for_each_record<R: BufRead>(
    mut reader: R,
    path: &Path,
    mut f: impl FnMut(usize, &str) -> Result<()>,
) -> Result<()> {
    let mut buf = String::new();
    let mut line = 0;
    loop {
        buf.clear();
        let read = reader.read_line(&mut buf).map_err(|e| Error::io(path, e))?;
        if read == 0 {
            return Ok(());
        }
        line += 1;
        let rec = buf.trim_end_matches(['\n', '\r']);
        if rec.trim().is_empty() || rec.starts_with('#') {
            continue;
        }
        f(line, rec)?;
    }
}

fn split_pair<'a>(rec: &'a str, path: &Path, line: usize) -> Result<(&'a str, &'a str)> {
    let (a, b) = rec
        .split_once('\t')
        .ok_or_else(|| Error::parse(path, line, "expected two tab-separated fields"))?;
    if b.contains('\t') {
        return Err(Error::parse(path, line, "expected exactly two fields"));
    }
    Ok((a.trim(), b.trim()))
}

fn parse_id(field: &str, path: &Path, line: usize) -> Result<NodeId> {
    field
        .parse::<NodeId>()
        .map_err(|_| Error::parse(path, line, format!("invalid node id `{field}`")))
}

/// Site identity of a URL: lowercase hostname without a leading `www.`.
pub fn site_of_url(url: &str) -> Option<String> {
    let parsed = Url::parse(url).ok()?;
    let host = parsed.host_str()?.to_ascii_lowercase();
    let host = host.strip_prefix("www.").unwrap_or(&host);
    (!host.is_empty()).then(|| host.to_string())
}

/// Reads an edge list. Integer mode needs `site_file`; url mode ignores it.
pub fn ingest_edge_list(
    edge_file: &Path,
    mode: IdMode,
    site_file: Option<&Path>,
) -> Result<(WebGraph, SiteMapping)> {
    match mode {
        IdMode::Integer => {
            let site_file = site_file.ok_or_else(|| {
                Error::Config("integer id mode requires a site file".into())
            })?;
            let (n_edges, packed) = read_integer_edges(open(edge_file)?, edge_file)?;
            let sites = read_site_file(open(site_file)?, site_file, n_edges)?;
            let n = sites.num_nodes();
            Ok((WebGraph::from_packed(n, packed), sites))
        }
        IdMode::Url => read_url_edges(open(edge_file)?, edge_file),
    }
}

/// Returns `1 + max id` and the packed, self-loop-free edges.
pub(crate) fn read_integer_edges<R: BufRead>(reader: R, path: &Path) -> Result<(usize, Vec<u64>)> {
    let mut packed = Vec::new();
    let mut n = 0usize;
    for_each_record(reader, path, |line, rec| {
        let (a, b) = split_pair(rec, path, line)?;
        let (u, v) = (parse_id(a, path, line)?, parse_id(b, path, line)?);
        if u == NodeId::MAX || v == NodeId::MAX {
            return Err(Error::TooManyNodes);
        }
        n = n.max(u as usize + 1).max(v as usize + 1);
        if u != v {
            packed.push(((u as u64) << 32) | v as u64);
        }
        Ok(())
    })?;
    Ok((n, packed))
}

/// Site file for integer mode. Every node in `0..max(min_nodes, 1 + max id)`
/// must be assigned exactly one site.
pub(crate) fn read_site_file<R: BufRead>(
    reader: R,
    path: &Path,
    min_nodes: usize,
) -> Result<SiteMapping> {
    let mut assigned: Vec<Option<SiteId>> = vec![None; min_nodes];
    let mut names: Vec<String> = Vec::new();
    let mut by_name: HashMap<String, SiteId> = HashMap::new();
    for_each_record(reader, path, |line, rec| {
        let (a, name) = split_pair(rec, path, line)?;
        let v = parse_id(a, path, line)? as usize;
        if name.is_empty() {
            return Err(Error::parse(path, line, "empty site name"));
        }
        let next = names.len() as SiteId;
        let s = *by_name.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            next
        });
        if v >= assigned.len() {
            assigned.resize(v + 1, None);
        }
        match assigned[v] {
            Some(prev) if prev != s => Err(Error::parse(
                path,
                line,
                format!("node {v} assigned to two sites"),
            )),
            _ => {
                assigned[v] = Some(s);
                Ok(())
            }
        }
    })?;
    check_node_count(assigned.len())?;
    let site_of = assigned
        .iter()
        .enumerate()
        .map(|(v, s)| {
            s.ok_or_else(|| Error::Config(format!("node {v} missing from {}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    SiteMapping::new(site_of, names)
}

pub(crate) fn read_url_edges<R: BufRead>(reader: R, path: &Path) -> Result<(WebGraph, SiteMapping)> {
    let mut node_ids: HashMap<String, NodeId> = HashMap::new();
    let mut site_ids: HashMap<String, SiteId> = HashMap::new();
    let mut site_of: Vec<SiteId> = Vec::new();
    let mut site_names: Vec<String> = Vec::new();
    let mut packed = Vec::new();

    for_each_record(reader, path, |line, rec| {
        let (a, b) = split_pair(rec, path, line)?;
        let mut ids = [0 as NodeId; 2];
        for (slot, url) in ids.iter_mut().zip([a, b]) {
            if let Some(&id) = node_ids.get(url) {
                *slot = id;
                continue;
            }
            let host = site_of_url(url)
                .ok_or_else(|| Error::parse(path, line, format!("not an absolute URL: `{url}`")))?;
            let next_site = site_names.len() as SiteId;
            let site = *site_ids.entry(host.clone()).or_insert_with(|| {
                site_names.push(host);
                next_site
            });
            let id = site_of.len();
            if id >= NodeId::MAX as usize {
                return Err(Error::TooManyNodes);
            }
            site_of.push(site);
            node_ids.insert(url.to_string(), id as NodeId);
            *slot = id as NodeId;
        }
        if ids[0] != ids[1] {
            packed.push(((ids[0] as u64) << 32) | ids[1] as u64);
        }
        Ok(())
    })?;

    let n = site_of.len();
    Ok((WebGraph::from_packed(n, packed), SiteMapping::new(site_of, site_names)?))
}

/// Reads `site_name<TAB>{legit|fake}` lines into a per-site class vector.
pub fn read_labels(path: &Path, sites: &SiteMapping) -> Result<Vec<Option<Class>>> {
    parse_labels(open(path)?, path, sites)
}

pub(crate) fn parse_labels<R: BufRead>(
    reader: R,
    path: &Path,
    sites: &SiteMapping,
) -> Result<Vec<Option<Class>>> {
    let mut out = vec![None; sites.num_sites()];
    for_each_record(reader, path, |line, rec| {
        let (name, class) = split_pair(rec, path, line)?;
        let class = Class::parse(class)
            .ok_or_else(|| Error::parse(path, line, format!("unknown class `{class}`")))?;
        let s = sites
            .lookup(name)
            .ok_or_else(|| Error::parse(path, line, format!("unknown site `{name}`")))?;
        match out[s as usize] {
            Some(prev) if prev != class => Err(Error::parse(
                path,
                line,
                format!("conflicting labels for `{name}`"),
            )),
            _ => {
                out[s as usize] = Some(class);
                Ok(())
            }
        }
    })?;
    Ok(out)
}
