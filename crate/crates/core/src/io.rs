//! Text outputs: edge/site/label files, score files and verdict files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::classify::SiteVerdicts;
use crate::error::{Error, Result};
use crate::graph::{SiteMapping, WebGraph};
use crate::labels::Class;
use crate::propagation::{Algorithm, Orientation, PropagationParams, ScoreVector};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(|f| BufWriter::with_capacity(1 << 20, f))
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `src<TAB>dst` lines, preceded by `# `-prefixed `header` lines.
pub fn write_edge_file(path: &Path, g: &WebGraph, header: &[String]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for line in header {
        writeln!(w, "# {line}").map_err(io)?;
    }
    let mut buf = itoa_buf();
    for (u, v) in g.edges() {
        buf.clear();
        push_u32(&mut buf, u);
        buf.push(b'\t');
        push_u32(&mut buf, v);
        buf.push(b'\n');
        w.write_all(&buf).map_err(io)?;
    }
    finish(path, w)
}

fn itoa_buf() -> Vec<u8> {
    Vec::with_capacity(24)
}

fn push_u32(buf: &mut Vec<u8>, mut x: u32) {
    let start = buf.len();
    loop {
        buf.push(b'0' + (x % 10) as u8);
        x /= 10;
        if x == 0 {
            break;
        }
    }
    buf[start..].reverse();
}

/// `node_id<TAB>site_name` for every node.
pub fn write_site_file(path: &Path, sites: &SiteMapping) -> Result<()> {
    let mut w = create(path)?;
    for v in 0..sites.num_nodes() as u32 {
        writeln!(w, "{v}\t{}", sites.name(sites.site_of(v))).map_err(|e| Error::io(path, e))?;
    }
    finish(path, w)
}

/// `site_name<TAB>{legit|fake}` for every labeled site.
pub fn write_label_file(path: &Path, sites: &SiteMapping, site_class: &[Option<Class>]) -> Result<()> {
    let mut w = create(path)?;
    for (s, class) in site_class.iter().enumerate() {
        if let Some(c) = class {
            writeln!(w, "{}\t{}", sites.name(s as u32), c.as_str())
                .map_err(|e| Error::io(path, e))?;
        }
    }
    finish(path, w)
}

fn orientation_str(o: Orientation) -> &'static str {
    match o {
        Orientation::HigherIsGood => "higher_is_good",
        Orientation::HigherIsBad => "higher_is_bad",
    }
}

/// Score file: a commented header, then `node_id<TAB>score` with scores in
/// shortest round-trip decimal form.
pub fn write_score_file<W: Write>(
    mut w: W,
    name: &str,
    scores: &ScoreVector,
    params: &PropagationParams,
) -> std::io::Result<()> {
    writeln!(w, "# algorithm={name}")?;
    writeln!(w, "# params={}", serde_json::to_string(params)?)?;
    writeln!(w, "# orientation={}", orientation_str(scores.orientation))?;
    writeln!(w, "# converged={}", scores.converged)?;
    writeln!(w, "# iterations={}", scores.iterations)?;
    for (v, x) in scores.values.iter().enumerate() {
        writeln!(w, "{v}\t{x:?}")?;
    }
    Ok(())
}

pub fn save_scores(
    path: &Path,
    algorithm: Algorithm,
    scores: &ScoreVector,
    params: &PropagationParams,
) -> Result<()> {
    let mut w = create(path)?;
    write_score_file(&mut w, algorithm.name(), scores, params).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

/// Reads a score file back. Node ids must cover `0..n` exactly once.
pub fn read_score_file(path: &Path) -> Result<ScoreVector> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_score_file(BufReader::new(f), path)
}

pub(crate) fn parse_score_file<R: BufRead>(reader: R, path: &Path) -> Result<ScoreVector> {
    let mut orientation = Orientation::HigherIsGood;
    let mut converged = true;
    let mut iterations = 0;
    let mut entries: Vec<Option<f64>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((key, value)) = meta.trim().split_once('=') {
                match key {
                    "orientation" => {
                        orientation = match value {
                            "higher_is_good" => Orientation::HigherIsGood,
                            "higher_is_bad" => Orientation::HigherIsBad,
                            _ => return Err(Error::parse(path, line_no, "bad orientation")),
                        }
                    }
                    "converged" => {
                        converged = value
                            .parse()
                            .map_err(|_| Error::parse(path, line_no, "bad converged flag"))?
                    }
                    "iterations" => {
                        iterations = value
                            .parse()
                            .map_err(|_| Error::parse(path, line_no, "bad iteration count"))?
                    }
                    _ => {}
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (v, x) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, line_no, "expected node_id<TAB>score"))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::parse(path, line_no, format!("bad node id `{v}`")))?;
        let x: f64 = x
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, line_no, format!("bad score `{x}`")))?;
        if v >= entries.len() {
            entries.resize(v + 1, None);
        }
        if entries[v].replace(x).is_some() {
            return Err(Error::parse(path, line_no, format!("node {v} listed twice")));
        }
    }
    let values = entries
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::Config(format!("{}: node {v} missing", path.display()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreVector {
        values,
        orientation,
        iterations,
        converged,
    })
}

/// `site_name<TAB>{legit|fake}<TAB>legit_fraction` per site.
pub fn write_verdicts<W: Write>(mut w: W, sites: &SiteMapping, verdicts: &SiteVerdicts) -> std::io::Result<()> {
    for ((&s, label), frac) in verdicts
        .sites
        .iter()
        .zip(&verdicts.labels)
        .zip(&verdicts.legit_fraction)
    {
        writeln!(w, "{}\t{}\t{frac:?}", sites.name(s), label.as_str())?;
    }
    Ok(())
}
