//! Compressed sparse web graphs.
//!
//! A [`WebGraph`] keeps both the successor and the predecessor lists of every
//! node in CSR form: one offsets array of length `n + 1` and one flat array of
//! neighbor indices per direction. Lists are sorted ascending, duplicate edges
//! are collapsed and self-loops are dropped when the graph is built, so the
//! degree arrays used as propagation divisors count distinct neighbors.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
pub type NodeId = u32;
/// Dense site index in `0..site_count`.
pub type SiteId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Pages `v` links to.
    Out,
    /// Pages linking to `v`.
    In,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    #[inline]
    fn row(&self, v: usize) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    fn len(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Immutable directed graph with forward and reverse adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebGraph {
    forward: Csr,
    reverse: Csr,
}

pub(crate) fn check_node_count(n: usize) -> Result<()> {
    if n > NodeId::MAX as usize {
        return Err(Error::TooManyNodes);
    }
    Ok(())
}

impl WebGraph {
    /// Builds a graph on `n` nodes. Self-loops are dropped and duplicate
    /// edges collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        check_node_count(n)?;
        let mut packed = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::NodeOutOfRange { node: x as usize, n });
                }
            }
            if u != v {
                packed.push(((u as u64) << 32) | v as u64);
            }
        }
        Ok(Self::from_packed(n, packed))
    }

    /// `packed` holds `src << 32 | dst` words, already range-checked and
    /// free of self-loops.
    pub(crate) fn from_packed(n: usize, mut packed: Vec<u64>) -> Self {
        packed.sort_unstable();
        packed.dedup();

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_counts = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(packed.len());
        for &e in &packed {
            let (u, v) = ((e >> 32) as usize, (e & 0xffff_ffff) as usize);
            out_offsets[u + 1] += 1;
            in_counts[v + 1] += 1;
            targets.push(v as NodeId);
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_counts[i + 1] += in_counts[i];
        }
        let in_offsets = in_counts.clone();
        // Sources arrive in ascending order, so every in-list comes out sorted.
        let mut cursor = in_counts;
        let mut sources = vec![0 as NodeId; packed.len()];
        for &e in &packed {
            let (u, v) = ((e >> 32) as NodeId, (e & 0xffff_ffff) as usize);
            sources[cursor[v]] = u;
            cursor[v] += 1;
        }
        drop(packed);

        WebGraph {
            forward: Csr {
                offsets: out_offsets,
                targets,
            },
            reverse: Csr {
                offsets: in_offsets,
                targets: sources,
            },
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.forward.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.forward.targets.len()
    }

    #[inline]
    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        self.forward.row(v as usize)
    }

    #[inline]
    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        self.reverse.row(v as usize)
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.forward.len(v as usize)
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.reverse.len(v as usize)
    }

    /// Checked neighbor lookup.
    pub fn neighbors(&self, v: NodeId, direction: Direction) -> Result<&[NodeId]> {
        let n = self.num_nodes();
        if v as usize >= n {
            return Err(Error::NodeOutOfRange { node: v as usize, n });
        }
        Ok(match direction {
            Direction::Out => self.successors(v),
            Direction::In => self.predecessors(v),
        })
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.successors(u).binary_search(&v).is_ok()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.num_nodes() as NodeId).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.num_nodes() as NodeId).map(|v| self.in_degree(v)).collect()
    }

    /// All edges in (source, destination) lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes() as NodeId)
            .flat_map(move |u| self.successors(u).iter().map(move |&v| (u, v)))
    }

    /// The transpose graph. Costs nothing beyond a clone: the two adjacency
    /// directions simply swap roles.
    pub fn transpose(&self) -> WebGraph {
        WebGraph {
            forward: self.reverse.clone(),
            reverse: self.forward.clone(),
        }
    }

    /// Relabels nodes: node `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[NodeId]) -> Result<WebGraph> {
        if perm.len() != self.num_nodes() {
            return Err(Error::LengthMismatch(perm.len(), self.num_nodes()));
        }
        WebGraph::from_edges(
            self.num_nodes(),
            self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])),
        )
    }

    pub(crate) fn raw_forward(&self) -> (&[usize], &[NodeId]) {
        (&self.forward.offsets, &self.forward.targets)
    }

    pub(crate) fn from_raw_forward(offsets: Vec<usize>, targets: Vec<NodeId>) -> Result<Self> {
        let n = offsets
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Bundle("empty offsets".into()))?;
        check_node_count(n)?;
        if offsets[0] != 0 || offsets[n] != targets.len() {
            return Err(Error::Bundle("offsets do not span targets".into()));
        }
        let mut packed = Vec::with_capacity(targets.len());
        for u in 0..n {
            if offsets[u] > offsets[u + 1] {
                return Err(Error::Bundle("offsets not monotone".into()));
            }
            for &v in &targets[offsets[u]..offsets[u + 1]] {
                if v as usize >= n || v as usize == u {
                    return Err(Error::Bundle(format!("bad edge {u} -> {v}")));
                }
                packed.push(((u as u64) << 32) | v as u64);
            }
        }
        let g = Self::from_packed(n, packed);
        if g.num_edges() != targets.len() {
            return Err(Error::Bundle("duplicate edges".into()));
        }
        Ok(g)
    }
}

/// Page to site assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteMapping {
    site_of: Vec<SiteId>,
    names: Vec<String>,
    by_name: HashMap<String, SiteId>,
}

impl SiteMapping {
    pub fn new(site_of: Vec<SiteId>, names: Vec<String>) -> Result<Self> {
        let mut by_name = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if by_name.insert(name.clone(), i as SiteId).is_some() {
                return Err(Error::Config(format!("duplicate site name `{name}`")));
            }
        }
        if let Some(&s) = site_of.iter().find(|&&s| s as usize >= names.len()) {
            return Err(Error::Config(format!(
                "site id {s} out of range ({} sites)",
                names.len()
            )));
        }
        Ok(SiteMapping {
            site_of,
            names,
            by_name,
        })
    }

    /// One site per node, named after the node index.
    pub fn singletons(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::new((0..n as SiteId).collect(), names).expect("distinct names")
    }

    /// One site per node with the given names (the mapping of a site graph).
    pub fn identity(names: Vec<String>) -> Result<Self> {
        Self::new((0..names.len() as SiteId).collect(), names)
    }

    pub fn num_nodes(&self) -> usize {
        self.site_of.len()
    }

    pub fn num_sites(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn site_of(&self, v: NodeId) -> SiteId {
        self.site_of[v as usize]
    }

    pub fn sites(&self) -> &[SiteId] {
        &self.site_of
    }

    pub fn name(&self, s: SiteId) -> &str {
        &self.names[s as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<SiteId> {
        self.by_name.get(name).copied()
    }

    /// Pages of each site, ascending.
    pub fn pages_by_site(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.num_sites()];
        for (v, &s) in self.site_of.iter().enumerate() {
            out[s as usize].push(v as NodeId);
        }
        out
    }

    pub fn page_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_sites()];
        for &s in &self.site_of {
            out[s as usize] += 1;
        }
        out
    }
}

/// Collapses a page graph to one node per site, keeping only inter-site links.
pub fn build_site_graph(g: &WebGraph, sites: &SiteMapping) -> Result<(WebGraph, SiteMapping)> {
    if sites.num_nodes() != g.num_nodes() {
        return Err(Error::LengthMismatch(sites.num_nodes(), g.num_nodes()));
    }
    let packed = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (sites.site_of(u), sites.site_of(v));
            (a != b).then_some(((a as u64) << 32) | b as u64)
        })
        .collect();
    let site_graph = WebGraph::from_packed(sites.num_sites(), packed);
    Ok((site_graph, SiteMapping::identity(sites.names().to_vec())?))
}
