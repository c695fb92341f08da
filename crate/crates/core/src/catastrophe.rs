//! Cluster labelling and the destruction step `X -> X*`.
//!
//! "Infinite cluster" has no meaning in a finite box, so destruction is driven
//! by an [`InfinityProxy`] evaluated on the sides of the box each cluster
//! touches.

use std::fmt;
use std::str::FromStr;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{FiniteGraph, Sides};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InfinityProxy {
    /// The cluster touches left and right, or bottom and top.
    #[default]
    SpansOpposite,
    /// The cluster touches any boundary vertex.
    TouchesBoundary,
}

impl InfinityProxy {
    #[inline]
    pub fn is_infinite(self, sides: Sides) -> bool {
        match self {
            InfinityProxy::SpansOpposite => sides.spans_left_right() || sides.spans_bottom_top(),
            InfinityProxy::TouchesBoundary => sides.any(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InfinityProxy::SpansOpposite => "spans",
            InfinityProxy::TouchesBoundary => "touches",
        }
    }
}

impl fmt::Display for InfinityProxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InfinityProxy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spans" => Ok(InfinityProxy::SpansOpposite),
            "touches" => Ok(InfinityProxy::TouchesBoundary),
            other => Err(Error::Malformed(format!("unknown infinity proxy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterInfo {
    pub root: usize,
    pub size: usize,
    pub sides: Sides,
}

/// Result of [`label_clusters`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    roots: Vec<Option<usize>>,
    clusters: Vec<ClusterInfo>,
}

impl ClusterLabels {
    /// Root of the cluster containing `v`, `None` when `v` is vacant.
    pub fn root(&self, v: usize) -> Option<usize> {
        self.roots[v]
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Clusters ordered by root.
    pub fn clusters(&self) -> &[ClusterInfo] {
        &self.clusters
    }

    pub fn cluster_of(&self, v: usize) -> Option<&ClusterInfo> {
        let root = self.roots[v]?;
        self.clusters
            .binary_search_by_key(&root, |c| c.root)
            .ok()
            .map(|i| &self.clusters[i])
    }

    pub fn same_cluster(&self, a: usize, b: usize) -> bool {
        matches!((self.roots[a], self.roots[b]), (Some(x), Some(y)) if x == y)
    }
}

/// Reusable labelling scratch space. One per worker; never shared.
#[derive(Debug, Clone, Default)]
pub struct Labeler {
    uf: UnionFind,
    sides: Vec<Sides>,
}

impl Labeler {
    pub fn new() -> Self {
        Labeler::default()
    }

    /// Label the occupied clusters of `bits` on `graph`. Queries below refer
    /// to the most recent call.
    pub fn label(&mut self, graph: &FiniteGraph, bits: &[bool]) {
        let n = graph.vertex_count();
        debug_assert_eq!(bits.len(), n);
        self.uf.reset(n);
        for v in 0..n {
            if !bits[v] {
                continue;
            }
            for &u in graph.neighbors(v) {
                let u = u as usize;
                if u > v && bits[u] {
                    self.uf.union(v, u);
                }
            }
        }
        self.sides.clear();
        self.sides.resize(n, Sides::NONE);
        for &v in graph.boundary() {
            if bits[v] {
                let r = self.uf.find(v);
                self.sides[r] |= graph.sides(v);
            }
        }
    }

    #[inline]
    pub fn root(&mut self, v: usize) -> usize {
        self.uf.find(v)
    }

    /// Sides touched by the cluster of `v` (meaningful for occupied `v`).
    #[inline]
    pub fn cluster_sides(&mut self, v: usize) -> Sides {
        let r = self.uf.find(v);
        self.sides[r]
    }

    pub fn cluster_size(&mut self, v: usize) -> usize {
        let r = self.uf.find(v);
        self.uf.root_size(r)
    }

    /// Whether some cluster touches both the left and right sides.
    pub fn spans_left_right(&mut self, graph: &FiniteGraph, bits: &[bool]) -> bool {
        graph
            .boundary_left()
            .iter()
            .any(|&v| bits[v] && self.cluster_sides(v).spans_left_right())
    }

    /// Whether occupied `v` is joined to any boundary vertex.
    pub fn reaches_boundary(&mut self, bits: &[bool], v: usize) -> bool {
        bits[v] && self.cluster_sides(v).any()
    }

    /// Write `X*` for the labelled `x` into `out`.
    pub fn destroy_into(&mut self, x: &[bool], proxy: InfinityProxy, out: &mut [bool]) {
        for (v, slot) in out.iter_mut().enumerate() {
            *slot = x[v] && !proxy.is_infinite(self.cluster_sides(v));
        }
    }
}

pub fn label_clusters(graph: &FiniteGraph, config: &Config) -> Result<ClusterLabels> {
    config.check_graph(graph)?;
    let bits = config.bits();
    let mut labeler = Labeler::new();
    labeler.label(graph, bits);
    let n = graph.vertex_count();
    let mut roots = vec![None; n];
    let mut clusters = Vec::new();
    for v in 0..n {
        if !bits[v] {
            continue;
        }
        let r = labeler.root(v);
        roots[v] = Some(r);
        if r == v {
            clusters.push(ClusterInfo {
                root: r,
                size: labeler.cluster_size(v),
                sides: labeler.cluster_sides(v),
            });
        }
    }
    Ok(ClusterLabels { roots, clusters })
}

/// `X*`: every vertex of a proxy-infinite cluster becomes vacant.
pub fn destroy(graph: &FiniteGraph, x: &Config, proxy: InfinityProxy) -> Result<Config> {
    x.check_graph(graph)?;
    let mut labeler = Labeler::new();
    labeler.label(graph, x.bits());
    let mut out = vec![false; graph.vertex_count()];
    labeler.destroy_into(x.bits(), proxy, &mut out);
    Config::from_bits(graph, out)
}

/// `{from <-> to}`: some occupied path joins the two vertex sets.
pub fn connects(graph: &FiniteGraph, config: &Config, from: &[usize], to: &[usize]) -> Result<bool> {
    config.check_graph(graph)?;
    let n = graph.vertex_count();
    if from.iter().chain(to).any(|&v| v >= n) {
        return Err(Error::Malformed("vertex outside the box".into()));
    }
    let bits = config.bits();
    let mut labeler = Labeler::new();
    labeler.label(graph, bits);
    let mut seen = vec![false; n];
    for &v in from {
        if bits[v] {
            let r = labeler.root(v);
            seen[r] = true;
        }
    }
    Ok(to.iter().any(|&v| bits[v] && seen[labeler.root(v)]))
}
