//! Circuits around the origin and the separation property of circuits.
//!
//! A circuit surrounds a point when a ray from the point crosses its edges an
//! odd number of times (even-odd rule on the integer embedding). The ray is
//! horizontal, pointing right, and nudged infinitesimally upward so that it
//! never passes through a vertex.
//!
//! Search: restrict to the vertices in the requested state (origin excluded),
//! grow a breadth-first forest and give every vertex the parity of ray
//! crossings along its tree path. A non-tree edge whose parity disagrees with
//! the labels closes a cycle with odd crossing parity, and the two tree paths
//! to their common ancestor make that cycle simple. If every edge agrees,
//! every cycle has even parity and no circuit surrounds the origin.

use std::collections::VecDeque;
use std::io::{self, Write};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{Adjacency, AdjacencyKind, FiniteGraph, VertexId};

pub type Point = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    OnBoundary,
}

#[inline]
fn cross(a: Point, b: Point, q: Point) -> i64 {
    (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0)
}

fn on_segment(q: Point, a: Point, b: Point) -> bool {
    cross(a, b, q) == 0
        && a.0.min(b.0) <= q.0
        && q.0 <= a.0.max(b.0)
        && a.1.min(b.1) <= q.1
        && q.1 <= a.1.max(b.1)
}

/// Does segment `a b` cross the rightward ray from `q`?
#[inline]
pub fn crosses_ray(a: Point, b: Point, q: Point) -> bool {
    let a_above = a.1 > q.1;
    let b_above = b.1 > q.1;
    if a_above == b_above {
        return false;
    }
    let c = cross(a, b, q);
    if b_above {
        c > 0
    } else {
        c < 0
    }
}

/// Even-odd location of `q` relative to the closed polygon through `polygon`.
pub fn locate(graph: &FiniteGraph, polygon: &[usize], q: Point) -> Location {
    let mut inside = false;
    for (i, &a) in polygon.iter().enumerate() {
        let b = polygon[(i + 1) % polygon.len()];
        let (pa, pb) = (graph.position(a), graph.position(b));
        if on_segment(q, pa, pb) {
            return Location::OnBoundary;
        }
        inside ^= crosses_ray(pa, pb, q);
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    vertices: Vec<usize>,
    adjacency: AdjacencyKind,
}

fn adjacency_of(graph: &FiniteGraph, which: AdjacencyKind) -> Result<&Adjacency> {
    graph
        .adjacency_of(which)
        .ok_or(Error::UnsupportedMatching(graph.kind()))
}

impl Circuit {
    /// A closed cycle of distinct vertices, consecutive ones adjacent in
    /// `adjacency`.
    pub fn new(graph: &FiniteGraph, vertices: Vec<usize>, adjacency: AdjacencyKind) -> Result<Self> {
        let adj = adjacency_of(graph, adjacency)?;
        if vertices.len() < 3 {
            return Err(Error::Malformed("a circuit needs at least three vertices".into()));
        }
        let mut seen = vec![false; graph.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= graph.vertex_count() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Malformed(format!("repeated or invalid vertex {v}")));
            }
            let next = vertices[(i + 1) % vertices.len()];
            if !adj.contains(v, next) {
                return Err(Error::Malformed(format!(
                    "{} and {} are not adjacent",
                    graph.vertex(v),
                    graph.vertex(next)
                )));
            }
        }
        Ok(Circuit {
            vertices,
            adjacency,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn adjacency(&self) -> AdjacencyKind {
        self.adjacency
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn locate(&self, graph: &FiniteGraph, v: usize) -> Location {
        if self.contains(v) {
            return Location::OnBoundary;
        }
        locate(graph, &self.vertices, graph.position(v))
    }

    /// Strictly surrounds vertex `v`.
    pub fn surrounds(&self, graph: &FiniteGraph, v: usize) -> bool {
        self.locate(graph, v) == Location::Inside
    }

    pub fn coordinates(&self, graph: &FiniteGraph) -> Vec<VertexId> {
        self.vertices.iter().map(|&v| graph.vertex(v)).collect()
    }

    /// Re-check every invariant of a circuit around the origin.
    pub fn validate_around_origin(&self, graph: &FiniteGraph) -> Result<()> {
        Circuit::new(graph, self.vertices.clone(), self.adjacency)?;
        if !self.surrounds(graph, graph.origin()) {
            return Err(Error::Malformed("circuit does not surround the origin".into()));
        }
        Ok(())
    }

    /// The vertex list shifted by `(dx, dy)`, read in `adjacency`. Fails when
    /// a shifted vertex leaves the box or the result is not a circuit there.
    pub fn translate(
        &self,
        graph: &FiniteGraph,
        dx: i32,
        dy: i32,
        adjacency: AdjacencyKind,
    ) -> Result<Circuit> {
        let shifted = self
            .vertices
            .iter()
            .map(|&v| {
                graph
                    .index_of(graph.vertex(v).offset(dx, dy))
                    .ok_or_else(|| Error::Malformed("translate leaves the box".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::new(graph, shifted, adjacency)
    }
}

/// Reusable search buffers.
#[derive(Debug, Clone, Default)]
pub struct CircuitFinder {
    parent: Vec<u32>,
    depth: Vec<u32>,
    parity: Vec<bool>,
    visited: Vec<bool>,
    queue: VecDeque<usize>,
}

impl CircuitFinder {
    pub fn new() -> Self {
        CircuitFinder::default()
    }

    /// Some circuit of vertices with `bits[v] == state` around the origin.
    pub fn find(
        &mut self,
        graph: &FiniteGraph,
        bits: &[bool],
        adjacency: AdjacencyKind,
        state: bool,
    ) -> Result<Option<Circuit>> {
        let adj = adjacency_of(graph, adjacency)?;
        let n = graph.vertex_count();
        let origin = graph.origin();
        let q = graph.position(origin);
        let eligible = |v: usize| v != origin && bits[v] == state;
        self.parent.clear();
        self.parent.resize(n, u32::MAX);
        self.depth.clear();
        self.depth.resize(n, 0);
        self.parity.clear();
        self.parity.resize(n, false);
        self.visited.clear();
        self.visited.resize(n, false);

        for s in 0..n {
            if !eligible(s) || self.visited[s] {
                continue;
            }
            self.visited[s] = true;
            self.queue.clear();
            self.queue.push_back(s);
            while let Some(u) = self.queue.pop_front() {
                let pu = graph.position(u);
                for &w in adj.neighbors(u) {
                    let w = w as usize;
                    if !eligible(w) {
                        continue;
                    }
                    let flips = crosses_ray(pu, graph.position(w), q);
                    if !self.visited[w] {
                        self.visited[w] = true;
                        self.parent[w] = u as u32;
                        self.depth[w] = self.depth[u] + 1;
                        self.parity[w] = self.parity[u] ^ flips;
                        self.queue.push_back(w);
                    } else if self.parity[u] ^ flips != self.parity[w] {
                        let circuit = Circuit::new(graph, self.close_cycle(u, w), adjacency)?;
                        debug_assert!(circuit.surrounds(graph, origin));
                        return Ok(Some(circuit));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Tree path `u -> lca` followed by `lca -> w`.
    fn close_cycle(&self, u: usize, w: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, w);
        let mut up = vec![a];
        let mut down = vec![b];
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a] as usize;
                up.push(a);
            } else {
                b = self.parent[b] as usize;
                down.push(b);
            }
        }
        down.pop();
        up.extend(down.into_iter().rev());
        up
    }
}

/// Some circuit around the origin (origin excluded) made of vertices whose
/// value in `config` equals `state`, in the primal or the matching adjacency.
pub fn find_circuit(
    graph: &FiniteGraph,
    config: &Config,
    use_matching: bool,
    state: bool,
) -> Result<Option<Circuit>> {
    config.check_graph(graph)?;
    let which = if use_matching {
        AdjacencyKind::Matching
    } else {
        AdjacencyKind::Primal
    };
    CircuitFinder::new().find(graph, config.bits(), which, state)
}

/// Whether some vertex of `path` has a graph neighbour on `circuit`. The path
/// must start strictly inside and end strictly outside the circuit.
pub fn check_separation(graph: &FiniteGraph, circuit: &Circuit, path: &[usize]) -> Result<bool> {
    let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
        return Err(Error::Malformed("empty path".into()));
    };
    let n = graph.vertex_count();
    if path.iter().any(|&v| v >= n) {
        return Err(Error::Malformed("path vertex outside the box".into()));
    }
    for pair in path.windows(2) {
        if !graph.adjacency().contains(pair[0], pair[1]) {
            return Err(Error::Malformed("consecutive path vertices are not adjacent".into()));
        }
    }
    if circuit.locate(graph, first) != Location::Inside {
        return Err(Error::Malformed("path does not start inside the circuit".into()));
    }
    if circuit.locate(graph, last) != Location::Outside {
        return Err(Error::Malformed("path does not end outside the circuit".into()));
    }
    let mut on_circuit = vec![false; n];
    for &v in circuit.vertices() {
        on_circuit[v] = true;
    }
    Ok(path
        .iter()
        .any(|&v| graph.neighbors(v).iter().any(|&u| on_circuit[u as usize])))
}

/// `index,x,y` rows in circuit order.
pub fn write_circuit_csv<W: Write>(out: &mut W, graph: &FiniteGraph, circuit: &Circuit) -> io::Result<()> {
    writeln!(out, "index,x,y")?;
    for (i, v) in circuit.coordinates(graph).into_iter().enumerate() {
        writeln!(out, "{i},{},{}", v.x, v.y)?;
    }
    Ok(())
}
