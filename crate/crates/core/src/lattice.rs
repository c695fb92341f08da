//! Finite boxes of the planar lattices used by the simulator.
//!
//! Every lattice lives on integer coordinates. Square-coordinate kinds use the
//! box `[0, L) x [0, L)` with dense row-major indices. The bond covering of the
//! triangular lattice has one vertex per triangular edge, identified by the
//! doubled midpoint of that edge.
//!
//! Adjacency inside a box is always the subgraph of the infinite lattice
//! induced by the box vertices (open boundary, no wraparound).
//!
//! Planar positions are kept as integers scaled by 4 so that point-in-polygon
//! tests run in exact arithmetic. The honeycomb uses a brick-wall embedding:
//! horizontal neighbours `(x +- 1, y)` and one vertical neighbour, `(x, y + 1)`
//! when `x + y` is even and `(x, y - 1)` otherwise. Its drawing nudges even
//! sites up and odd sites down by a quarter so that every hexagon is convex.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeKind {
    SquareSite,
    /// Site percolation on the covering graph of the square lattice, i.e.
    /// square bond percolation.
    ChessBoard,
    TriangularSite,
    /// Site percolation on the covering graph of the triangular lattice, i.e.
    /// triangular bond percolation.
    TriangularBondCovering,
    StarSquareSite,
    StarHoneycombSite,
    HoneycombSite,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 7] = [
        LatticeKind::SquareSite,
        LatticeKind::ChessBoard,
        LatticeKind::TriangularSite,
        LatticeKind::TriangularBondCovering,
        LatticeKind::StarSquareSite,
        LatticeKind::StarHoneycombSite,
        LatticeKind::HoneycombSite,
    ];

    /// Name accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::SquareSite => "square-site",
            LatticeKind::ChessBoard => "square-bond",
            LatticeKind::TriangularSite => "triangular-site",
            LatticeKind::TriangularBondCovering => "triangular-bond",
            LatticeKind::StarSquareSite => "star-square-site",
            LatticeKind::StarHoneycombSite => "star-honeycomb-site",
            LatticeKind::HoneycombSite => "honeycomb-site",
        }
    }

    /// `|D_v|` for a vertex far from the box boundary.
    pub fn bulk_degree(self) -> usize {
        match self {
            LatticeKind::SquareSite => 4,
            LatticeKind::ChessBoard => 6,
            LatticeKind::TriangularSite => 6,
            LatticeKind::TriangularBondCovering => 10,
            LatticeKind::StarSquareSite => 8,
            LatticeKind::StarHoneycombSite => 12,
            LatticeKind::HoneycombSite => 3,
        }
    }

    /// True when vertices are the points of `[0, L)^2`.
    pub fn is_square_coordinate(self) -> bool {
        self != LatticeKind::TriangularBondCovering
    }

    pub fn has_tilde_map(self) -> bool {
        self == LatticeKind::ChessBoard
    }

    fn min_side(self) -> usize {
        match self {
            LatticeKind::TriangularBondCovering => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticeKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownLattice(s.to_string()))
    }
}

/// The lattice whose vacant circuits block occupied paths of `kind`.
///
/// The chess-board lattice maps to itself: its matching lattice is its own
/// translate by `(1, 0)`, which is how [`FiniteGraph`] stores it.
pub fn matching_of(kind: LatticeKind) -> Result<LatticeKind> {
    match kind {
        LatticeKind::SquareSite => Ok(LatticeKind::StarSquareSite),
        LatticeKind::StarSquareSite => Ok(LatticeKind::SquareSite),
        LatticeKind::TriangularSite => Ok(LatticeKind::TriangularSite),
        LatticeKind::ChessBoard => Ok(LatticeKind::ChessBoard),
        LatticeKind::HoneycombSite => Ok(LatticeKind::StarHoneycombSite),
        LatticeKind::StarHoneycombSite => Ok(LatticeKind::HoneycombSite),
        LatticeKind::TriangularBondCovering => Err(Error::UnsupportedMatching(kind)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub x: i32,
    pub y: i32,
}

impl VertexId {
    pub const fn new(x: i32, y: i32) -> Self {
        VertexId { x, y }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        VertexId::new(self.x + dx, self.y + dy)
    }

    /// `v + (1, 0)`.
    pub fn tilde(self) -> Self {
        self.offset(1, 0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn tilde(v: VertexId) -> VertexId {
    v.tilde()
}

/// Bit set of box sides a vertex lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Sides(pub u8);

impl Sides {
    pub const NONE: Sides = Sides(0);
    pub const LEFT: Sides = Sides(1);
    pub const RIGHT: Sides = Sides(2);
    pub const BOTTOM: Sides = Sides(4);
    pub const TOP: Sides = Sides(8);

    pub fn contains(self, other: Sides) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn any(self) -> bool {
        self.0 != 0
    }

    pub fn spans_left_right(self) -> bool {
        self.contains(Sides(Sides::LEFT.0 | Sides::RIGHT.0))
    }

    pub fn spans_bottom_top(self) -> bool {
        self.contains(Sides(Sides::BOTTOM.0 | Sides::TOP.0))
    }
}

impl std::ops::BitOr for Sides {
    type Output = Sides;
    fn bitor(self, rhs: Sides) -> Sides {
        Sides(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for Sides {
    fn bitor_assign(&mut self, rhs: Sides) {
        self.0 |= rhs.0;
    }
}

/// Compressed neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn contains(&self, v: usize, u: usize) -> bool {
        self.neighbors(v).binary_search(&(u as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which neighbour structure a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdjacencyKind {
    Primal,
    Matching,
}

/// An explicit finite box of a lattice. Immutable once built.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    kind: LatticeKind,
    side: usize,
    coords: Vec<VertexId>,
    positions: Vec<(i64, i64)>,
    lookup: Vec<u32>,
    grid_width: usize,
    adjacency: Adjacency,
    matching: Option<Adjacency>,
    sides: Vec<Sides>,
    boundary: [Vec<usize>; 4],
    boundary_all: Vec<usize>,
    origin: usize,
    degree: usize,
}

const NO_VERTEX: u32 = u32::MAX;

const SQUARE: &[(i32, i32)] = &[(1, 0), (-1, 0), (0, 1), (0, -1)];
const STAR_SQUARE: &[(i32, i32)] = &[
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
];
const TRIANGULAR: &[(i32, i32)] = &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
/// Edge directions of the triangular lattice, one per edge class.
const TRIANGULAR_EDGE_DIRS: &[(i32, i32)] = &[(1, 0), (0, 1), (1, -1)];

fn chess_board_offsets(x: i32, y: i32) -> Vec<(i32, i32)> {
    let mut out = SQUARE.to_vec();
    if (x + y).rem_euclid(2) == 0 {
        out.extend_from_slice(&[(1, 1), (-1, -1)]);
    } else {
        out.extend_from_slice(&[(1, -1), (-1, 1)]);
    }
    out
}

fn honeycomb_offsets(x: i32, y: i32) -> Vec<(i32, i32)> {
    let vertical = if (x + y).rem_euclid(2) == 0 { 1 } else { -1 };
    vec![(1, 0), (-1, 0), (0, vertical)]
}

/// All other vertices of the bricks (hexagonal faces) containing `(x, y)`.
/// A brick with lower-left corner `(bx, by)`, `bx + by` even, spans
/// `bx..=bx+2` by `by..=by+1`.
fn star_honeycomb_offsets(x: i32, y: i32) -> Vec<(i32, i32)> {
    let mut set = BTreeSet::new();
    for by in [y - 1, y] {
        for bx in [x - 2, x - 1, x] {
            if (bx + by).rem_euclid(2) != 0 {
                continue;
            }
            for cy in by..=by + 1 {
                for cx in bx..=bx + 2 {
                    if (cx, cy) != (x, y) {
                        set.insert((cx - x, cy - y));
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

fn primal_offsets(kind: LatticeKind, x: i32, y: i32) -> Vec<(i32, i32)> {
    match kind {
        LatticeKind::SquareSite => SQUARE.to_vec(),
        LatticeKind::StarSquareSite => STAR_SQUARE.to_vec(),
        LatticeKind::TriangularSite => TRIANGULAR.to_vec(),
        LatticeKind::ChessBoard => chess_board_offsets(x, y),
        LatticeKind::HoneycombSite => honeycomb_offsets(x, y),
        LatticeKind::StarHoneycombSite => star_honeycomb_offsets(x, y),
        LatticeKind::TriangularBondCovering => unreachable!("covering graph is built separately"),
    }
}

fn matching_offsets(kind: LatticeKind, x: i32, y: i32) -> Option<Vec<(i32, i32)>> {
    match kind {
        LatticeKind::SquareSite => Some(STAR_SQUARE.to_vec()),
        LatticeKind::StarSquareSite => Some(SQUARE.to_vec()),
        LatticeKind::TriangularSite => Some(TRIANGULAR.to_vec()),
        // Translate of the chess board by (1, 0): the neighbours of w are the
        // neighbours of w - (1, 0), shifted back.
        LatticeKind::ChessBoard => Some(chess_board_offsets(x - 1, y)),
        LatticeKind::HoneycombSite => Some(star_honeycomb_offsets(x, y)),
        LatticeKind::StarHoneycombSite => Some(honeycomb_offsets(x, y)),
        LatticeKind::TriangularBondCovering => None,
    }
}

/// Build the box of side `side` for `kind`.
pub fn build_box(kind: LatticeKind, side: usize) -> Result<FiniteGraph> {
    if side < kind.min_side() || side > (1 << 14) {
        return Err(Error::InvalidSide {
            kind,
            side,
            min: kind.min_side(),
        });
    }
    if kind.is_square_coordinate() {
        Ok(build_square_coordinate(kind, side))
    } else {
        Ok(build_triangular_covering(side))
    }
}

fn build_square_coordinate(kind: LatticeKind, side: usize) -> FiniteGraph {
    let l = side as i32;
    let n = side * side;
    let index = |x: i32, y: i32| -> Option<u32> {
        if (0..l).contains(&x) && (0..l).contains(&y) {
            Some((y as usize * side + x as usize) as u32)
        } else {
            None
        }
    };
    let mut coords = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut primal = Vec::with_capacity(n);
    let mut matching = Vec::with_capacity(n);
    let honeycomb = matches!(
        kind,
        LatticeKind::HoneycombSite | LatticeKind::StarHoneycombSite
    );
    for y in 0..l {
        for x in 0..l {
            coords.push(VertexId::new(x, y));
            let lift = if !honeycomb {
                0
            } else if (x + y).rem_euclid(2) == 0 {
                1
            } else {
                -1
            };
            positions.push((4 * x as i64, 4 * y as i64 + lift));
            let collect = |offs: Vec<(i32, i32)>| -> Vec<u32> {
                offs.into_iter()
                    .filter_map(|(dx, dy)| index(x + dx, y + dy))
                    .collect()
            };
            primal.push(collect(primal_offsets(kind, x, y)));
            if let Some(offs) = matching_offsets(kind, x, y) {
                matching.push(collect(offs));
            }
        }
    }
    let sides = coords
        .iter()
        .map(|v| {
            let mut s = Sides::NONE;
            if v.x == 0 {
                s |= Sides::LEFT;
            }
            if v.x == l - 1 {
                s |= Sides::RIGHT;
            }
            if v.y == 0 {
                s |= Sides::BOTTOM;
            }
            if v.y == l - 1 {
                s |= Sides::TOP;
            }
            s
        })
        .collect();
    let lookup = (0..n as u32).collect();
    let c = (side / 2) as i32;
    let origin = index(c, c).expect("centre lies in the box") as usize;
    let matching = (matching.len() == n).then(|| Adjacency::from_lists(matching));
    FiniteGraph::assemble(
        kind,
        side,
        coords,
        positions,
        lookup,
        side,
        Adjacency::from_lists(primal),
        matching,
        sides,
        origin,
    )
}

fn build_triangular_covering(side: usize) -> FiniteGraph {
    let l = side as i32;
    let inside = |x: i32, y: i32| (0..l).contains(&x) && (0..l).contains(&y);
    // Doubled midpoints range over [0, 2L - 2].
    let grid = 2 * side - 1;
    let mut lookup = vec![NO_VERTEX; grid * grid];
    let mut coords = Vec::new();
    let mut endpoints = Vec::new();
    for y in 0..l {
        for x in 0..l {
            for &(dx, dy) in TRIANGULAR_EDGE_DIRS {
                if !inside(x + dx, y + dy) {
                    continue;
                }
                let mid = VertexId::new(2 * x + dx, 2 * y + dy);
                lookup[mid.y as usize * grid + mid.x as usize] = coords.len() as u32;
                coords.push(mid);
                endpoints.push([(x, y), (x + dx, y + dy)]);
            }
        }
    }
    let find = |mid: VertexId| -> u32 { lookup[mid.y as usize * grid + mid.x as usize] };
    let mut lists = Vec::with_capacity(coords.len());
    for (i, ends) in endpoints.iter().enumerate() {
        let mut list = Vec::new();
        for &(ex, ey) in ends {
            for &(dx, dy) in TRIANGULAR {
                if !inside(ex + dx, ey + dy) {
                    continue;
                }
                let other = find(VertexId::new(2 * ex + dx, 2 * ey + dy));
                debug_assert_ne!(other, NO_VERTEX);
                if other as usize != i {
                    list.push(other);
                }
            }
        }
        lists.push(list);
    }
    let positions = coords
        .iter()
        .map(|m| (2 * m.x as i64, 2 * m.y as i64))
        .collect();
    let sides = endpoints
        .iter()
        .map(|[a, b]| {
            let mut s = Sides::NONE;
            if a.0.min(b.0) == 0 {
                s |= Sides::LEFT;
            }
            if a.0.max(b.0) == l - 1 {
                s |= Sides::RIGHT;
            }
            if a.1.min(b.1) == 0 {
                s |= Sides::BOTTOM;
            }
            if a.1.max(b.1) == l - 1 {
                s |= Sides::TOP;
            }
            s
        })
        .collect();
    let c = (side / 2).min(side - 2) as i32;
    let origin = find(VertexId::new(2 * c + 1, 2 * (side / 2) as i32)) as usize;
    FiniteGraph::assemble(
        LatticeKind::TriangularBondCovering,
        side,
        coords,
        positions,
        lookup,
        grid,
        Adjacency::from_lists(lists),
        None,
        sides,
        origin,
    )
}

impl FiniteGraph {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: LatticeKind,
        side: usize,
        coords: Vec<VertexId>,
        positions: Vec<(i64, i64)>,
        lookup: Vec<u32>,
        grid_width: usize,
        adjacency: Adjacency,
        matching: Option<Adjacency>,
        sides: Vec<Sides>,
        origin: usize,
    ) -> Self {
        let mut boundary: [Vec<usize>; 4] = Default::default();
        for (v, s) in sides.iter().enumerate() {
            for (slot, side_bit) in [Sides::LEFT, Sides::RIGHT, Sides::BOTTOM, Sides::TOP]
                .into_iter()
                .enumerate()
            {
                if s.contains(side_bit) {
                    boundary[slot].push(v);
                }
            }
        }
        let boundary_all = (0..coords.len()).filter(|&v| sides[v].any()).collect();
        let interior_max = (0..coords.len())
            .filter(|&v| !sides[v].any())
            .map(|v| adjacency.degree(v))
            .max();
        let degree = interior_max
            .or_else(|| (0..coords.len()).map(|v| adjacency.degree(v)).max())
            .unwrap_or(0);
        FiniteGraph {
            kind,
            side,
            coords,
            positions,
            lookup,
            grid_width,
            adjacency,
            matching,
            sides,
            boundary,
            boundary_all,
            origin,
            degree,
        }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Side length `L` of the box.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn vertex(&self, v: usize) -> VertexId {
        self.coords[v]
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        if id.x < 0 || id.y < 0 {
            return None;
        }
        let (x, y) = (id.x as usize, id.y as usize);
        if x >= self.grid_width || y >= self.lookup.len() / self.grid_width {
            return None;
        }
        let i = self.lookup[y * self.grid_width + x];
        (i != NO_VERTEX).then_some(i as usize)
    }

    /// Planar embedding of `v`, scaled by 4.
    pub fn position(&self, v: usize) -> (i64, i64) {
        self.positions[v]
    }

    /// `D_v`, the neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        self.adjacency.neighbors(v)
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn matching_adjacency(&self) -> Option<&Adjacency> {
        self.matching.as_ref()
    }

    pub fn adjacency_of(&self, which: AdjacencyKind) -> Option<&Adjacency> {
        match which {
            AdjacencyKind::Primal => Some(&self.adjacency),
            AdjacencyKind::Matching => self.matching.as_ref(),
        }
    }

    pub fn sides(&self, v: usize) -> Sides {
        self.sides[v]
    }

    pub fn boundary_left(&self) -> &[usize] {
        &self.boundary[0]
    }

    pub fn boundary_right(&self) -> &[usize] {
        &self.boundary[1]
    }

    pub fn boundary_bottom(&self) -> &[usize] {
        &self.boundary[2]
    }

    pub fn boundary_top(&self) -> &[usize] {
        &self.boundary[3]
    }

    /// Every vertex on at least one side of the box.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary_all
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Maximum `|D_v|` over vertices off the box boundary.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    /// Index of `v + (1, 0)` when that vertex is in the box.
    pub fn tilde_index(&self, v: usize) -> Option<usize> {
        self.index_of(self.coords[v].tilde())
    }
}

/// `\bigcup_{v \in set} D_v`.
pub fn neighborhood_union(graph: &FiniteGraph, vertex_set: &[usize]) -> BTreeSet<usize> {
    vertex_set
        .iter()
        .flat_map(|&v| graph.neighbors(v).iter().map(|&u| u as usize))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(g: &FiniteGraph, x: i32, y: i32) -> usize {
        g.index_of(VertexId::new(x, y)).unwrap()
    }

    #[test]
    fn single_vertex_box() {
        let g = build_box(LatticeKind::SquareSite, 1).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.origin(), 0);
    }

    #[test]
    fn chess_board_two_by_two() {
        let g = build_box(LatticeKind::ChessBoard, 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        let a = g.adjacency();
        assert!(a.contains(id(&g, 0, 0), id(&g, 1, 1)));
        assert!(a.contains(id(&g, 0, 1), id(&g, 1, 0)));
    }

    #[test]
    fn star_square_interior_degree() {
        let g = build_box(LatticeKind::StarSquareSite, 3).unwrap();
        assert_eq!(g.neighbors(id(&g, 1, 1)).len(), 8);
        assert_eq!(g.degree(), 8);
    }

    #[test]
    fn rejects_empty_box() {
        for kind in LatticeKind::ALL {
            assert!(matches!(
                build_box(kind, 0),
                Err(Error::InvalidSide { .. })
            ));
        }
        assert!(build_box(LatticeKind::TriangularBondCovering, 1).is_err());
        assert!("hexagonal".parse::<LatticeKind>().is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in LatticeKind::ALL {
            assert_eq!(kind.name().parse::<LatticeKind>().unwrap(), kind);
        }
    }

    #[test]
    fn matching_pairs() {
        use LatticeKind::*;
        assert_eq!(matching_of(TriangularSite).unwrap(), TriangularSite);
        assert_eq!(matching_of(SquareSite).unwrap(), StarSquareSite);
        assert_eq!(matching_of(StarHoneycombSite).unwrap(), HoneycombSite);
        assert_eq!(matching_of(HoneycombSite).unwrap(), StarHoneycombSite);
        assert!(matches!(
            matching_of(TriangularBondCovering),
            Err(Error::UnsupportedMatching(_))
        ));
        for kind in LatticeKind::ALL {
            if let Ok(m) = matching_of(kind) {
                assert_eq!(matching_of(m).unwrap(), kind);
            }
        }
    }

    #[test]
    fn tilde_translates() {
        assert_eq!(tilde(VertexId::new(0, 0)), VertexId::new(1, 0));
        assert_eq!(tilde(VertexId::new(-1, 5)), VertexId::new(0, 5));
    }

    #[test]
    fn neighborhood_union_examples() {
        let g = build_box(LatticeKind::StarSquareSite, 5).unwrap();
        assert!(neighborhood_union(&g, &[]).is_empty());
        assert_eq!(neighborhood_union(&g, &[id(&g, 2, 2)]).len(), 8);

        let g = build_box(LatticeKind::SquareSite, 5).unwrap();
        let pair = [id(&g, 2, 2), id(&g, 3, 2)];
        let union = neighborhood_union(&g, &pair);
        // 4 + 4 neighbours, no common one; each site lies in the other's D_v.
        assert_eq!(union.len(), 8);
        assert!(union.contains(&pair[0]) && union.contains(&pair[1]));
        assert_eq!(union.iter().filter(|v| !pair.contains(v)).count(), 6);
    }

    #[test]
    fn adjacency_is_symmetric_and_simple() {
        for kind in LatticeKind::ALL {
            for side in kind.min_side()..=16 {
                let g = build_box(kind, side).unwrap();
                for adj in [Some(g.adjacency()), g.matching_adjacency()]
                    .into_iter()
                    .flatten()
                {
                    for v in 0..g.vertex_count() {
                        let nbrs = adj.neighbors(v);
                        assert!(nbrs.windows(2).all(|w| w[0] < w[1]), "{kind} dup");
                        for &u in nbrs {
                            assert_ne!(u as usize, v, "{kind} self-loop");
                            assert!(adj.contains(u as usize, v), "{kind} L={side}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interior_degree_is_constant() {
        for kind in LatticeKind::ALL {
            let g = build_box(kind, 12).unwrap();
            assert_eq!(g.degree(), kind.bulk_degree(), "{kind}");
            for v in 0..g.vertex_count() {
                let deg = g.neighbors(v).len();
                assert!(deg <= kind.bulk_degree());
                let p = g.vertex(v);
                let deep = if kind.is_square_coordinate() {
                    (2..10).contains(&p.x) && (2..10).contains(&p.y)
                } else {
                    (4..18).contains(&p.x) && (4..18).contains(&p.y)
                };
                if deep {
                    assert_eq!(deg, kind.bulk_degree(), "{kind} at {p}");
                }
            }
        }
    }

    #[test]
    fn dense_index_round_trips() {
        for kind in LatticeKind::ALL {
            let g = build_box(kind, 7).unwrap();
            for v in 0..g.vertex_count() {
                assert_eq!(g.index_of(g.vertex(v)), Some(v));
            }
            if kind.is_square_coordinate() {
                assert_eq!(g.vertex_count(), 49);
                assert_eq!(g.vertex(g.origin()), VertexId::new(3, 3));
            }
        }
    }

    #[test]
    fn chess_board_edge_rule() {
        for side in 1..=16 {
            let g = build_box(LatticeKind::ChessBoard, side).unwrap();
            let l = side as i32;
            let inside = |x: i32, y: i32| (0..l).contains(&x) && (0..l).contains(&y);
            let mut expected = BTreeSet::new();
            for y in 0..l {
                for x in 0..l {
                    let mut push = |dx: i32, dy: i32| {
                        if inside(x + dx, y + dy) {
                            let a = VertexId::new(x, y);
                            let b = VertexId::new(x + dx, y + dy);
                            expected.insert((a.min(b), a.max(b)));
                        }
                    };
                    push(1, 0);
                    push(0, 1);
                    if (x + y) % 2 == 0 {
                        push(1, 1);
                    } else {
                        push(1, -1);
                    }
                }
            }
            let mut actual = BTreeSet::new();
            for v in 0..g.vertex_count() {
                assert!(g.neighbors(v).len() <= 6);
                for &u in g.neighbors(v) {
                    let (a, b) = (g.vertex(v), g.vertex(u as usize));
                    actual.insert((a.min(b), a.max(b)));
                }
            }
            assert_eq!(actual, expected, "L={side}");
        }
    }

    #[test]
    fn square_is_subgraph_of_star() {
        for side in 1..=16 {
            let sq = build_box(LatticeKind::SquareSite, side).unwrap();
            let star = build_box(LatticeKind::StarSquareSite, side).unwrap();
            for v in 0..sq.vertex_count() {
                for &u in sq.neighbors(v) {
                    assert!(star.adjacency().contains(v, u as usize));
                }
            }
            assert_eq!(sq.matching_adjacency().unwrap(), star.adjacency());
        }
    }

    #[test]
    fn triangular_is_self_matching() {
        let g = build_box(LatticeKind::TriangularSite, 9).unwrap();
        assert_eq!(g.matching_adjacency().unwrap(), g.adjacency());
    }

    #[test]
    fn chess_board_matching_is_translate() {
        let g = build_box(LatticeKind::ChessBoard, 9).unwrap();
        let m = g.matching_adjacency().unwrap();
        for v in 0..g.vertex_count() {
            for &u in g.neighbors(v) {
                if let (Some(tv), Some(tu)) = (g.tilde_index(v), g.tilde_index(u as usize)) {
                    assert!(m.contains(tv, tu));
                }
            }
        }
        // Not a subgraph of its matching graph: the diagonals differ.
        let o = id(&g, 4, 4);
        let diag = id(&g, 5, 5);
        assert!(g.adjacency().contains(o, diag));
        assert!(!m.contains(o, diag));
    }

    /// Faces of the brick-wall honeycomb found as 6-cycles; two vertices are
    /// star-adjacent iff they share one.
    #[test]
    fn star_honeycomb_is_face_closure_of_honeycomb() {
        let side = 10;
        let hex = build_box(LatticeKind::HoneycombSite, side).unwrap();
        let star = build_box(LatticeKind::StarHoneycombSite, side).unwrap();
        let n = hex.vertex_count();
        let mut face_pairs = BTreeSet::new();
        // Depth-limited search for simple 6-cycles through each vertex.
        fn extend(
            g: &FiniteGraph,
            path: &mut Vec<usize>,
            out: &mut BTreeSet<(usize, usize)>,
        ) {
            let last = *path.last().unwrap();
            if path.len() == 6 {
                if g.adjacency().contains(last, path[0]) {
                    for &a in path.iter() {
                        for &b in path.iter() {
                            if a != b {
                                out.insert((a, b));
                            }
                        }
                    }
                }
                return;
            }
            for &u in g.neighbors(last) {
                let u = u as usize;
                if !path.contains(&u) {
                    path.push(u);
                    extend(g, path, out);
                    path.pop();
                }
            }
        }
        for v in 0..n {
            extend(&hex, &mut vec![v], &mut face_pairs);
        }
        let deep = |v: usize| {
            let p = hex.vertex(v);
            (2..side as i32 - 2).contains(&p.x) && (2..side as i32 - 2).contains(&p.y)
        };
        for v in (0..n).filter(|&v| deep(v)) {
            for u in 0..n {
                if u == v {
                    continue;
                }
                assert_eq!(
                    star.adjacency().contains(v, u),
                    face_pairs.contains(&(v, u)),
                    "{} {}",
                    hex.vertex(v),
                    hex.vertex(u)
                );
            }
            for &u in hex.neighbors(v) {
                assert!(star.adjacency().contains(v, u as usize));
            }
        }
        assert_eq!(hex.matching_adjacency().unwrap(), star.adjacency());
        assert_eq!(star.matching_adjacency().unwrap(), hex.adjacency());
    }

    #[test]
    fn triangular_covering_structure() {
        let g = build_box(LatticeKind::TriangularBondCovering, 2).unwrap();
        // Three edges of one triangle pair: 2 horizontal, 2 vertical, 1 diagonal.
        assert_eq!(g.vertex_count(), 5);
        let g = build_box(LatticeKind::TriangularBondCovering, 8).unwrap();
        assert_eq!(g.vertex_count(), 2 * 8 * 7 + 7 * 7);
        let o = g.vertex(g.origin());
        assert_eq!((o.x % 2, o.y % 2), (1, 0), "origin is a horizontal edge");
    }
}
