//! Exact probabilities by exhaustive enumeration on tiny boxes.
//!
//! Two routes compute the same numbers. [`enumerate_event`] loops over bit
//! masks and runs the production labelling code on every configuration.
//! [`enumerate_event_recursive`] branches one vertex at a time, prunes
//! zero-weight branches and uses its own depth-first search, so the two share
//! no connectivity code.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::catastrophe::{destroy, InfinityProxy, Labeler};
use crate::config::Config;
use crate::error::{check_probability, Error, Result};
use crate::lattice::{FiniteGraph, Sides};
use crate::pipeline::SdpSample;

/// Largest box (in vertices) the event oracles accept.
pub const MAX_EVENT_VERTICES: usize = 12;
/// Largest number of free bits [`enumerate_conditional`] accepts.
pub const MAX_CONDITIONAL_BITS: usize = 24;

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        CompensatedSum::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub description: String,
    pub probability: f64,
    /// Number of `(X, Y)` configurations the probability sums over.
    pub configurations: u64,
}

/// Events on the final field `Z` that both oracle routes understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZEvent {
    Always,
    /// Origin joined to the box boundary.
    Theta,
    /// Left-right crossing.
    Spanning,
    OriginOccupied,
}

impl ZEvent {
    pub fn name(self) -> &'static str {
        match self {
            ZEvent::Always => "always",
            ZEvent::Theta => "theta",
            ZEvent::Spanning => "spanning",
            ZEvent::OriginOccupied => "origin-occupied",
        }
    }

    /// Evaluate on `z` with the production labeller.
    pub fn holds(self, graph: &FiniteGraph, z: &Config) -> bool {
        let bits = z.bits();
        match self {
            ZEvent::Always => true,
            ZEvent::OriginOccupied => bits[graph.origin()],
            ZEvent::Theta | ZEvent::Spanning => {
                let mut labeler = Labeler::new();
                labeler.label(graph, bits);
                if self == ZEvent::Theta {
                    labeler.reaches_boundary(bits, graph.origin())
                } else {
                    labeler.spans_left_right(graph, bits)
                }
            }
        }
    }
}

impl fmt::Display for ZEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ZEvent::Always,
            ZEvent::Theta,
            ZEvent::Spanning,
            ZEvent::OriginOccupied,
        ]
        .into_iter()
        .find(|e| e.name() == s)
        .ok_or_else(|| Error::Malformed(format!("unknown event `{s}`")))
    }
}

/// `q^k (1-q)^(n-k)` for every `k`, with `0^0 = 1`.
fn power_table(q: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| q.powi(k as i32) * (1.0 - q).powi((n - k) as i32))
        .collect()
}

fn check_event_size(graph: &FiniteGraph) -> Result<()> {
    let n = graph.vertex_count();
    if n > MAX_EVENT_VERTICES {
        return Err(Error::TooLarge(format!(
            "{n} vertices, the limit is {MAX_EVENT_VERTICES}"
        )));
    }
    Ok(())
}

/// Exact `P(event)` under the law of `(X, X*, Y, Z)`.
pub fn enumerate_event<F>(
    graph: &FiniteGraph,
    p: f64,
    delta: f64,
    proxy: InfinityProxy,
    event: F,
    description: &str,
) -> Result<ExactResult>
where
    F: Fn(&SdpSample) -> bool + Sync,
{
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    check_event_size(graph)?;
    let n = graph.vertex_count();
    let wx = power_table(p, n);
    let wy = power_table(delta, n);
    let masks = 1u64 << n;

    let partials: Vec<Result<f64>> = (0..masks)
        .into_par_iter()
        .map(|xm| {
            let weight_x = wx[xm.count_ones() as usize];
            if weight_x == 0.0 {
                return Ok(0.0);
            }
            let x = Config::from_mask(graph, xm);
            let x_star = destroy(graph, &x, proxy)?;
            let mut inner = CompensatedSum::new();
            for ym in 0..masks {
                let weight_y = wy[ym.count_ones() as usize];
                if weight_y == 0.0 {
                    continue;
                }
                let y = Config::from_mask(graph, ym);
                let z = x_star.or(&y)?;
                let sample = SdpSample {
                    x: x.clone(),
                    x_star: x_star.clone(),
                    y,
                    z,
                };
                if event(&sample) {
                    inner.add(weight_y);
                }
            }
            Ok(weight_x * inner.value())
        })
        .collect();

    let mut total = CompensatedSum::new();
    for part in partials {
        total.add(part?);
    }
    Ok(ExactResult {
        description: description.to_string(),
        probability: total.value(),
        configurations: masks * masks,
    })
}

/// [`enumerate_event`] for one of the named events.
pub fn enumerate_z_event(
    graph: &FiniteGraph,
    p: f64,
    delta: f64,
    proxy: InfinityProxy,
    event: ZEvent,
) -> Result<ExactResult> {
    enumerate_event(
        graph,
        p,
        delta,
        proxy,
        |s| event.holds(graph, &s.z),
        event.name(),
    )
}

/// Exact `P(event(X, Y))` for a predicate on the raw fields.
pub fn enumerate_fields<F>(graph: &FiniteGraph, p: f64, delta: f64, event: F) -> Result<ExactResult>
where
    F: Fn(&Config, &Config) -> bool + Sync,
{
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    check_event_size(graph)?;
    let n = graph.vertex_count();
    let wx = power_table(p, n);
    let wy = power_table(delta, n);
    let masks = 1u64 << n;
    let partials: Vec<f64> = (0..masks)
        .into_par_iter()
        .map(|xm| {
            let x = Config::from_mask(graph, xm);
            let inner: CompensatedSum = (0..masks)
                .filter(|&ym| event(&x, &Config::from_mask(graph, ym)))
                .map(|ym| wy[ym.count_ones() as usize])
                .sum();
            wx[xm.count_ones() as usize] * inner.value()
        })
        .collect();
    Ok(ExactResult {
        description: "fields".to_string(),
        probability: partials.into_iter().sum::<CompensatedSum>().value(),
        configurations: masks * masks,
    })
}

struct Recursion<'a> {
    graph: &'a FiniteGraph,
    p: f64,
    delta: f64,
    proxy: InfinityProxy,
    event: ZEvent,
    x: Vec<bool>,
    z: Vec<bool>,
    free: Vec<usize>,
    stack: Vec<usize>,
    seen: Vec<bool>,
    total: CompensatedSum,
    leaves: u64,
}

impl Recursion<'_> {
    /// Flood fill from `start` over `bits`, marking `seen`. Returns the
    /// component and the sides it touches.
    fn component(&mut self, bits: &[bool], start: usize) -> (Vec<usize>, Sides) {
        let mut members = Vec::new();
        let mut sides = Sides::NONE;
        self.seen[start] = true;
        self.stack.push(start);
        while let Some(v) = self.stack.pop() {
            members.push(v);
            sides |= self.graph.sides(v);
            for &u in self.graph.neighbors(v) {
                let u = u as usize;
                if bits[u] && !self.seen[u] {
                    self.seen[u] = true;
                    self.stack.push(u);
                }
            }
        }
        (members, sides)
    }

    fn destroyed(&self, sides: Sides) -> bool {
        let left_right = sides.contains(Sides::LEFT) && sides.contains(Sides::RIGHT);
        let bottom_top = sides.contains(Sides::BOTTOM) && sides.contains(Sides::TOP);
        match self.proxy {
            InfinityProxy::SpansOpposite => left_right || bottom_top,
            InfinityProxy::TouchesBoundary => sides != Sides::NONE,
        }
    }

    fn branch_x(&mut self, i: usize, weight: f64) {
        if weight == 0.0 {
            return;
        }
        let n = self.graph.vertex_count();
        if i < n {
            self.x[i] = true;
            self.branch_x(i + 1, weight * self.p);
            self.x[i] = false;
            self.branch_x(i + 1, weight * (1.0 - self.p));
            return;
        }
        // Surviving X-clusters are fixed in Z; the rest is left to Y.
        self.seen.iter_mut().for_each(|s| *s = false);
        self.z.iter_mut().for_each(|z| *z = false);
        self.free.clear();
        let x = self.x.clone();
        for v in 0..n {
            if x[v] && !self.seen[v] {
                let (members, sides) = self.component(&x, v);
                if !self.destroyed(sides) {
                    for m in members {
                        self.z[m] = true;
                    }
                }
            }
        }
        self.free.extend((0..n).filter(|&v| !self.z[v]));
        self.branch_y(0, weight);
    }

    fn branch_y(&mut self, j: usize, weight: f64) {
        if weight == 0.0 {
            return;
        }
        if j < self.free.len() {
            let v = self.free[j];
            self.z[v] = true;
            self.branch_y(j + 1, weight * self.delta);
            self.z[v] = false;
            self.branch_y(j + 1, weight * (1.0 - self.delta));
            return;
        }
        self.leaves += 1;
        if self.z_event() {
            self.total.add(weight);
        }
    }

    fn z_event(&mut self) -> bool {
        let origin = self.graph.origin();
        match self.event {
            ZEvent::Always => true,
            ZEvent::OriginOccupied => self.z[origin],
            ZEvent::Theta => {
                if !self.z[origin] {
                    return false;
                }
                self.seen.iter_mut().for_each(|s| *s = false);
                let z = self.z.clone();
                let (_, sides) = self.component(&z, origin);
                sides != Sides::NONE
            }
            ZEvent::Spanning => {
                self.seen.iter_mut().for_each(|s| *s = false);
                let z = self.z.clone();
                for &v in self.graph.boundary_left() {
                    if z[v] && !self.seen[v] {
                        let (_, sides) = self.component(&z, v);
                        if sides.contains(Sides::RIGHT) {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }
}

/// The recursive route: same probabilities as [`enumerate_z_event`], computed
/// without the production labeller. `configurations` counts visited leaves.
pub fn enumerate_event_recursive(
    graph: &FiniteGraph,
    p: f64,
    delta: f64,
    proxy: InfinityProxy,
    event: ZEvent,
) -> Result<ExactResult> {
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    check_event_size(graph)?;
    let n = graph.vertex_count();
    let mut rec = Recursion {
        graph,
        p,
        delta,
        proxy,
        event,
        x: vec![false; n],
        z: vec![false; n],
        free: Vec::with_capacity(n),
        stack: Vec::with_capacity(n),
        seen: vec![false; n],
        total: CompensatedSum::new(),
        leaves: 0,
    };
    rec.branch_x(0, 1.0);
    Ok(ExactResult {
        description: event.name().to_string(),
        probability: rec.total.value(),
        configurations: rec.leaves,
    })
}

/// Exact conditional law of `Y_v` given the neighbourhood colouring on `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactConditional {
    /// `P(Y_v = 1, R_u = r_u for u in F)`.
    pub joint: f64,
    /// `P(R_u = r_u for u in F)`.
    pub pattern_probability: f64,
    pub value: f64,
    pub configurations: u64,
}

/// `P(Y_v = 1 | R_u = r_u, u in F)` where `R_u = X_u` and no `Y` on `D_u`.
///
/// Only `X_u` for `u` in `F` and `Y_w` for `w` in `{v}` and the `D_u` matter,
/// so the enumeration runs over those bits alone.
pub fn enumerate_conditional(
    graph: &FiniteGraph,
    v: usize,
    f: &[usize],
    pattern: &[bool],
    p: f64,
    delta: f64,
) -> Result<ExactConditional> {
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    let n = graph.vertex_count();
    if f.len() != pattern.len() {
        return Err(Error::Malformed(format!(
            "{} vertices but {} pattern bits",
            f.len(),
            pattern.len()
        )));
    }
    if v >= n || f.iter().any(|&u| u >= n) {
        return Err(Error::Malformed("vertex outside the box".into()));
    }
    let mut f_sorted = f.to_vec();
    f_sorted.sort_unstable();
    f_sorted.dedup();
    if f_sorted.len() != f.len() {
        return Err(Error::Malformed("repeated vertex in F".into()));
    }

    let mut y_sites: Vec<usize> = vec![v];
    for &u in f {
        y_sites.extend(graph.neighbors(u).iter().map(|&w| w as usize));
    }
    y_sites.sort_unstable();
    y_sites.dedup();
    let bits = f.len() + y_sites.len();
    if bits > MAX_CONDITIONAL_BITS {
        return Err(Error::TooLarge(format!(
            "{bits} free bits, the limit is {MAX_CONDITIONAL_BITS}"
        )));
    }
    let slot = |w: usize| y_sites.binary_search(&w).unwrap();
    let v_slot = slot(v);
    let neighbour_slots: Vec<Vec<usize>> = f
        .iter()
        .map(|&u| graph.neighbors(u).iter().map(|&w| slot(w as usize)).collect())
        .collect();

    let wx = power_table(p, f.len());
    let wy = power_table(delta, y_sites.len());
    let y_masks = 1u64 << y_sites.len();
    let x_masks = 1u64 << f.len();

    let mut joint = CompensatedSum::new();
    let mut marginal = CompensatedSum::new();
    for ym in 0..y_masks {
        let weight_y = wy[ym.count_ones() as usize];
        for xm in 0..x_masks {
            let matches = (0..f.len()).all(|i| {
                let x_u = xm >> i & 1 == 1;
                let y_clear = neighbour_slots[i].iter().all(|&s| ym >> s & 1 == 0);
                (x_u && y_clear) == pattern[i]
            });
            if matches {
                let w = weight_y * wx[xm.count_ones() as usize];
                marginal.add(w);
                if ym >> v_slot & 1 == 1 {
                    joint.add(w);
                }
            }
        }
    }
    let pattern_probability = marginal.value();
    if pattern_probability <= 0.0 {
        return Err(Error::ZeroProbabilityPattern);
    }
    let joint = joint.value();
    Ok(ExactConditional {
        joint,
        pattern_probability,
        value: joint / pattern_probability,
        configurations: x_masks * y_masks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_box, LatticeKind, VertexId};

    const KINDS: [LatticeKind; 2] = [LatticeKind::SquareSite, LatticeKind::ChessBoard];

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-17);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-14).abs() < 1e-24);
    }

    #[test]
    fn total_mass_is_one() {
        for kind in KINDS {
            let g = build_box(kind, 3).unwrap();
            for proxy in [InfinityProxy::SpansOpposite, InfinityProxy::TouchesBoundary] {
                let a = enumerate_z_event(&g, 0.37, 0.81, proxy, ZEvent::Always).unwrap();
                let b = enumerate_event_recursive(&g, 0.37, 0.81, proxy, ZEvent::Always).unwrap();
                assert!((a.probability - 1.0).abs() < 1e-12);
                assert!((b.probability - 1.0).abs() < 1e-12);
                assert_eq!(a.configurations, 1 << 18);
            }
        }
    }

    #[test]
    fn single_vertex_touching_boundary_gives_delta() {
        let g = build_box(LatticeKind::SquareSite, 1).unwrap();
        for (p, delta) in [(0.3, 0.2), (1.0, 0.45), (0.0, 0.9)] {
            let r = enumerate_z_event(&g, p, delta, InfinityProxy::TouchesBoundary, ZEvent::OriginOccupied)
                .unwrap();
            assert!((r.probability - delta).abs() < 1e-15);
        }
    }

    #[test]
    fn routes_agree() {
        for kind in KINDS {
            let g = build_box(kind, 3).unwrap();
            for event in [ZEvent::Theta, ZEvent::Spanning, ZEvent::OriginOccupied] {
                for proxy in [InfinityProxy::SpansOpposite, InfinityProxy::TouchesBoundary] {
                    for (p, delta) in [(0.6, 0.2), (0.3, 0.5), (1.0, 0.0), (0.0, 1.0)] {
                        let a = enumerate_z_event(&g, p, delta, proxy, event).unwrap();
                        let b = enumerate_event_recursive(&g, p, delta, proxy, event).unwrap();
                        assert!(
                            (a.probability - b.probability).abs() < 1e-12,
                            "{kind} {event} {proxy} {p} {delta}: {} vs {}",
                            a.probability,
                            b.probability
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_parameters() {
        let g = build_box(LatticeKind::SquareSite, 3).unwrap();
        let full = |p, d| {
            enumerate_z_event(&g, p, d, InfinityProxy::SpansOpposite, ZEvent::Theta)
                .unwrap()
                .probability
        };
        assert!((full(1.0, 0.0) - 0.0).abs() < 1e-15);
        assert!((full(0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((full(1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta_square_three_by_three() {
        let g = build_box(LatticeKind::SquareSite, 3).unwrap();
        let r = enumerate_z_event(&g, 0.6, 0.2, InfinityProxy::SpansOpposite, ZEvent::Theta).unwrap();
        let s = enumerate_event_recursive(&g, 0.6, 0.2, InfinityProxy::SpansOpposite, ZEvent::Theta)
            .unwrap();
        assert!(r.probability > 0.0 && r.probability < 1.0);
        assert!((r.probability - s.probability).abs() < 1e-12);
        assert!(s.configurations < r.configurations);
    }

    #[test]
    fn generic_event_matches_named_event() {
        let g = build_box(LatticeKind::SquareSite, 2).unwrap();
        let origin = g.origin();
        let generic = enumerate_event(
            &g,
            0.55,
            0.3,
            InfinityProxy::SpansOpposite,
            |s| s.z.get(origin),
            "z at origin",
        )
        .unwrap();
        let named =
            enumerate_event_recursive(&g, 0.55, 0.3, InfinityProxy::SpansOpposite, ZEvent::OriginOccupied)
                .unwrap();
        assert!((generic.probability - named.probability).abs() < 1e-14);
    }

    #[test]
    fn rejects_large_boxes() {
        let g = build_box(LatticeKind::SquareSite, 4).unwrap();
        assert!(matches!(
            enumerate_z_event(&g, 0.5, 0.5, InfinityProxy::SpansOpposite, ZEvent::Always),
            Err(Error::TooLarge(_))
        ));
        assert!(matches!(
            enumerate_event_recursive(&g, 0.5, 0.5, InfinityProxy::SpansOpposite, ZEvent::Always),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn field_enumeration_gives_product_marginals() {
        let g = build_box(LatticeKind::SquareSite, 2).unwrap();
        let r = enumerate_fields(&g, 0.3, 0.6, |x, y| x.get(0) && !y.get(1)).unwrap();
        assert!((r.probability - 0.3 * 0.4).abs() < 1e-15);
    }

    fn star() -> FiniteGraph {
        build_box(LatticeKind::StarSquareSite, 7).unwrap()
    }

    fn at(g: &FiniteGraph, x: i32, y: i32) -> usize {
        g.index_of(VertexId::new(x, y)).unwrap()
    }

    #[test]
    fn conditional_disjoint_from_neighbourhood_is_delta() {
        let g = star();
        let v = at(&g, 3, 3);
        // (6, 6) and (0, 3) are far enough that their D_u miss v.
        let f = [at(&g, 6, 6), at(&g, 0, 3)];
        for pattern in [[false, false], [true, false], [true, true]] {
            let c = enumerate_conditional(&g, v, &f, &pattern, 0.6, 0.1).unwrap();
            assert!((c.value - 0.1).abs() < 1e-14);
        }
    }

    #[test]
    fn red_neighbour_forces_zero() {
        let g = star();
        let v = at(&g, 3, 3);
        let f = [at(&g, 4, 4), at(&g, 2, 3)];
        let c = enumerate_conditional(&g, v, &f, &[true, false], 0.6, 0.1).unwrap();
        assert_eq!(c.joint, 0.0);
        assert_eq!(c.value, 0.0);
    }

    #[test]
    fn all_clear_pattern_obeys_odds_bound() {
        let g = star();
        let v = at(&g, 3, 3);
        let (p, delta) = (0.6, 0.1);
        let f = [at(&g, 4, 4), at(&g, 2, 3), at(&g, 3, 2)];
        let c = enumerate_conditional(&g, v, &f, &[false; 3], p, delta).unwrap();
        let bound = delta / ((1.0 - delta) * (1.0 - p).powi(8));
        assert!(c.value > delta);
        assert!(c.value <= bound);
    }

    #[test]
    fn conditional_single_neighbour_closed_form() {
        // F = {u} with v in D_u and pattern R_u = 0:
        // P(Y_v=1 | R_u=0) = delta / (1 - p (1-delta)^|D_u|).
        let g = star();
        let v = at(&g, 3, 3);
        let u = at(&g, 3, 4);
        let (p, delta) = (0.55, 0.2);
        let c = enumerate_conditional(&g, v, &[u], &[false], p, delta).unwrap();
        let expect = delta / (1.0 - p * (1.0 - delta).powi(8));
        assert!((c.value - expect).abs() < 1e-14);
    }

    #[test]
    fn conditional_reports_zero_probability_patterns() {
        let g = star();
        let v = at(&g, 3, 3);
        let u = at(&g, 4, 4);
        assert_eq!(
            enumerate_conditional(&g, v, &[u], &[true], 0.0, 0.1),
            Err(Error::ZeroProbabilityPattern)
        );
        assert!(matches!(
            enumerate_conditional(&g, v, &[u], &[true, false], 0.5, 0.1),
            Err(Error::Malformed(_))
        ));
    }
}
