//! Threshold estimates and bound reports.
//!
//! Under common random numbers every trial has a single threshold: the
//! smallest `p` (or `delta`) at which its crossing event switches on. One pass
//! that occupies sites in increasing order of their uniforms finds it exactly.
//! The empirical crossing curve of a batch is then the distribution function
//! of these thresholds, and the estimate is its 1/2-crossing, located by
//! bisection.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::catastrophe::InfinityProxy;
use crate::coloring::lemma_constant;
use crate::error::{check_probability, Error, Result};
use crate::lattice::{build_box, FiniteGraph, LatticeKind, Sides};
use crate::pipeline::{simulate, Estimate, Params, TrialWorkspace};
use crate::rng::{FieldStream, FieldTag};
use crate::union_find::UnionFind;

/// Bisection steps allowed before giving up.
pub const MAX_BISECTION_STEPS: usize = 60;
/// Probability margin for "strictly supercritical" comparisons.
pub const DEFAULT_MARGIN: f64 = 0.03;

/// Which event defines the crossing curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CrossingEvent {
    /// A left-right crossing cluster.
    #[default]
    Spanning,
    /// The origin joined to the boundary.
    Theta,
}

impl CrossingEvent {
    pub fn name(self) -> &'static str {
        match self {
            CrossingEvent::Spanning => "spanning",
            CrossingEvent::Theta => "theta",
        }
    }
}

impl fmt::Display for CrossingEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrossingEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spanning" => Ok(CrossingEvent::Spanning),
            "theta" => Ok(CrossingEvent::Theta),
            _ => Err(Error::Malformed(format!("unknown crossing event `{s}`"))),
        }
    }
}

/// Adds sites in a given order and reports when the event first holds.
#[derive(Debug, Clone, Default)]
pub struct ThresholdFinder {
    uf: UnionFind,
    sides: Vec<Sides>,
    occupied: Vec<bool>,
    order: Vec<u32>,
}

impl ThresholdFinder {
    pub fn new() -> Self {
        ThresholdFinder::default()
    }

    fn occupy(&mut self, graph: &FiniteGraph, v: usize) -> usize {
        self.occupied[v] = true;
        let mut root = self.uf.find(v);
        self.sides[root] = graph.sides(v);
        for &u in graph.neighbors(v) {
            let u = u as usize;
            if self.occupied[u] {
                let other = self.uf.find(u);
                if other != root {
                    let merged = self.sides[root] | self.sides[other];
                    root = self.uf.union(root, other);
                    self.sides[root] = merged;
                }
            }
        }
        root
    }

    fn holds(&mut self, graph: &FiniteGraph, event: CrossingEvent, root: usize) -> bool {
        match event {
            CrossingEvent::Spanning => self.sides[root].spans_left_right(),
            CrossingEvent::Theta => {
                let o = graph.origin();
                self.occupied[o] && {
                    let r = self.uf.find(o);
                    self.sides[r].any()
                }
            }
        }
    }

    /// Start from the sites in `base`, then add the others in increasing
    /// order of `uniforms`. Returns the uniform of the site whose addition
    /// first makes `event` hold: the event holds at level `q` exactly when
    /// `q` exceeds the result. Returns 0 when `base` alone suffices.
    pub fn threshold(
        &mut self,
        graph: &FiniteGraph,
        base: &[bool],
        uniforms: &[f64],
        event: CrossingEvent,
    ) -> f64 {
        let n = graph.vertex_count();
        self.uf.reset(n);
        self.sides.clear();
        self.sides.resize(n, Sides::NONE);
        self.occupied.clear();
        self.occupied.resize(n, false);
        let mut already = false;
        for (v, &b) in base.iter().enumerate() {
            if b {
                let root = self.occupy(graph, v);
                already |= self.holds(graph, event, root);
            }
        }
        if already {
            return 0.0;
        }
        self.order.clear();
        self.order.extend((0..n as u32).filter(|&v| !base[v as usize]));
        self.order
            .sort_unstable_by(|&a, &b| uniforms[a as usize].total_cmp(&uniforms[b as usize]));
        for i in 0..self.order.len() {
            let v = self.order[i] as usize;
            let root = self.occupy(graph, v);
            if self.holds(graph, event, root) {
                return uniforms[v];
            }
        }
        f64::INFINITY
    }
}

/// Per-trial thresholds in `p` for plain percolation.
pub fn occupation_thresholds(
    graph: &FiniteGraph,
    trials: u64,
    seed: u64,
    event: CrossingEvent,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let n = graph.vertex_count();
    let empty = vec![false; n];
    Ok((0..trials)
        .into_par_iter()
        .map_init(
            || (ThresholdFinder::new(), vec![0.0; n]),
            |(finder, uniforms), t| {
                FieldStream::new(seed, t, FieldTag::Occupation).fill(uniforms);
                finder.threshold(graph, &empty, uniforms, event)
            },
        )
        .collect())
}

/// Per-trial thresholds in `delta` for `Z` at fixed `p`.
pub fn enhancement_thresholds(
    graph: &FiniteGraph,
    p: f64,
    trials: u64,
    seed: u64,
    proxy: InfinityProxy,
    event: CrossingEvent,
) -> Result<Vec<f64>> {
    check_probability("p", p)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    Ok((0..trials)
        .into_par_iter()
        .map_init(
            || (ThresholdFinder::new(), TrialWorkspace::new(graph)),
            |(finder, ws), t| {
                ws.draw_occupation(seed, t);
                ws.draw_enhancement(seed, t);
                ws.catastrophe(graph, p, proxy);
                finder.threshold(graph, ws.x_star(), ws.enhancement_uniforms(), event)
            },
        )
        .collect())
}

/// 1/2-crossing of the empirical curve `q -> #{t < q} / n`. A threshold of 0
/// counts at every level, 0 included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub value: f64,
    pub uncertainty: f64,
    pub bracket: (f64, f64),
    pub steps: usize,
}

/// Bisect the crossing curve of `thresholds` down to a bracket narrower than
/// `tol`. The uncertainty combines half the bracket with the spread of the
/// order statistics one binomial standard error either side of 1/2.
pub fn crossing(thresholds: &[f64], tol: f64) -> Result<Crossing> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    if thresholds.is_empty() {
        return Err(Error::NoTrials);
    }
    let n = thresholds.len();
    let curve = |q: f64| {
        thresholds.iter().filter(|&&t| t < q || t == 0.0).count() as f64 / n as f64
    };
    if curve(0.0) >= 0.5 {
        return Err(Error::BracketFailure("the curve is already above 1/2 at 0".into()));
    }
    if curve(1.0) < 0.5 {
        return Err(Error::BracketFailure("the curve stays below 1/2 at 1".into()));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut steps = 0;
    while hi - lo >= tol {
        if steps == MAX_BISECTION_STEPS {
            return Err(Error::NonConvergence(format!(
                "bracket [{lo}, {hi}] after {steps} steps, tol {tol}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if curve(mid) >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    let mut sorted = thresholds.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let quantile = |level: f64| {
        let k = ((level * n as f64).ceil() as usize).clamp(1, n) - 1;
        sorted[k].min(1.0)
    };
    let spread = 0.5 / (n as f64).sqrt();
    let half_width = 0.5 * (quantile(0.5 + spread) - quantile(0.5 - spread));
    Ok(Crossing {
        value: 0.5 * (lo + hi),
        uncertainty: ((0.5 * tol).powi(2) + half_width.powi(2)).sqrt(),
        bracket: (lo, hi),
        steps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalEstimate {
    pub kind: LatticeKind,
    pub sizes: Vec<usize>,
    pub value: f64,
    pub uncertainty: f64,
    pub bracket: (f64, f64),
    pub trials: u64,
    pub seed: u64,
    pub method: &'static str,
}

const METHOD: &str = "crossing-bisection";

/// `p_c` as the 1/2-crossing of the plain left-right crossing probability.
pub fn estimate_pc(kind: LatticeKind, side: usize, trials: u64, tol: f64, seed: u64) -> Result<CriticalEstimate> {
    let graph = build_box(kind, side)?;
    estimate_pc_on(&graph, trials, tol, seed)
}

pub fn estimate_pc_on(graph: &FiniteGraph, trials: u64, tol: f64, seed: u64) -> Result<CriticalEstimate> {
    let thresholds = occupation_thresholds(graph, trials, seed, CrossingEvent::Spanning)?;
    let c = crossing(&thresholds, tol)?;
    Ok(CriticalEstimate {
        kind: graph.kind(),
        sizes: vec![graph.side()],
        value: c.value,
        uncertainty: c.uncertainty,
        bracket: c.bracket,
        trials,
        seed,
        method: METHOD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub p: f64,
    pub value: f64,
    pub uncertainty: f64,
    pub bracket: (f64, f64),
}

/// `delta_c(p)` as the 1/2-crossing of the `Z` crossing probability in
/// `delta`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_delta_c(
    kind: LatticeKind,
    p: f64,
    side: usize,
    trials: u64,
    tol: f64,
    seed: u64,
    proxy: InfinityProxy,
    event: CrossingEvent,
) -> Result<DeltaEstimate> {
    let graph = build_box(kind, side)?;
    estimate_delta_c_on(&graph, p, trials, tol, seed, proxy, event)
}

pub fn estimate_delta_c_on(
    graph: &FiniteGraph,
    p: f64,
    trials: u64,
    tol: f64,
    seed: u64,
    proxy: InfinityProxy,
    event: CrossingEvent,
) -> Result<DeltaEstimate> {
    let thresholds = enhancement_thresholds(graph, p, trials, seed, proxy, event)?;
    let c = crossing(&thresholds, tol)?;
    Ok(DeltaEstimate {
        p,
        value: c.value,
        uncertainty: c.uncertainty,
        bracket: c.bracket,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCurve {
    pub kind: LatticeKind,
    pub side: usize,
    pub trials: u64,
    pub points: Vec<DeltaEstimate>,
}

#[allow(clippy::too_many_arguments)]
pub fn delta_curve(
    kind: LatticeKind,
    p_grid: &[f64],
    side: usize,
    trials: u64,
    tol: f64,
    seed: u64,
    proxy: InfinityProxy,
    event: CrossingEvent,
) -> Result<DeltaCurve> {
    let graph = build_box(kind, side)?;
    let points = p_grid
        .iter()
        .map(|&p| estimate_delta_c_on(&graph, p, trials, tol, seed, proxy, event))
        .collect::<Result<_>>()?;
    Ok(DeltaCurve {
        kind,
        side,
        trials,
        points,
    })
}

/// How `epsilon` in the lemma constant is chosen for a given `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// `(1 - p) / 2`.
    HalfGap,
    /// `1 - p - margin`.
    Margin(f64),
    Fixed(f64),
}

impl EpsilonPolicy {
    pub fn epsilon(self, p: f64) -> f64 {
        match self {
            EpsilonPolicy::HalfGap => 0.5 * (1.0 - p),
            EpsilonPolicy::Margin(m) => 1.0 - p - m,
            EpsilonPolicy::Fixed(e) => e,
        }
    }
}

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::HalfGap => f.write_str("half-gap"),
            EpsilonPolicy::Margin(m) => write!(f, "margin:{m}"),
            EpsilonPolicy::Fixed(e) => write!(f, "{e}"),
        }
    }
}

impl FromStr for EpsilonPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "half-gap" {
            return Ok(EpsilonPolicy::HalfGap);
        }
        let bad = || Error::Malformed(format!("bad epsilon policy `{s}`"));
        if let Some(m) = s.strip_prefix("margin:") {
            return m.parse().map(EpsilonPolicy::Margin).map_err(|_| bad());
        }
        s.parse().map(EpsilonPolicy::Fixed).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundStatus {
    Pass,
    Fail,
    /// The lower bound already exceeds `p_c`, which caps `delta_c`, so it
    /// cannot hold on this lattice.
    ExpectedFail,
    NotApplicable,
}

impl BoundStatus {
    pub fn name(self) -> &'static str {
        match self {
            BoundStatus::Pass => "pass",
            BoundStatus::Fail => "fail",
            BoundStatus::ExpectedFail => "expected-fail",
            BoundStatus::NotApplicable => "n/a",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            BoundStatus::Pass
        } else {
            BoundStatus::Fail
        }
    }
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    NotDecreasing,
    NotApplicable,
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Decreasing => "decreasing",
            Trend::NotDecreasing => "not-decreasing",
            Trend::NotApplicable => "n/a",
        }
    }
}

/// One `(L, p)` cell of a bound report.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub kind: LatticeKind,
    pub side: usize,
    pub p: f64,
    pub pc: CriticalEstimate,
    pub delta_c: DeltaEstimate,
    /// `(p - p_c) / p`.
    pub square_lower: f64,
    pub square_status: BoundStatus,
    /// `(p - p_c) / (p d c_epsilon)`.
    pub general_lower: f64,
    pub general_status: BoundStatus,
    pub epsilon: f64,
    /// `p_c`.
    pub upper: f64,
    pub upper_status: BoundStatus,
    /// `delta` with `p (1 - delta)` between `p_c + margin` and `p`.
    pub supercritical_delta: Option<f64>,
    pub supercritical_spanning: Option<Estimate>,
    /// Across the sizes of the report, at this `p`.
    pub supercritical_trend: Trend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: LatticeKind,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    pub trials: u64,
    pub tol: f64,
    pub seed: u64,
    pub proxy: InfinityProxy,
    pub event: CrossingEvent,
    pub epsilon: EpsilonPolicy,
    pub margin: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            trials: 2000,
            tol: 1e-3,
            seed: 1,
            proxy: InfinityProxy::SpansOpposite,
            event: CrossingEvent::Spanning,
            epsilon: EpsilonPolicy::HalfGap,
            margin: DEFAULT_MARGIN,
        }
    }
}

/// The lower bound `(p - p_c) / (p d c_epsilon)`; zero when `p <= p_c` and
/// NaN when `epsilon` leaves the range the constant accepts.
fn general_lower_bound(p: f64, pc: f64, d: usize, epsilon: f64) -> f64 {
    if p <= pc {
        return 0.0;
    }
    match lemma_constant(epsilon, pc, d) {
        Ok(c) => (p - pc) / (p * d as f64 * c.c_epsilon),
        Err(_) => f64::NAN,
    }
}

/// Estimate `p_c` and `delta_c(p)` at every size and compare them with the
/// upper bound `p_c`, the two lower bounds and the supercritical decay of
/// the crossing probability.
pub fn bound_report(
    kind: LatticeKind,
    p_grid: &[f64],
    sizes: &[usize],
    options: &BoundOptions,
) -> Result<SweepResult> {
    for &p in p_grid {
        check_probability("p", p)?;
    }
    if sizes.is_empty() || p_grid.is_empty() {
        return Err(Error::Malformed("empty grid".into()));
    }
    let o = options;
    let mut rows = Vec::new();
    for &side in sizes {
        let graph = build_box(kind, side)?;
        let pc = estimate_pc_on(&graph, o.trials, o.tol, o.seed)?;
        let d = graph.degree();
        for &p in p_grid {
            let delta_c = estimate_delta_c_on(&graph, p, o.trials, o.tol, o.seed, o.proxy, o.event)?;
            let combined = (pc.uncertainty.powi(2) + delta_c.uncertainty.powi(2)).sqrt();

            let square_lower = (p - pc.value) / p;
            let square_status = if square_lower > pc.value + 2.0 * combined {
                BoundStatus::ExpectedFail
            } else {
                BoundStatus::from_bool(delta_c.value >= square_lower - 2.0 * combined)
            };

            let epsilon = o.epsilon.epsilon(p);
            let general_lower = general_lower_bound(p, pc.value, d, epsilon);
            let general_status = if general_lower.is_nan() {
                BoundStatus::NotApplicable
            } else {
                BoundStatus::from_bool(delta_c.value >= general_lower - 2.0 * combined)
            };

            let upper_status = BoundStatus::from_bool(delta_c.value <= pc.value + 2.0 * combined);

            let (supercritical_delta, supercritical_spanning) = if p > pc.value + o.margin {
                let delta = 0.5 * (1.0 - (pc.value + o.margin) / p);
                let params = Params::new(p, delta, o.seed, o.trials)?;
                let s = simulate(&graph, &params, o.proxy)?;
                (Some(delta), Some(s.spanning))
            } else {
                (None, None)
            };

            rows.push(BoundRow {
                kind,
                side,
                p,
                pc: pc.clone(),
                delta_c,
                square_lower,
                square_status,
                general_lower,
                general_status,
                epsilon,
                upper: pc.value,
                upper_status,
                supercritical_delta,
                supercritical_spanning,
                supercritical_trend: Trend::NotApplicable,
            });
        }
    }
    for &p in p_grid {
        let mut cells: Vec<&mut BoundRow> = rows.iter_mut().filter(|r| r.p == p).collect();
        cells.sort_by_key(|r| r.side);
        let freqs: Option<Vec<f64>> = cells
            .iter()
            .map(|r| r.supercritical_spanning.map(|e| e.value))
            .collect();
        let trend = match freqs {
            Some(f) if f.len() >= 2 => {
                if f.windows(2).all(|w| w[1] < w[0]) {
                    Trend::Decreasing
                } else {
                    Trend::NotDecreasing
                }
            }
            _ => Trend::NotApplicable,
        };
        for r in cells {
            r.supercritical_trend = trend;
        }
    }
    Ok(SweepResult {
        kind,
        trials: o.trials,
        seed: o.seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn occupation_threshold_is_the_switching_point() {
        let g = build_box(LatticeKind::SquareSite, 12).unwrap();
        let thresholds = occupation_thresholds(&g, 40, 3, CrossingEvent::Spanning).unwrap();
        let mut ws = TrialWorkspace::new(&g);
        for (t, &th) in thresholds.iter().enumerate() {
            assert!(th > 0.0 && th < 1.0);
            ws.draw_occupation(3, t as u64);
            assert!(!ws.occupation_spans(&g, th));
            assert!(ws.occupation_spans(&g, th + 1e-12));
        }
    }

    #[test]
    fn enhancement_threshold_is_the_switching_point() {
        let g = build_box(LatticeKind::ChessBoard, 10).unwrap();
        for event in [CrossingEvent::Spanning, CrossingEvent::Theta] {
            let ths = enhancement_thresholds(&g, 0.6, 30, 9, InfinityProxy::SpansOpposite, event)
                .unwrap();
            let mut ws = TrialWorkspace::new(&g);
            for (t, &th) in ths.iter().enumerate() {
                ws.draw_occupation(9, t as u64);
                ws.draw_enhancement(9, t as u64);
                ws.catastrophe(&g, 0.6, InfinityProxy::SpansOpposite);
                let check = |ws: &mut TrialWorkspace, delta: f64| {
                    ws.enhance(&g, delta);
                    match event {
                        CrossingEvent::Spanning => ws.z_spans(&g),
                        CrossingEvent::Theta => ws.z_reaches_boundary(&g),
                    }
                };
                if th > 0.0 {
                    assert!(!check(&mut ws, th), "trial {t} {event}");
                }
                assert!(check(&mut ws, th + 1e-12), "trial {t} {event}");
            }
        }
    }

    #[test]
    fn theta_threshold_zero_when_base_reaches_boundary() {
        let g = build_box(LatticeKind::SquareSite, 3).unwrap();
        let base = Config::occupied(&g);
        let mut finder = ThresholdFinder::new();
        let u = vec![0.5; g.vertex_count()];
        assert_eq!(finder.threshold(&g, base.bits(), &u, CrossingEvent::Theta), 0.0);
        assert_eq!(finder.threshold(&g, base.bits(), &u, CrossingEvent::Spanning), 0.0);
    }

    #[test]
    fn crossing_bisection() {
        let ths: Vec<f64> = (0..100).map(|i| i as f64 / 100.0 + 0.005).collect();
        let c = crossing(&ths, 1e-6).unwrap();
        assert!(c.bracket.1 - c.bracket.0 < 1e-6);
        assert!((c.value - 0.495).abs() < 0.011);
        assert!(c.uncertainty > 0.0);
        assert!(matches!(crossing(&[0.0; 4], 1e-3), Err(Error::BracketFailure(_))));
        assert!(matches!(crossing(&[f64::INFINITY; 4], 1e-3), Err(Error::BracketFailure(_))));
        assert!(matches!(crossing(&ths, 1e-30), Err(Error::NonConvergence(_))));
        assert!(crossing(&ths, 0.0).is_err());
        assert!(matches!(crossing(&[], 0.1), Err(Error::NoTrials)));
    }

    #[test]
    fn crossing_matches_direct_spanning_estimates() {
        let g = build_box(LatticeKind::SquareSite, 16).unwrap();
        let est = estimate_pc_on(&g, 400, 1e-4, 21).unwrap();
        let mut ws = TrialWorkspace::new(&g);
        let count = |ws: &mut TrialWorkspace, p: f64| {
            (0..400u64)
                .filter(|&t| {
                    ws.draw_occupation(21, t);
                    ws.occupation_spans(&g, p)
                })
                .count()
        };
        assert!(count(&mut ws, est.bracket.0) < 200);
        assert!(count(&mut ws, est.bracket.1) >= 200);
    }

    #[test]
    fn square_bond_estimate_near_half() {
        let e = estimate_pc(LatticeKind::ChessBoard, 24, 800, 1e-3, 5).unwrap();
        assert!((e.value - 0.5).abs() < 0.04, "{e:?}");
        assert!(e.uncertainty > 0.0 && e.uncertainty < 0.03);
        assert_eq!(e.method, "crossing-bisection");
    }

    #[test]
    fn delta_c_at_full_occupation_is_site_threshold() {
        // At p = 1 every spanning cluster is removed, so Z = Y.
        let g = build_box(LatticeKind::SquareSite, 16).unwrap();
        let d = estimate_delta_c_on(&g, 1.0, 300, 1e-4, 8, InfinityProxy::SpansOpposite, CrossingEvent::Spanning)
            .unwrap();
        let ths = enhancement_thresholds(&g, 1.0, 300, 8, InfinityProxy::SpansOpposite, CrossingEvent::Spanning)
            .unwrap();
        let mut finder = ThresholdFinder::new();
        let empty = vec![false; g.vertex_count()];
        let mut ws = TrialWorkspace::new(&g);
        for (t, &th) in ths.iter().enumerate() {
            ws.draw_enhancement(8, t as u64);
            let direct = finder.threshold(&g, &empty, ws.enhancement_uniforms(), CrossingEvent::Spanning);
            assert_eq!(th, direct);
        }
        assert!((d.value - 0.59).abs() < 0.05);
    }

    #[test]
    fn epsilon_policies() {
        assert_eq!(EpsilonPolicy::HalfGap.epsilon(0.6), 0.2);
        assert!((EpsilonPolicy::Margin(0.03).epsilon(0.6) - 0.37).abs() < 1e-15);
        assert_eq!("half-gap".parse::<EpsilonPolicy>().unwrap(), EpsilonPolicy::HalfGap);
        assert_eq!("margin:0.03".parse::<EpsilonPolicy>().unwrap(), EpsilonPolicy::Margin(0.03));
        assert_eq!("0.4".parse::<EpsilonPolicy>().unwrap(), EpsilonPolicy::Fixed(0.4));
        assert!("x".parse::<EpsilonPolicy>().is_err());
    }

    #[test]
    fn small_bound_report() {
        let options = BoundOptions {
            trials: 300,
            tol: 1e-3,
            ..Default::default()
        };
        let r = bound_report(LatticeKind::ChessBoard, &[0.7, 1.0], &[12, 16], &options).unwrap();
        assert_eq!(r.rows.len(), 4);
        for row in &r.rows {
            assert_eq!(row.upper, row.pc.value);
            if row.p < 1.0 {
                assert!(row.general_lower >= 0.0 && row.general_lower < 1e-3);
                assert_ne!(row.general_status, BoundStatus::NotApplicable);
            } else {
                assert!(row.general_lower.is_nan());
                assert_eq!(row.general_status, BoundStatus::NotApplicable);
            }
            assert!(row.supercritical_delta.is_some());
            assert_ne!(row.supercritical_trend, Trend::NotApplicable);
        }
        let tri = bound_report(LatticeKind::TriangularBondCovering, &[0.95], &[12], &options).unwrap();
        assert_eq!(tri.rows[0].square_status, BoundStatus::ExpectedFail);
    }
}
