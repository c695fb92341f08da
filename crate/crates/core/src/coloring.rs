//! Red colourings built from `(X, Y)` and exact checks of their laws.
//!
//! The tilde colouring marks `v` red when `X_v = 1` and `Y_{v+(1,0)} = 0`.
//! The neighbourhood colouring marks `v` red when `X_v = 1` and `Y` vanishes
//! on all of `D_v`.
//!
//! Conditional probabilities given a red pattern on `F` are computed exactly.
//! Given `Y`, the `R_u` are independent with `P(R_u = 1 | Y) = p 1[A_u]`,
//! where `A_u` is the event that `Y` vanishes on `D_u`. Expanding the factors
//! with `r_u = 0` as `1 - p 1[A_u]` leaves a signed sum over subsets of those
//! vertices, each term a power of `1 - delta`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::catastrophe::{InfinityProxy, Labeler};
use crate::circuits::{Circuit, CircuitFinder};
use crate::config::Config;
use crate::error::{check_probability, Error, Result};
use crate::lattice::{AdjacencyKind, FiniteGraph, VertexId};
use crate::pipeline::{sdp_sample, Estimate, Params, SdpSample, TrialWorkspace};
use crate::rng::{FieldStream, FieldTag};

/// Largest conditioning set accepted by the exact checks.
pub const MAX_PATTERN_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RedVariant {
    Tilde,
    Neighborhood,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedConfig {
    pub bits: Config,
    pub variant: RedVariant,
}

/// `R_v = X_v AND NOT Y_{v+(1,0)}`. Vertices whose image leaves the box are
/// never red.
pub fn red_tilde(graph: &FiniteGraph, x: &Config, y: &Config) -> Result<RedConfig> {
    if !graph.kind().has_tilde_map() {
        return Err(Error::NoTildeMap(graph.kind()));
    }
    x.check_graph(graph)?;
    y.check_graph(graph)?;
    let bits = Config::from_fn(graph, |v| {
        x.get(v) && graph.tilde_index(v).is_some_and(|t| !y.get(t))
    });
    Ok(RedConfig {
        bits,
        variant: RedVariant::Tilde,
    })
}

/// `R_v = X_v AND (Y_u = 0 for all u in D_v)`, with the clipped `D_v` on the
/// boundary.
pub fn red_neighborhood(graph: &FiniteGraph, x: &Config, y: &Config) -> Result<RedConfig> {
    x.check_graph(graph)?;
    y.check_graph(graph)?;
    let bits = Config::from_fn(graph, |v| {
        x.get(v) && graph.neighbors(v).iter().all(|&u| !y.get(u as usize))
    });
    Ok(RedConfig {
        bits,
        variant: RedVariant::Neighborhood,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaConstant {
    pub epsilon: f64,
    pub p_c_value: f64,
    pub d: usize,
    pub c_epsilon: f64,
}

/// `c = 1 / ((1 - p_c) epsilon^d)`.
pub fn lemma_constant(epsilon: f64, p_c_value: f64, d: usize) -> Result<LemmaConstant> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1]",
        });
    }
    if !(p_c_value > 0.0 && p_c_value < 1.0) {
        return Err(Error::OutOfRange {
            name: "p_c",
            value: p_c_value,
            range: "(0, 1)",
        });
    }
    Ok(LemmaConstant {
        epsilon,
        p_c_value,
        d,
        c_epsilon: 1.0 / ((1.0 - p_c_value) * epsilon.powi(d as i32)),
    })
}

impl LemmaConstant {
    /// The i.i.d. density the red field dominates: `p (1 - d c delta)`.
    pub fn dominated_density(&self, p: f64, delta: f64) -> f64 {
        p * (1.0 - self.d as f64 * self.c_epsilon * delta)
    }
}

/// Exact masses of red patterns on `F`.
struct PatternLaw<'a> {
    graph: &'a FiniteGraph,
    p: f64,
    delta: f64,
}

impl PatternLaw<'_> {
    /// `P(R_F = pattern, Y = 0 on zero_sites, Y_one = 1)`.
    fn mass(&self, f: &[usize], pattern: &[bool], zero_sites: &[usize], one: Option<usize>) -> f64 {
        let n = self.graph.vertex_count();
        let mut base = vec![false; n];
        for &w in zero_sites {
            base[w] = true;
        }
        let mut ones = 0;
        for (&u, &r) in f.iter().zip(pattern) {
            if r {
                ones += 1;
                for &w in self.graph.neighbors(u) {
                    base[w as usize] = true;
                }
            }
        }
        let zeros: Vec<usize> = f
            .iter()
            .zip(pattern)
            .filter(|(_, &r)| !r)
            .map(|(&u, _)| u)
            .collect();
        let mut total = 0.0;
        let mut covered = base.clone();
        for subset in 0u32..(1 << zeros.len()) {
            covered.copy_from_slice(&base);
            for (i, &u) in zeros.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    for &w in self.graph.neighbors(u) {
                        covered[w as usize] = true;
                    }
                }
            }
            if one.is_some_and(|v| covered[v]) {
                continue;
            }
            let size = covered.iter().filter(|&&c| c).count() as i32;
            let mut term = (1.0 - self.delta).powi(size);
            if one.is_some() {
                term *= self.delta;
            }
            let k = subset.count_ones() as i32;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * self.p.powi(k) * term;
        }
        total * self.p.powi(ones)
    }
}

fn check_pattern(graph: &FiniteGraph, f: &[usize], pattern: &[bool]) -> Result<()> {
    if f.len() != pattern.len() {
        return Err(Error::Malformed(format!(
            "{} vertices but {} pattern bits",
            f.len(),
            pattern.len()
        )));
    }
    if f.len() > MAX_PATTERN_SIZE {
        return Err(Error::TooLarge(format!(
            "|F| = {}, the limit is {MAX_PATTERN_SIZE}",
            f.len()
        )));
    }
    let n = graph.vertex_count();
    if f.iter().any(|&u| u >= n) {
        return Err(Error::Malformed("vertex outside the box".into()));
    }
    let mut sorted = f.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != f.len() {
        return Err(Error::Malformed("repeated vertex in F".into()));
    }
    Ok(())
}

/// `P(R_F = pattern)` and `P(Y_v = 1, R_F = pattern)` under the
/// neighbourhood colouring.
pub fn lemma_masses(
    graph: &FiniteGraph,
    v: usize,
    f: &[usize],
    pattern: &[bool],
    p: f64,
    delta: f64,
) -> Result<(f64, f64)> {
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    check_pattern(graph, f, pattern)?;
    if v >= graph.vertex_count() {
        return Err(Error::Malformed("vertex outside the box".into()));
    }
    let law = PatternLaw { graph, p, delta };
    Ok((law.mass(f, pattern, &[], None), law.mass(f, pattern, &[], Some(v))))
}

/// Vertices within Chebyshev distance `radius` of a centre, taken as
/// conditioning sets of size `1..=max_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchSpec {
    pub radius: i32,
    pub max_size: usize,
    pub include_center: bool,
}

impl PatchSpec {
    /// Every conditioning set of the patch, in lexicographic order of vertex
    /// index.
    pub fn sets(&self, graph: &FiniteGraph, center: usize) -> Result<Vec<Vec<usize>>> {
        if self.max_size > MAX_PATTERN_SIZE {
            return Err(Error::TooLarge(format!(
                "patch sets of size {}, the limit is {MAX_PATTERN_SIZE}",
                self.max_size
            )));
        }
        let c = graph.vertex(center);
        let candidates: Vec<usize> = (0..graph.vertex_count())
            .filter(|&u| {
                let w = graph.vertex(u);
                (u != center || self.include_center)
                    && (w.x - c.x).abs() <= self.radius
                    && (w.y - c.y).abs() <= self.radius
            })
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::new();
        subsets(&candidates, 0, self.max_size, &mut current, &mut out);
        Ok(out)
    }
}

impl fmt::Display for PatchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "radius={},size={},center={}",
            self.radius, self.max_size, self.include_center
        )
    }
}

/// Parses `radius=R,size=K[,center=BOOL]`.
impl FromStr for PatchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad patch spec `{s}`"));
        let mut radius = None;
        let mut size = None;
        let mut center = false;
        for part in s.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "radius" => radius = Some(value.trim().parse().map_err(|_| bad())?),
                "size" => size = Some(value.trim().parse().map_err(|_| bad())?),
                "center" => center = value.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Ok(PatchSpec {
            radius: radius.ok_or_else(bad)?,
            max_size: size.ok_or_else(bad)?,
            include_center: center,
        })
    }
}

fn subsets(pool: &[usize], start: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    if current.len() == max {
        return;
    }
    for i in start..pool.len() {
        current.push(pool[i]);
        subsets(pool, i + 1, max, current, out);
        current.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Pass,
    Fail,
    ZeroProbability,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::ZeroProbability => "zero-probability",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub f: Vec<VertexId>,
    pub pattern: Vec<bool>,
    pub pattern_probability: f64,
    /// `P(Y_v = 1 | pattern)`; NaN for zero-probability patterns.
    pub conditional: f64,
    /// `c delta`.
    pub bound: f64,
    /// `delta / ((1 - delta) (1 - p)^d)`.
    pub fine_bound: f64,
    pub ratio: f64,
    /// Some `u` in `D_v` is red in the pattern.
    pub forced_zero: bool,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub constant: LemmaConstant,
    pub rows: Vec<LemmaRow>,
    pub max_ratio: f64,
    /// Rows exceeding `c delta` or the fine bound.
    pub violations: usize,
    /// Rows with a red vertex in `D_v` whose conditional is not exactly 0.
    pub forced_zero_violations: usize,
}

fn check_lemma_hypotheses(p: f64, delta: f64, constant: &LemmaConstant) -> Result<()> {
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    let pc = constant.p_c_value;
    if !(delta > 0.0 && delta <= pc) {
        return Err(Error::Hypothesis(format!("need 0 < delta <= p_c = {pc}, got {delta}")));
    }
    let top = 1.0 - constant.epsilon;
    if !(p > pc && p < top) {
        return Err(Error::Hypothesis(format!(
            "need p_c = {pc} < p < 1 - epsilon = {top}, got {p}"
        )));
    }
    Ok(())
}

fn pattern_bits(k: usize, mask: u32) -> Vec<bool> {
    (0..k).map(|i| mask >> i & 1 == 1).collect()
}

fn lemma_rows(
    graph: &FiniteGraph,
    v: usize,
    f: &[usize],
    p: f64,
    delta: f64,
    constant: &LemmaConstant,
) -> Result<Vec<LemmaRow>> {
    check_pattern(graph, f, &vec![false; f.len()])?;
    let law = PatternLaw { graph, p, delta };
    let bound = constant.c_epsilon * delta;
    let fine_bound = delta / ((1.0 - delta) * (1.0 - p).powi(constant.d as i32));
    let coords: Vec<VertexId> = f.iter().map(|&u| graph.vertex(u)).collect();
    let mut rows = Vec::with_capacity(1 << f.len());
    for mask in 0u32..(1 << f.len()) {
        let pattern = pattern_bits(f.len(), mask);
        let forced_zero = f
            .iter()
            .zip(&pattern)
            .any(|(&u, &r)| r && graph.adjacency().contains(v, u));
        let marginal = law.mass(f, &pattern, &[], None);
        let (conditional, ratio, status) = if marginal > 0.0 {
            let c = law.mass(f, &pattern, &[], Some(v)) / marginal;
            let ok = c <= bound && c <= fine_bound * (1.0 + 1e-12);
            (c, c / bound, if ok { RowStatus::Pass } else { RowStatus::Fail })
        } else {
            (f64::NAN, f64::NAN, RowStatus::ZeroProbability)
        };
        rows.push(LemmaRow {
            f: coords.clone(),
            pattern,
            pattern_probability: marginal,
            conditional,
            bound,
            fine_bound,
            ratio,
            forced_zero,
            status,
        });
    }
    Ok(rows)
}

fn summarize(constant: LemmaConstant, rows: Vec<LemmaRow>) -> LemmaReport {
    let max_ratio = rows
        .iter()
        .filter(|r| r.status != RowStatus::ZeroProbability)
        .map(|r| r.ratio)
        .fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| r.status == RowStatus::Fail).count();
    let forced_zero_violations = rows
        .iter()
        .filter(|r| r.forced_zero && r.status != RowStatus::ZeroProbability && r.conditional != 0.0)
        .count();
    LemmaReport {
        constant,
        rows,
        max_ratio,
        violations,
        forced_zero_violations,
    }
}

/// Exact `P(Y_v = 1 | R_u = r_u, u in F)` against `c delta` for every
/// pattern on `F`.
pub fn verify_lemma_bound(
    graph: &FiniteGraph,
    v: usize,
    f: &[usize],
    p: f64,
    delta: f64,
    constant: &LemmaConstant,
) -> Result<LemmaReport> {
    check_lemma_hypotheses(p, delta, constant)?;
    Ok(summarize(*constant, lemma_rows(graph, v, f, p, delta, constant)?))
}

/// [`verify_lemma_bound`] over every conditioning set of a patch.
pub fn verify_lemma_patch(
    graph: &FiniteGraph,
    v: usize,
    patch: &PatchSpec,
    p: f64,
    delta: f64,
    constant: &LemmaConstant,
) -> Result<LemmaReport> {
    check_lemma_hypotheses(p, delta, constant)?;
    let sets = patch.sets(graph, v)?;
    let rows: Vec<Vec<LemmaRow>> = sets
        .par_iter()
        .map(|f| lemma_rows(graph, v, f, p, delta, constant))
        .collect::<Result<_>>()?;
    Ok(summarize(*constant, rows.into_iter().flatten().collect()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationRow {
    pub f: Vec<VertexId>,
    pub pattern: Vec<bool>,
    pub pattern_probability: f64,
    /// `P(R_v = 1 | pattern)`; NaN for zero-probability patterns.
    pub conditional: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationPatchReport {
    /// `p (1 - d c delta)`.
    pub reference: f64,
    pub rows: Vec<DominationRow>,
    pub min_conditional: f64,
    pub violations: usize,
}

fn check_regime(p: f64, delta: f64, constant: &LemmaConstant, enforce: bool) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("delta", delta)?;
    let q = constant.dominated_density(p, delta);
    if enforce && q <= constant.p_c_value {
        return Err(Error::Hypothesis(format!(
            "p (1 - d c delta) = {q} does not exceed p_c = {}",
            constant.p_c_value
        )));
    }
    Ok(q)
}

/// Exact `P(R_v = 1 | R_F = pattern)` against `p (1 - d c delta)` for every
/// pattern on every conditioning set of the patch. The centre is never part
/// of `F`.
pub fn verify_domination_patch(
    graph: &FiniteGraph,
    v: usize,
    patch: &PatchSpec,
    p: f64,
    delta: f64,
    constant: &LemmaConstant,
    enforce_regime: bool,
) -> Result<DominationPatchReport> {
    let reference = check_regime(p, delta, constant, enforce_regime)?;
    let patch = PatchSpec {
        include_center: false,
        ..*patch
    };
    let d_v: Vec<usize> = graph.neighbors(v).iter().map(|&u| u as usize).collect();
    let law = PatternLaw { graph, p, delta };
    let sets = patch.sets(graph, v)?;
    let rows: Vec<Vec<DominationRow>> = sets
        .par_iter()
        .map(|f| {
            let coords: Vec<VertexId> = f.iter().map(|&u| graph.vertex(u)).collect();
            (0u32..(1 << f.len()))
                .map(|mask| {
                    let pattern = pattern_bits(f.len(), mask);
                    let marginal = law.mass(f, &pattern, &[], None);
                    let (conditional, status) = if marginal > 0.0 {
                        let c = p * law.mass(f, &pattern, &d_v, None) / marginal;
                        let ok = c >= reference * (1.0 - 1e-12);
                        (c, if ok { RowStatus::Pass } else { RowStatus::Fail })
                    } else {
                        (f64::NAN, RowStatus::ZeroProbability)
                    };
                    DominationRow {
                        f: coords.clone(),
                        pattern,
                        pattern_probability: marginal,
                        conditional,
                        status,
                    }
                })
                .collect()
        })
        .collect();
    let rows: Vec<DominationRow> = rows.into_iter().flatten().collect();
    let min_conditional = rows
        .iter()
        .filter(|r| r.status != RowStatus::ZeroProbability)
        .map(|r| r.conditional)
        .fold(f64::INFINITY, f64::min);
    let violations = rows.iter().filter(|r| r.status == RowStatus::Fail).count();
    Ok(DominationPatchReport {
        reference,
        rows,
        min_conditional,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationSpanning {
    /// `p (1 - d c delta)`.
    pub reference_density: f64,
    /// Left-right crossing frequency of the neighbourhood red field.
    pub red: Estimate,
    /// Same for an i.i.d. field at `reference_density`.
    pub reference: Estimate,
    /// `red >= reference - 3 sigma` with the combined standard error.
    pub pass: bool,
}

/// Crossing frequency of the red field against the i.i.d. field it should
/// dominate, with matched box and trial count. The reference field comes from
/// its own stream.
pub fn verify_domination_spanning(
    graph: &FiniteGraph,
    params: &Params,
    constant: &LemmaConstant,
    enforce_regime: bool,
) -> Result<DominationSpanning> {
    params.validate()?;
    let q = check_regime(params.p, params.delta, constant, enforce_regime)?;
    let q_field = q.max(0.0);
    let n = graph.vertex_count();
    let outcomes: Vec<(bool, bool)> = (0..params.trials)
        .into_par_iter()
        .map_init(
            || (TrialWorkspace::new(graph), Labeler::new(), vec![false; n], vec![0.0; n]),
            |(ws, labeler, bits, uniforms), t| {
                ws.draw_occupation(params.seed, t);
                ws.draw_enhancement(params.seed, t);
                ws.catastrophe(graph, params.p, InfinityProxy::SpansOpposite);
                let x = ws.x();
                let y = ws.enhancement_uniforms();
                for v in 0..n {
                    bits[v] = x[v]
                        && graph
                            .neighbors(v)
                            .iter()
                            .all(|&u| y[u as usize] >= params.delta);
                }
                labeler.label(graph, bits);
                let red = labeler.spans_left_right(graph, bits);
                FieldStream::new(params.seed, t, FieldTag::Reference).fill(uniforms);
                for v in 0..n {
                    bits[v] = uniforms[v] < q_field;
                }
                labeler.label(graph, bits);
                (red, labeler.spans_left_right(graph, bits))
            },
        )
        .collect();
    let red = Estimate::from_count(
        outcomes.iter().filter(|o| o.0).count() as u64,
        params.trials,
        params.seed,
    );
    let reference = Estimate::from_count(
        outcomes.iter().filter(|o| o.1).count() as u64,
        params.trials,
        params.seed,
    );
    let sigma = (red.stderr.powi(2) + reference.stderr.powi(2)).sqrt();
    Ok(DominationSpanning {
        reference_density: q,
        red,
        reference,
        pass: red.value >= reference.value - 3.0 * sigma,
    })
}

/// Outcome of one blocking check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockingOutcome {
    /// A red circuit inside destroyed `X`-clusters surrounds the origin.
    pub circuit: Option<Circuit>,
    /// Vertices of the blocking set where `Z = 1`.
    pub nonzero: usize,
    /// The blocking set does not surround or contain the origin, so it proves
    /// nothing about the origin.
    pub discarded: bool,
    /// The blocking set is vacant and encloses the origin, yet the origin
    /// still reaches the boundary in `Z`.
    pub leak: bool,
}

impl BlockingOutcome {
    pub fn violated(&self) -> bool {
        self.nonzero > 0 || self.leak
    }
}

/// Red vertices that sit in destroyed `X`-clusters.
fn red_in_destroyed(red: &Config, sample: &SdpSample) -> Vec<bool> {
    (0..red.len())
        .map(|v| red.get(v) && sample.x.get(v) && !sample.x_star.get(v))
        .collect()
}

fn origin_reaches_boundary(graph: &FiniteGraph, z: &Config) -> bool {
    let mut labeler = Labeler::new();
    labeler.label(graph, z.bits());
    labeler.reaches_boundary(z.bits(), graph.origin())
}

/// Tilde mechanism: a red circuit `gamma` in destroyed clusters has a
/// translate `gamma + (1, 0)` in the matching adjacency on which `Z = 0`.
pub fn tilde_blocking(
    graph: &FiniteGraph,
    sample: &SdpSample,
    finder: &mut CircuitFinder,
) -> Result<BlockingOutcome> {
    let red = red_tilde(graph, &sample.x, &sample.y)?;
    let bits = red_in_destroyed(&red.bits, sample);
    let Some(gamma) = finder.find(graph, &bits, AdjacencyKind::Primal, true)? else {
        return Ok(BlockingOutcome::default());
    };
    let shifted = gamma.translate(graph, 1, 0, AdjacencyKind::Matching)?;
    let nonzero = shifted.vertices().iter().filter(|&&w| sample.z.get(w)).count();
    let origin = graph.origin();
    let encloses = shifted.contains(origin) || shifted.surrounds(graph, origin);
    let leak = encloses && nonzero == 0 && origin_reaches_boundary(graph, &sample.z);
    Ok(BlockingOutcome {
        circuit: Some(gamma),
        nonzero,
        discarded: !encloses,
        leak,
    })
}

/// Neighbourhood mechanism: a red circuit `gamma` in destroyed clusters has
/// `Z = 0` on the union of `D_v` over `gamma`, and that union cuts the origin
/// off from the boundary.
pub fn neighborhood_blocking(
    graph: &FiniteGraph,
    sample: &SdpSample,
    finder: &mut CircuitFinder,
) -> Result<BlockingOutcome> {
    let red = red_neighborhood(graph, &sample.x, &sample.y)?;
    let bits = red_in_destroyed(&red.bits, sample);
    let Some(gamma) = finder.find(graph, &bits, AdjacencyKind::Primal, true)? else {
        return Ok(BlockingOutcome::default());
    };
    let big_gamma = crate::lattice::neighborhood_union(graph, gamma.vertices());
    let nonzero = big_gamma.iter().filter(|&&w| sample.z.get(w)).count();
    let leak = nonzero == 0 && origin_reaches_boundary(graph, &sample.z);
    Ok(BlockingOutcome {
        circuit: Some(gamma),
        nonzero,
        discarded: false,
        leak,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockingSurvey {
    pub samples: u64,
    pub circuits: u64,
    pub discarded: u64,
    pub violations: u64,
}

/// Run a blocking check on `params.trials` samples.
pub fn blocking_survey(
    graph: &FiniteGraph,
    params: &Params,
    proxy: InfinityProxy,
    variant: RedVariant,
) -> Result<BlockingSurvey> {
    params.validate()?;
    if variant == RedVariant::Tilde && !graph.kind().has_tilde_map() {
        return Err(Error::NoTildeMap(graph.kind()));
    }
    let outcomes: Vec<BlockingOutcome> = (0..params.trials)
        .into_par_iter()
        .map_init(CircuitFinder::new, |finder, t| {
            let sample = sdp_sample(graph, params, proxy, t)?;
            match variant {
                RedVariant::Tilde => tilde_blocking(graph, &sample, finder),
                RedVariant::Neighborhood => neighborhood_blocking(graph, &sample, finder),
            }
        })
        .collect::<Result<_>>()?;
    let mut survey = BlockingSurvey {
        samples: params.trials,
        ..Default::default()
    };
    for o in &outcomes {
        if o.circuit.is_some() {
            survey.circuits += 1;
        }
        if o.discarded {
            survey.discarded += 1;
        }
        if o.violated() {
            survey.violations += 1;
        }
    }
    Ok(survey)
}
