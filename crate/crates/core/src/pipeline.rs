//! Sampling `Z = X* OR Y` and Monte Carlo estimates of connection events.
//!
//! Trial `t` draws `X` and `Y` from the streams keyed by `(seed, t)`. Fields
//! are produced by thresholding per-vertex uniforms, so every trial is coupled
//! across all values of `p` and `delta`.

use rayon::prelude::*;

use crate::catastrophe::{InfinityProxy, Labeler};
use crate::config::Config;
use crate::error::{check_probability, Error, Result};
use crate::lattice::FiniteGraph;
use crate::rng::{FieldStream, FieldTag};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub p: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: u64,
}

impl Params {
    pub fn new(p: f64, delta: f64, seed: u64, trials: u64) -> Result<Self> {
        let params = Params {
            p,
            delta,
            seed,
            trials,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        check_probability("delta", self.delta)?;
        if self.trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpSample {
    pub x: Config,
    pub x_star: Config,
    pub y: Config,
    pub z: Config,
}

/// Mean of Bernoulli outcomes with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_count(successes: u64, trials: u64, seed: u64) -> Self {
        let value = successes as f64 / trials as f64;
        Estimate {
            value,
            stderr: (value * (1.0 - value) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }
}

/// Each bit is independently 1 with probability `q`.
pub fn sample_field(graph: &FiniteGraph, q: f64, stream: &mut FieldStream) -> Result<Config> {
    check_probability("q", q)?;
    Ok(Config::from_fn(graph, |_| stream.next_uniform() < q))
}

/// Per-worker buffers for one trial at a time.
#[derive(Debug, Clone)]
pub struct TrialWorkspace {
    labeler: Labeler,
    occupation_uniforms: Vec<f64>,
    enhancement_uniforms: Vec<f64>,
    x: Vec<bool>,
    x_star: Vec<bool>,
    z: Vec<bool>,
}

impl TrialWorkspace {
    pub fn new(graph: &FiniteGraph) -> Self {
        let n = graph.vertex_count();
        TrialWorkspace {
            labeler: Labeler::new(),
            occupation_uniforms: vec![0.0; n],
            enhancement_uniforms: vec![0.0; n],
            x: vec![false; n],
            x_star: vec![false; n],
            z: vec![false; n],
        }
    }

    pub fn draw_occupation(&mut self, seed: u64, trial: u64) {
        FieldStream::new(seed, trial, FieldTag::Occupation).fill(&mut self.occupation_uniforms);
    }

    pub fn draw_enhancement(&mut self, seed: u64, trial: u64) {
        FieldStream::new(seed, trial, FieldTag::Enhancement).fill(&mut self.enhancement_uniforms);
    }

    /// Plain percolation at `p` on the drawn occupation field: does some
    /// cluster cross from left to right?
    pub fn occupation_spans(&mut self, graph: &FiniteGraph, p: f64) -> bool {
        for (bit, &u) in self.x.iter_mut().zip(&self.occupation_uniforms) {
            *bit = u < p;
        }
        self.labeler.label(graph, &self.x);
        self.labeler.spans_left_right(graph, &self.x)
    }

    /// Occupy at `p` and compute `X*`.
    pub fn catastrophe(&mut self, graph: &FiniteGraph, p: f64, proxy: InfinityProxy) {
        for (bit, &u) in self.x.iter_mut().zip(&self.occupation_uniforms) {
            *bit = u < p;
        }
        self.labeler.label(graph, &self.x);
        self.labeler.destroy_into(&self.x, proxy, &mut self.x_star);
    }

    /// `Z = X* OR Y` at `delta`, then label `Z`.
    pub fn enhance(&mut self, graph: &FiniteGraph, delta: f64) {
        for ((z, &xs), &u) in self
            .z
            .iter_mut()
            .zip(&self.x_star)
            .zip(&self.enhancement_uniforms)
        {
            *z = xs || u < delta;
        }
        self.labeler.label(graph, &self.z);
    }

    /// Origin joined to the boundary in the labelled `Z`.
    pub fn z_reaches_boundary(&mut self, graph: &FiniteGraph) -> bool {
        self.labeler.reaches_boundary(&self.z, graph.origin())
    }

    /// Some cluster of the labelled `Z` crosses from left to right.
    pub fn z_spans(&mut self, graph: &FiniteGraph) -> bool {
        self.labeler.spans_left_right(graph, &self.z)
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn x_star(&self) -> &[bool] {
        &self.x_star
    }

    pub fn z(&self) -> &[bool] {
        &self.z
    }

    pub fn enhancement_uniforms(&self) -> &[f64] {
        &self.enhancement_uniforms
    }
}

/// The full configuration of trial `trial_index`.
pub fn sdp_sample(
    graph: &FiniteGraph,
    params: &Params,
    proxy: InfinityProxy,
    trial_index: u64,
) -> Result<SdpSample> {
    params.validate()?;
    let mut xs = FieldStream::new(params.seed, trial_index, FieldTag::Occupation);
    let mut ys = FieldStream::new(params.seed, trial_index, FieldTag::Enhancement);
    let x = sample_field(graph, params.p, &mut xs)?;
    let y = sample_field(graph, params.delta, &mut ys)?;
    let x_star = crate::catastrophe::destroy(graph, &x, proxy)?;
    let z = x_star.or(&y)?;
    Ok(SdpSample { x, x_star, y, z })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSummary {
    /// Origin joined to the box boundary in `Z`.
    pub theta: Estimate,
    /// `Z` has a left-right crossing cluster.
    pub spanning: Estimate,
}

/// Both estimates from one pass over the trials. Runs on the current rayon
/// pool; the result does not depend on its size.
pub fn simulate(
    graph: &FiniteGraph,
    params: &Params,
    proxy: InfinityProxy,
) -> Result<SimulationSummary> {
    params.validate()?;
    let outcomes: Vec<(bool, bool)> = (0..params.trials)
        .into_par_iter()
        .map_init(
            || TrialWorkspace::new(graph),
            |ws, t| {
                ws.draw_occupation(params.seed, t);
                ws.draw_enhancement(params.seed, t);
                ws.catastrophe(graph, params.p, proxy);
                ws.enhance(graph, params.delta);
                (ws.z_reaches_boundary(graph), ws.z_spans(graph))
            },
        )
        .collect();
    let theta = outcomes.iter().filter(|o| o.0).count() as u64;
    let spanning = outcomes.iter().filter(|o| o.1).count() as u64;
    Ok(SimulationSummary {
        theta: Estimate::from_count(theta, params.trials, params.seed),
        spanning: Estimate::from_count(spanning, params.trials, params.seed),
    })
}

/// Finite-volume `theta(p, delta)`: origin joined to the boundary in `Z`.
pub fn theta_hat(graph: &FiniteGraph, params: &Params, proxy: InfinityProxy) -> Result<Estimate> {
    Ok(simulate(graph, params, proxy)?.theta)
}

pub fn spanning_hat(
    graph: &FiniteGraph,
    params: &Params,
    proxy: InfinityProxy,
) -> Result<Estimate> {
    Ok(simulate(graph, params, proxy)?.spanning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catastrophe::connects;
    use crate::lattice::{build_box, LatticeKind};

    fn square(side: usize) -> FiniteGraph {
        build_box(LatticeKind::SquareSite, side).unwrap()
    }

    #[test]
    fn degenerate_fields() {
        let g = square(6);
        let mut s = FieldStream::new(1, 0, FieldTag::Occupation);
        assert_eq!(sample_field(&g, 0.0, &mut s).unwrap(), Config::vacant(&g));
        assert_eq!(sample_field(&g, 1.0, &mut s).unwrap(), Config::occupied(&g));
        assert!(sample_field(&g, 1.5, &mut s).is_err());
        assert!(sample_field(&g, -0.1, &mut s).is_err());
    }

    #[test]
    fn fixed_vertex_is_fair_at_one_half() {
        let g = square(64);
        let v = g.origin();
        let trials = 1_000_000u64;
        let hits = (0..trials)
            .filter(|&t| FieldStream::uniform_at(99, t, FieldTag::Occupation, v) < 0.5)
            .count() as f64;
        let mean = hits / trials as f64;
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
        // Same numbers the full-field sampler uses.
        let mut s = FieldStream::new(99, 5, FieldTag::Occupation);
        let field = sample_field(&g, 0.5, &mut s).unwrap();
        assert_eq!(
            field.get(v),
            FieldStream::uniform_at(99, 5, FieldTag::Occupation, v) < 0.5
        );
    }

    #[test]
    fn sample_edge_cases() {
        let g = square(8);
        for t in 0..20 {
            let s = sdp_sample(&g, &Params::new(0.4, 1.0, 3, 1).unwrap(), InfinityProxy::SpansOpposite, t).unwrap();
            assert_eq!(s.z, Config::occupied(&g));
            let s = sdp_sample(&g, &Params::new(1.0, 0.0, 3, 1).unwrap(), InfinityProxy::SpansOpposite, t).unwrap();
            assert_eq!(s.z, Config::vacant(&g));
            let s = sdp_sample(&g, &Params::new(0.0, 0.3, 3, 1).unwrap(), InfinityProxy::SpansOpposite, t).unwrap();
            assert_eq!(s.z, s.y);
        }
    }

    #[test]
    fn sample_invariants_and_reproducibility() {
        let g = build_box(LatticeKind::ChessBoard, 10).unwrap();
        let params = Params::new(0.6, 0.2, 11, 1).unwrap();
        for t in 0..50 {
            let s = sdp_sample(&g, &params, InfinityProxy::SpansOpposite, t).unwrap();
            assert!(s.x_star.le(&s.x).unwrap());
            assert_eq!(s.z, s.x_star.or(&s.y).unwrap());
            assert_eq!(s, sdp_sample(&g, &params, InfinityProxy::SpansOpposite, t).unwrap());
        }
    }

    #[test]
    fn workspace_matches_config_path() {
        let g = build_box(LatticeKind::TriangularSite, 9).unwrap();
        let params = Params::new(0.55, 0.15, 5, 1).unwrap();
        let mut ws = TrialWorkspace::new(&g);
        for t in 0..40 {
            let s = sdp_sample(&g, &params, InfinityProxy::TouchesBoundary, t).unwrap();
            ws.draw_occupation(params.seed, t);
            ws.draw_enhancement(params.seed, t);
            ws.catastrophe(&g, params.p, InfinityProxy::TouchesBoundary);
            ws.enhance(&g, params.delta);
            assert_eq!(ws.z(), s.z.bits());
            let theta = connects(&g, &s.z, &[g.origin()], g.boundary()).unwrap();
            assert_eq!(ws.z_reaches_boundary(&g), theta);
            let span = connects(&g, &s.z, g.boundary_left(), g.boundary_right()).unwrap();
            assert_eq!(ws.z_spans(&g), span);
        }
    }

    #[test]
    fn exact_extremes() {
        let g = square(6);
        let proxy = InfinityProxy::SpansOpposite;
        let full = Params::new(0.3, 1.0, 1, 200).unwrap();
        assert_eq!(theta_hat(&g, &full, proxy).unwrap().value, 1.0);
        assert_eq!(spanning_hat(&g, &full, proxy).unwrap().value, 1.0);
        let empty = Params::new(0.0, 0.0, 1, 200).unwrap();
        assert_eq!(theta_hat(&g, &empty, proxy).unwrap().value, 0.0);
        assert_eq!(spanning_hat(&g, &empty, proxy).unwrap().value, 0.0);
        assert!(Params::new(0.5, 0.5, 1, 0).is_err());
    }

    #[test]
    fn coupled_monotone_in_delta() {
        let g = build_box(LatticeKind::ChessBoard, 16).unwrap();
        let lo = Params::new(0.6, 0.1, 4, 1).unwrap();
        let hi = Params { delta: 0.3, ..lo };
        for t in 0..100 {
            let a = sdp_sample(&g, &lo, InfinityProxy::SpansOpposite, t).unwrap();
            let b = sdp_sample(&g, &hi, InfinityProxy::SpansOpposite, t).unwrap();
            assert!(a.z.le(&b.z).unwrap());
        }
        let mut last = 0.0;
        for delta in [0.0, 0.1, 0.2, 0.3, 0.5, 0.8] {
            let est = theta_hat(&g, &Params { delta, trials: 300, ..lo }, InfinityProxy::SpansOpposite).unwrap();
            assert!(est.value >= last);
            last = est.value;
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let g = build_box(LatticeKind::StarSquareSite, 12).unwrap();
        let params = Params::new(0.5, 0.1, 21, 500).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&g, &params, InfinityProxy::SpansOpposite).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn stderr_is_binomial() {
        let e = Estimate::from_count(30, 100, 0);
        assert_eq!(e.value, 0.3);
        assert!((e.stderr - (0.3f64 * 0.7 / 100.0).sqrt()).abs() < 1e-15);
    }
}
