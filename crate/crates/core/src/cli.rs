//! The `sdperc` command line.
//!
//! Every subcommand writes one CSV table. The table opens with `# ` comment
//! lines holding the tool version and every resolved setting as `key=value`,
//! which is also the format `--config` reads, then a fixed header row.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use crate::catastrophe::InfinityProxy;
use crate::coloring::{
    lemma_constant, verify_domination_patch, verify_domination_spanning, verify_lemma_patch,
    LemmaConstant, PatchSpec, RowStatus,
};
use crate::error::Error;
use crate::estimator::{
    bound_report, estimate_delta_c_on, estimate_pc_on, BoundOptions, CrossingEvent, EpsilonPolicy,
    DEFAULT_MARGIN,
};
use crate::lattice::{build_box, LatticeKind, VertexId};
use crate::oracle::{enumerate_event_recursive, enumerate_z_event, ZEvent};
use crate::pipeline::{simulate, Params};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const SUBCOMMANDS: [&str; 8] = [
    "simulate",
    "sweep",
    "estimate-pc",
    "estimate-deltac",
    "bound-report",
    "verify-lemma",
    "verify-domination",
    "oracle",
];
const SWITCHES: [&str; 1] = ["allow-outside-regime"];

#[derive(Debug, Parser)]
#[command(name = "sdperc", version, about = "Self-destructive percolation on 2D lattices")]
pub struct Cli {
    /// File of key=value lines; flags on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate theta and the crossing probability at one (p, delta).
    Simulate(SimulateArgs),
    /// `simulate` over a grid, all cells on the same seed.
    Sweep(SweepArgs),
    /// Critical occupation probability from the crossing curve.
    EstimatePc(EstimatePcArgs),
    /// Critical enhancement delta_c(p) from the crossing curve.
    EstimateDeltac(EstimateDeltacArgs),
    /// delta_c against its upper and lower bounds.
    BoundReport(BoundReportArgs),
    /// Exact conditional law of Y_v given red patterns near v.
    VerifyLemma(VerifyLemmaArgs),
    /// Exact and Monte Carlo checks that the red field dominates an i.i.d. one.
    VerifyDomination(VerifyDominationArgs),
    /// Exact probability of a Z event on a tiny box.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L")]
    pub side: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "infinity-proxy", default_value = "spans")]
    pub proxy: InfinityProxy,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "p-grid", value_delimiter = ',', required = true)]
    pub p_grid: Vec<f64>,
    #[arg(long = "delta-grid", value_delimiter = ',', required = true)]
    pub delta_grid: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "infinity-proxy", default_value = "spans")]
    pub proxy: InfinityProxy,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatePcArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Bisection stops once the bracket is narrower than this.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateDeltacArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "p-grid", alias = "p", value_delimiter = ',', required = true)]
    pub p_grid: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "infinity-proxy", default_value = "spans")]
    pub proxy: InfinityProxy,
    /// Event whose crossing curve is bisected: spanning or theta.
    #[arg(long, default_value = "spanning")]
    pub event: CrossingEvent,
}

#[derive(Debug, Clone, Args)]
pub struct BoundReportArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "p-grid", alias = "p", value_delimiter = ',', required = true)]
    pub p_grid: Vec<f64>,
    #[arg(long, default_value_t = 4_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "infinity-proxy", default_value = "spans")]
    pub proxy: InfinityProxy,
    #[arg(long, default_value = "spanning")]
    pub event: CrossingEvent,
    /// half-gap for (1-p)/2, margin:M for 1-p-M, or a number.
    #[arg(long, default_value = "half-gap")]
    pub epsilon: EpsilonPolicy,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
}

/// Where the critical value inside the lemma constant comes from.
#[derive(Debug, Clone, Args)]
pub struct PcSource {
    /// Use this value instead of estimating it.
    #[arg(long)]
    pub pc: Option<f64>,
    #[arg(long = "pc-L", default_value_t = 64)]
    pub pc_side: usize,
    #[arg(long = "pc-trials", default_value_t = 4_000)]
    pub pc_trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyLemmaArgs {
    #[arg(long, default_value = "star-square-site")]
    pub lattice: LatticeKind,
    /// Side of the box holding the patch; v is its centre.
    #[arg(long = "L", default_value_t = 7)]
    pub side: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value = "half-gap")]
    pub epsilon: EpsilonPolicy,
    #[arg(long = "patch-spec", default_value = "radius=2,size=3,center=true")]
    pub patch: PatchSpec,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub pc: PcSource,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyDominationArgs {
    #[arg(long, default_value = "star-square-site")]
    pub lattice: LatticeKind,
    #[arg(long = "L", default_value_t = 7)]
    pub side: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, required_unless_present = "target_density", conflicts_with = "target_density")]
    pub delta: Option<f64>,
    /// Pick delta so that p (1 - d c delta) equals this.
    #[arg(long = "target-density")]
    pub target_density: Option<f64>,
    #[arg(long, default_value = "half-gap")]
    pub epsilon: EpsilonPolicy,
    #[arg(long = "patch-spec", default_value = "radius=2,size=3")]
    pub patch: PatchSpec,
    /// Box side for the crossing comparison.
    #[arg(long = "mc-L", default_value_t = 128)]
    pub mc_side: usize,
    #[arg(long, default_value_t = 1_000)]
    pub trials: u64,
    #[arg(long, env = "SDPERC_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Run even when p (1 - d c delta) does not exceed p_c.
    #[arg(long = "allow-outside-regime")]
    pub allow_outside_regime: bool,
    #[command(flatten)]
    pub pc: PcSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Bitmask,
    Recursive,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub lattice: LatticeKind,
    #[arg(long = "L")]
    pub side: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub delta: f64,
    /// theta, spanning, origin-occupied or always.
    #[arg(long, default_value = "theta")]
    pub event: ZEvent,
    #[arg(long = "infinity-proxy", default_value = "spans")]
    pub proxy: InfinityProxy,
    #[arg(long, value_enum, default_value = "bitmask")]
    pub route: Route,
}

/// A CSV table with its metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub settings: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(command: &str, header: &[&'static str]) -> Self {
        Table {
            settings: vec![("command".into(), command.into())],
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        self.settings.push((key.into(), value.to_string()));
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# sdperc {}", env!("CARGO_PKG_VERSION"))?;
        for (k, v) in &self.settings {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn cell(x: f64) -> String {
    x.to_string()
}

fn coords(f: &[VertexId]) -> String {
    f.iter()
        .map(|v| format!("{}:{}", v.x, v.y))
        .collect::<Vec<_>>()
        .join(";")
}

fn bits(pattern: &[bool]) -> String {
    pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn progress(message: &str) {
    eprintln!("progress: {message}");
}

fn run_simulate(a: &SimulateArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "simulate",
        &[
            "lattice",
            "L",
            "p",
            "delta",
            "trials",
            "seed",
            "theta_hat",
            "theta_stderr",
            "spanning_hat",
            "spanning_stderr",
        ],
    );
    t.set("lattice", a.lattice);
    t.set("L", a.side);
    t.set("p", a.p);
    t.set("delta", a.delta);
    t.set("trials", a.trials);
    t.set("seed", a.seed);
    t.set("infinity-proxy", a.proxy);
    let graph = build_box(a.lattice, a.side)?;
    let params = Params::new(a.p, a.delta, a.seed, a.trials)?;
    let s = simulate(&graph, &params, a.proxy)?;
    t.rows.push(vec![
        a.lattice.to_string(),
        a.side.to_string(),
        cell(a.p),
        cell(a.delta),
        a.trials.to_string(),
        a.seed.to_string(),
        cell(s.theta.value),
        cell(s.theta.stderr),
        cell(s.spanning.value),
        cell(s.spanning.stderr),
    ]);
    Ok(t)
}

fn run_sweep(a: &SweepArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "sweep",
        &[
            "lattice",
            "L",
            "p",
            "delta",
            "trials",
            "seed",
            "theta_hat",
            "theta_stderr",
            "spanning_hat",
            "spanning_stderr",
        ],
    );
    t.set("lattice", a.lattice);
    t.set("L", join(&a.sizes));
    t.set("p-grid", join(&a.p_grid));
    t.set("delta-grid", join(&a.delta_grid));
    t.set("trials", a.trials);
    t.set("seed", a.seed);
    t.set("infinity-proxy", a.proxy);
    for &side in &a.sizes {
        let graph = build_box(a.lattice, side)?;
        for &p in &a.p_grid {
            for &delta in &a.delta_grid {
                progress(&format!("L={side} p={p} delta={delta}"));
                let params = Params::new(p, delta, a.seed, a.trials)?;
                let s = simulate(&graph, &params, a.proxy)?;
                t.rows.push(vec![
                    a.lattice.to_string(),
                    side.to_string(),
                    cell(p),
                    cell(delta),
                    a.trials.to_string(),
                    a.seed.to_string(),
                    cell(s.theta.value),
                    cell(s.theta.stderr),
                    cell(s.spanning.value),
                    cell(s.spanning.stderr),
                ]);
            }
        }
    }
    Ok(t)
}

fn run_estimate_pc(a: &EstimatePcArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "estimate-pc",
        &[
            "lattice", "L", "trials", "tol", "seed", "pc_hat", "pc_unc", "bracket_lo", "bracket_hi",
        ],
    );
    t.set("lattice", a.lattice);
    t.set("L", join(&a.sizes));
    t.set("trials", a.trials);
    t.set("tol", a.tol);
    t.set("seed", a.seed);
    for &side in &a.sizes {
        progress(&format!("L={side}"));
        let graph = build_box(a.lattice, side)?;
        let e = estimate_pc_on(&graph, a.trials, a.tol, a.seed)?;
        t.rows.push(vec![
            a.lattice.to_string(),
            side.to_string(),
            a.trials.to_string(),
            cell(a.tol),
            a.seed.to_string(),
            cell(e.value),
            cell(e.uncertainty),
            cell(e.bracket.0),
            cell(e.bracket.1),
        ]);
    }
    Ok(t)
}

fn run_estimate_deltac(a: &EstimateDeltacArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "estimate-deltac",
        &[
            "lattice",
            "L",
            "p",
            "trials",
            "tol",
            "seed",
            "proxy",
            "event",
            "delta_c_hat",
            "delta_c_unc",
            "bracket_lo",
            "bracket_hi",
        ],
    );
    t.set("lattice", a.lattice);
    t.set("L", join(&a.sizes));
    t.set("p-grid", join(&a.p_grid));
    t.set("trials", a.trials);
    t.set("tol", a.tol);
    t.set("seed", a.seed);
    t.set("infinity-proxy", a.proxy);
    t.set("event", a.event);
    for &side in &a.sizes {
        let graph = build_box(a.lattice, side)?;
        for &p in &a.p_grid {
            progress(&format!("L={side} p={p}"));
            let e = estimate_delta_c_on(&graph, p, a.trials, a.tol, a.seed, a.proxy, a.event)?;
            t.rows.push(vec![
                a.lattice.to_string(),
                side.to_string(),
                cell(p),
                a.trials.to_string(),
                cell(a.tol),
                a.seed.to_string(),
                a.proxy.to_string(),
                a.event.to_string(),
                cell(e.value),
                cell(e.uncertainty),
                cell(e.bracket.0),
                cell(e.bracket.1),
            ]);
        }
    }
    Ok(t)
}

fn run_bound_report(a: &BoundReportArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "bound-report",
        &[
            "lattice",
            "L",
            "p",
            "pc_hat",
            "pc_unc",
            "delta_c_hat",
            "delta_c_unc",
            "square_lower",
            "square_status",
            "general_lower",
            "general_status",
            "epsilon",
            "upper",
            "upper_status",
            "supercritical_delta",
            "supercritical_spanning",
            "supercritical_stderr",
            "supercritical_trend",
        ],
    );
    t.set("lattice", a.lattice);
    t.set("L", join(&a.sizes));
    t.set("p-grid", join(&a.p_grid));
    t.set("trials", a.trials);
    t.set("tol", a.tol);
    t.set("seed", a.seed);
    t.set("infinity-proxy", a.proxy);
    t.set("event", a.event);
    t.set("epsilon", a.epsilon);
    t.set("margin", a.margin);
    progress(&format!("bound report over {} cells", a.sizes.len() * a.p_grid.len()));
    let options = BoundOptions {
        trials: a.trials,
        tol: a.tol,
        seed: a.seed,
        proxy: a.proxy,
        event: a.event,
        epsilon: a.epsilon,
        margin: a.margin,
    };
    let report = bound_report(a.lattice, &a.p_grid, &a.sizes, &options)?;
    let optional = |x: Option<f64>| x.map(cell).unwrap_or_default();
    for r in &report.rows {
        t.rows.push(vec![
            r.kind.to_string(),
            r.side.to_string(),
            cell(r.p),
            cell(r.pc.value),
            cell(r.pc.uncertainty),
            cell(r.delta_c.value),
            cell(r.delta_c.uncertainty),
            cell(r.square_lower),
            r.square_status.to_string(),
            cell(r.general_lower),
            r.general_status.to_string(),
            cell(r.epsilon),
            cell(r.upper),
            r.upper_status.to_string(),
            optional(r.supercritical_delta),
            optional(r.supercritical_spanning.map(|e| e.value)),
            optional(r.supercritical_spanning.map(|e| e.stderr)),
            r.supercritical_trend.name().to_string(),
        ]);
    }
    Ok(t)
}

fn resolve_pc(kind: LatticeKind, source: &PcSource, seed: u64) -> anyhow::Result<f64> {
    if let Some(pc) = source.pc {
        return Ok(pc);
    }
    progress(&format!("estimating p_c at L={}", source.pc_side));
    let graph = build_box(kind, source.pc_side)?;
    Ok(estimate_pc_on(&graph, source.pc_trials, source.tol, seed)?.value)
}

fn set_pc_settings(t: &mut Table, source: &PcSource, pc: f64) {
    t.set("pc", pc);
    t.set("pc-L", source.pc_side);
    t.set("pc-trials", source.pc_trials);
    t.set("tol", source.tol);
}

fn run_verify_lemma(a: &VerifyLemmaArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "verify-lemma",
        &[
            "F",
            "pattern",
            "pattern_prob",
            "exact_conditional",
            "bound",
            "fine_bound",
            "ratio",
            "status",
        ],
    );
    let graph = build_box(a.lattice, a.side)?;
    let pc = resolve_pc(a.lattice, &a.pc, a.seed)?;
    let epsilon = a.epsilon.epsilon(a.p);
    let constant = lemma_constant(epsilon, pc, graph.degree())?;
    t.set("lattice", a.lattice);
    t.set("L", a.side);
    t.set("p", a.p);
    t.set("delta", a.delta);
    t.set("epsilon", a.epsilon);
    t.set("patch-spec", a.patch);
    t.set("seed", a.seed);
    set_pc_settings(&mut t, &a.pc, pc);
    let report = verify_lemma_patch(&graph, graph.origin(), &a.patch, a.p, a.delta, &constant)?;
    for r in &report.rows {
        t.rows.push(vec![
            coords(&r.f),
            bits(&r.pattern),
            cell(r.pattern_probability),
            cell(r.conditional),
            cell(r.bound),
            cell(r.fine_bound),
            cell(r.ratio),
            r.status.to_string(),
        ]);
    }
    eprintln!(
        "summary: epsilon={epsilon} c_epsilon={} patterns={} max_ratio={} violations={} forced_zero_violations={}",
        constant.c_epsilon,
        report.rows.len(),
        report.max_ratio,
        report.violations,
        report.forced_zero_violations
    );
    Ok(t)
}

fn domination_delta(a: &VerifyDominationArgs, constant: &LemmaConstant) -> anyhow::Result<f64> {
    match (a.delta, a.target_density) {
        (Some(d), _) => Ok(d),
        (None, Some(q)) => {
            Ok((1.0 - q / a.p) / (constant.d as f64 * constant.c_epsilon))
        }
        (None, None) => Err(anyhow!(Error::Malformed(
            "give --delta or --target-density".into()
        ))),
    }
}

fn run_verify_domination(a: &VerifyDominationArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "verify-domination",
        &["check", "F", "pattern", "value", "reference", "stderr", "status"],
    );
    let graph = build_box(a.lattice, a.side)?;
    let pc = resolve_pc(a.lattice, &a.pc, a.seed)?;
    let epsilon = a.epsilon.epsilon(a.p);
    let constant = lemma_constant(epsilon, pc, graph.degree())?;
    let delta = domination_delta(a, &constant)?;
    t.set("lattice", a.lattice);
    t.set("L", a.side);
    t.set("p", a.p);
    t.set("delta", delta);
    t.set("epsilon", a.epsilon);
    t.set("patch-spec", a.patch);
    t.set("mc-L", a.mc_side);
    t.set("trials", a.trials);
    t.set("seed", a.seed);
    t.set("allow-outside-regime", a.allow_outside_regime);
    set_pc_settings(&mut t, &a.pc, pc);
    let enforce = !a.allow_outside_regime;
    let patch = verify_domination_patch(
        &graph,
        graph.origin(),
        &a.patch,
        a.p,
        delta,
        &constant,
        enforce,
    )?;
    for r in &patch.rows {
        t.rows.push(vec![
            "patch".into(),
            coords(&r.f),
            bits(&r.pattern),
            cell(r.conditional),
            cell(patch.reference),
            String::new(),
            r.status.to_string(),
        ]);
    }
    progress(&format!("crossing comparison at L={}", a.mc_side));
    let mc_graph = build_box(a.lattice, a.mc_side)?;
    let params = Params::new(a.p, delta, a.seed, a.trials)?;
    let s = verify_domination_spanning(&mc_graph, &params, &constant, enforce)?;
    let sigma = (s.red.stderr.powi(2) + s.reference.stderr.powi(2)).sqrt();
    t.rows.push(vec![
        "spanning".into(),
        String::new(),
        String::new(),
        cell(s.red.value),
        cell(s.reference.value),
        cell(sigma),
        if s.pass { RowStatus::Pass } else { RowStatus::Fail }.to_string(),
    ]);
    eprintln!(
        "summary: epsilon={epsilon} c_epsilon={} delta={delta} density={} patch_violations={} min_conditional={} spanning_pass={}",
        constant.c_epsilon, s.reference_density, patch.violations, patch.min_conditional, s.pass
    );
    Ok(t)
}

fn run_oracle(a: &OracleArgs) -> anyhow::Result<Table> {
    let mut t = Table::new(
        "oracle",
        &[
            "lattice",
            "L",
            "p",
            "delta",
            "proxy",
            "event",
            "route",
            "exact",
            "configurations",
        ],
    );
    let route = match a.route {
        Route::Bitmask => "bitmask",
        Route::Recursive => "recursive",
    };
    t.set("lattice", a.lattice);
    t.set("L", a.side);
    t.set("p", a.p);
    t.set("delta", a.delta);
    t.set("event", a.event);
    t.set("infinity-proxy", a.proxy);
    t.set("route", route);
    let graph = build_box(a.lattice, a.side)?;
    let r = match a.route {
        Route::Bitmask => enumerate_z_event(&graph, a.p, a.delta, a.proxy, a.event)?,
        Route::Recursive => enumerate_event_recursive(&graph, a.p, a.delta, a.proxy, a.event)?,
    };
    t.rows.push(vec![
        a.lattice.to_string(),
        a.side.to_string(),
        cell(a.p),
        cell(a.delta),
        a.proxy.to_string(),
        a.event.to_string(),
        route.to_string(),
        cell(r.probability),
        r.configurations.to_string(),
    ]);
    Ok(t)
}

/// Run one parsed command and return its table.
pub fn execute(command: &Command) -> anyhow::Result<Table> {
    match command {
        Command::Simulate(a) => run_simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::EstimatePc(a) => run_estimate_pc(a),
        Command::EstimateDeltac(a) => run_estimate_deltac(a),
        Command::BoundReport(a) => run_bound_report(a),
        Command::VerifyLemma(a) => run_verify_lemma(a),
        Command::VerifyDomination(a) => run_verify_domination(a),
        Command::Oracle(a) => run_oracle(a),
    }
}

/// Parse `key=value` lines, skipping blanks and `#` comments.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, Error> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("config line {}: expected key=value", i + 1)))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        if a == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = a.strip_prefix("--config=") {
            return Some(path.to_string());
        }
    }
    None
}

/// Insert file settings right after the subcommand, skipping keys the
/// command line already sets.
pub fn merge_config(args: &[String], file: &[(String, String)]) -> Vec<String> {
    let Some(position) = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return args.to_vec();
    };
    let given: BTreeSet<&str> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let mut injected = Vec::new();
    for (key, value) in file {
        if key == "config" || key == "command" || given.contains(key.as_str()) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            if value == "true" {
                injected.push(format!("--{key}"));
            }
            continue;
        }
        injected.push(format!("--{key}"));
        injected.push(value.clone());
    }
    let mut merged = args[..=position].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[position + 1..]);
    merged
}

fn classify(err: &anyhow::Error) -> (i32, &'static str) {
    if let Some(e) = err.downcast_ref::<Error>() {
        let kind = match e {
            Error::InvalidSide { .. } => "invalid-side",
            Error::UnknownLattice(_) => "unknown-lattice",
            Error::UnsupportedMatching(_) => "unsupported-matching",
            Error::NoTildeMap(_) => "no-tilde-map",
            Error::GraphMismatch => "graph-mismatch",
            Error::OutOfRange { .. } => "out-of-range",
            Error::NoTrials => "no-trials",
            Error::TooLarge(_) => "too-large",
            Error::ZeroProbabilityPattern => "zero-probability-pattern",
            Error::Hypothesis(_) => "hypothesis",
            Error::NonConvergence(_) => "non-convergence",
            Error::BracketFailure(_) => "bracket-failure",
            Error::Malformed(_) => "malformed",
        };
        let code = match e {
            Error::NonConvergence(_) | Error::BracketFailure(_) | Error::ZeroProbabilityPattern => {
                EXIT_NUMERICAL
            }
            _ => EXIT_USAGE,
        };
        return (code, kind);
    }
    (EXIT_IO, "io")
}

fn report_error(code: i32, kind: &str, message: &str) {
    let message = message.replace('\n', " ");
    eprintln!("error\tcode={code}\tkind={kind}\tmessage={message}");
}

fn run_parsed(cli: &Cli) -> anyhow::Result<()> {
    let table = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building the thread pool")?
            .install(|| execute(&cli.command))?,
        None => execute(&cli.command)?,
    };
    match &cli.out {
        Some(path) => {
            let mut file = io::BufWriter::new(
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            table.write_to(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Entry point: parse, run and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match config_path(&args) {
        Some(path) => {
            let text = match fs::read_to_string(&path) {
                Ok(text) => text,
                Err(e) => {
                    report_error(EXIT_USAGE, "config", &format!("{path}: {e}"));
                    return EXIT_USAGE;
                }
            };
            match parse_config_file(&text) {
                Ok(pairs) => merge_config(&args, &pairs),
                Err(e) => {
                    report_error(EXIT_USAGE, "config", &e.to_string());
                    return EXIT_USAGE;
                }
            }
        }
        None => args,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = e.print();
                report_error(EXIT_USAGE, "usage", &e.kind().to_string());
                return EXIT_USAGE;
            }
            let _ = e.print();
            return EXIT_OK;
        }
    };
    match run_parsed(&cli) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let (code, kind) = classify(&err);
            report_error(code, kind, &format!("{err:#}"));
            code
        }
    }
}
