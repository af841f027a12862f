use serde_json::{json, Value};

use super::audit::{audit, AuditOptions, AuditReport};
use super::config::{
    time_grid, AggregationMode, ExperimentConfig, ExperimentKind, PairOrder, Parameters,
};
use super::output::{Cell, Table};
use super::schema::column_names;
use crate::classical::{
    aggregate_asymmetric, aggregate_naive, classical_flow, continuum_entropy,
    diffusion_entropy_rate, diffusion_step, negentropy, shannon_entropy, DiffusionSpec, GridDensity,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::{entropy_flow_curve, von_neumann_entropy, BipartiteEntropies};
use crate::sampling::rng_from_seed;
use crate::superscattering::{build_channel, partial_trace_diffusion, DiffusionPropagator};
use rand::Rng;

pub const BOUND_TOL: f64 = 1e-9;
pub const CLASSICAL_MONOTONE_TOL: f64 = 1e-12;
pub const QUANTUM_MONOTONE_TOL: f64 = 1e-9;
pub const MASS_TOL: f64 = 1e-12;

/// Table and summary of one experiment.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub kind: ExperimentKind,
    pub table: Table,
    pub summary: Value,
    /// Every flag in every row held (and, for audits, every suite passed).
    pub passed: bool,
    pub audit: Option<AuditReport>,
}

impl RunOutput {
    /// `(row, column)` of the first false flag.
    pub fn first_failure(&self) -> Option<(usize, &'static str)> {
        self.table.first_false_flag()
    }
}

fn bounds_ok(x: f64, lower: f64, upper: f64) -> bool {
    x >= lower - BOUND_TOL && x <= upper + BOUND_TOL
}

fn f(x: f64) -> Cell {
    Cell::Float(x)
}

fn b(x: bool) -> Cell {
    Cell::Bool(x)
}

fn step_size(grid: &GridDensity, sigma: f64, step: Option<f64>) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Config(format!("sigma {sigma} must be positive")));
    }
    let dt = step.unwrap_or_else(|| DiffusionSpec::max_stable_step(grid, sigma));
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("step {dt} must be positive")));
    }
    Ok(dt)
}

/// The rate is infinite while some face borders an empty cell (a spike).
fn entropy_rate(rho: &GridDensity, spec: &DiffusionSpec) -> Result<f64> {
    match diffusion_entropy_rate(rho, spec) {
        Err(Error::UnstableStep(m)) if m.contains("singular") => Ok(f64::INFINITY),
        r => r,
    }
}

fn run_classical_diffusion(cfg: &ExperimentConfig, p: &super::config::DiffusionParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let mut rho = cfg.state()?.grid(&mut rng)?;
    let spec = DiffusionSpec::simple(p.sigma, step_size(&rho, p.sigma, p.step)?);
    let s0 = continuum_entropy(&rho);
    let m0 = rho.total_mass();
    let upper = (rho.rho_star() * rho.total_volume()).ln() - s0;
    let mut table = Table::new(column_names(ExperimentKind::ClassicalDiffusion));
    let mut prev = s0;
    for k in 0..=p.steps {
        if k > 0 {
            rho = diffusion_step(&rho, &spec)?;
        }
        let s = continuum_entropy(&rho);
        let mass = rho.total_mass();
        table.push(vec![
            Cell::Int(k as u64),
            f(k as f64 * spec.step),
            f(s),
            f(s - s0),
            f(0.0),
            f(upper),
            f(mass),
            f(entropy_rate(&rho, &spec)?),
            b(s >= prev - CLASSICAL_MONOTONE_TOL),
            b((mass - m0).abs() <= MASS_TOL),
            b(bounds_ok(s - s0, 0.0, upper)),
        ]);
        prev = s;
    }
    Ok(table)
}

fn run_box_flow(cfg: &ExperimentConfig, p: &super::config::BoxFlowParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let rho = cfg.state()?.grid(&mut rng)?;
    let part = p.partition(&rho)?;
    let spec = DiffusionSpec::simple(p.sigma, step_size(&rho, p.sigma, p.step)?);
    let records = classical_flow(&rho, &spec, &part, p.steps)?;
    let ln_total = (rho.rho_star() * rho.total_volume()).ln();
    let mut table = Table::new(column_names(ExperimentKind::ClassicalBoxFlow));
    let mut prev = records[0].boxed_entropy;
    for r in &records {
        let upper = ln_total - r.continuum_entropy;
        table.push(vec![
            Cell::Int(r.step as u64),
            f(r.t),
            f(r.continuum_entropy),
            f(r.box_entropy),
            f(r.boxed_entropy),
            f(r.mean_volume),
            f(r.hidden_information),
            f(0.0),
            f(upper),
            b(r.boxed_entropy >= prev - QUANTUM_MONOTONE_TOL),
            b(bounds_ok(r.hidden_information, 0.0, upper)),
        ]);
        prev = r.boxed_entropy;
    }
    Ok(table)
}

fn run_aggregation(cfg: &ExperimentConfig, p: &super::config::AggregationParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let mut probs = cfg.state()?.probability_vector(&mut rng)?;
    let n = probs.len();
    if n < 2 && p.rounds > 0 {
        return Err(Error::Config("aggregation needs at least two states".into()));
    }
    let lambda = match (p.mode, p.lambda) {
        (AggregationMode::Asymmetric, Some(l)) => {
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::Config(format!("lambda {l} must lie in (0, 1)")));
            }
            l
        }
        (AggregationMode::Asymmetric, None) => return Err(Error::Config("asymmetric mode needs lambda".into())),
        (AggregationMode::Naive, None) => 0.5,
        (AggregationMode::Naive, Some(_)) => return Err(Error::Config("lambda only applies to asymmetric mode".into())),
    };
    let s0 = shannon_entropy(&probs);
    let upper = (n as f64).ln() - s0;
    let mut table = Table::new(column_names(ExperimentKind::AggregationSweep));
    let mut prev = s0;
    let mut push = |round: usize, a: usize, bb: usize, probs: &crate::classical::ProbabilityVector, prev: &mut f64| {
        let s = shannon_entropy(probs);
        table.push(vec![
            Cell::Int(round as u64),
            Cell::Int(a as u64),
            Cell::Int(bb as u64),
            f(s),
            f(s - s0),
            f(0.0),
            f(upper),
            f(negentropy(probs)),
            b(s >= *prev - CLASSICAL_MONOTONE_TOL),
            b(bounds_ok(s - s0, 0.0, upper)),
        ]);
        *prev = s;
    };
    push(0, 0, 0, &probs, &mut prev);
    for round in 1..=p.rounds {
        let (a, bb) = match p.pairs {
            PairOrder::Cyclic => ((round - 1) % n, round % n),
            PairOrder::Random => {
                let a = rng.random_range(0..n);
                let off = rng.random_range(1..n);
                (a, (a + off) % n)
            }
        };
        probs = match p.mode {
            AggregationMode::Naive => aggregate_naive(&probs, a, bb)?,
            AggregationMode::Asymmetric => aggregate_asymmetric(&probs, a, bb, lambda)?,
        };
        push(round, a, bb, &probs, &mut prev);
    }
    Ok(table)
}

fn run_family_curve(cfg: &ExperimentConfig, p: &super::config::FamilyParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let rho = cfg.state()?.density_matrix(&mut rng)?;
    let family = p.family(rho.dim(), &mut rng)?;
    let grid = p.grid()?;
    let curve = entropy_flow_curve(&family, &rho, &grid).map_err(|e| match e {
        Error::NoBipartition => Error::Config(format!("{} needs a bipartite initial state", family.name())),
        other => other,
    })?;
    let mut table = Table::new(column_names(ExperimentKind::QuantumFamilyCurve));
    let mut prev = curve[0].entropy;
    for pt in &curve {
        table.push(vec![
            f(pt.s),
            f(pt.entropy),
            f(pt.hidden),
            f(pt.lower),
            f(pt.upper),
            b(pt.entropy >= prev - QUANTUM_MONOTONE_TOL),
            b(pt.within_bounds(BOUND_TOL)),
        ]);
        prev = pt.entropy;
    }
    Ok(table)
}

fn run_hilbert(cfg: &ExperimentConfig, p: &super::config::HilbertParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let rho = cfg.state()?.density_matrix(&mut rng)?;
    let chan = build_channel(&p.channel.spec(&rho, &mut rng)?)?;
    let times = time_grid(&p.t_grid, p.t_max, p.t_points)?;
    let n = rho.dim();
    let s0 = von_neumann_entropy(&rho);
    let upper = (n as f64).ln() - s0;
    let mixed = ComplexMatrix::identity(n).scale(1.0 / n as f64);
    let mut table = Table::new(column_names(ExperimentKind::HilbertDiffusion));
    let mut prev = s0;
    for &t in &times {
        let rho_t = DiffusionPropagator::new(&chan, t)?.apply(&rho)?;
        let s = von_neumann_entropy(&rho_t);
        table.push(vec![
            f(t),
            f(s),
            f(s - s0),
            f(0.0),
            f(upper),
            f(rho_t.matrix().frobenius_distance(&mixed)),
            b(s >= prev - QUANTUM_MONOTONE_TOL),
            b(bounds_ok(s - s0, 0.0, upper)),
        ]);
        prev = s;
    }
    Ok(table)
}

fn run_partial_trace_diffusion(cfg: &ExperimentConfig, p: &super::config::TimeParams) -> Result<Table> {
    let mut rng = rng_from_seed(cfg.seed);
    let rho = cfg.state()?.density_matrix(&mut rng)?;
    if rho.bipartition().is_none() {
        return Err(Error::Config("partialTraceDiffusion needs a bipartite initial state".into()));
    }
    let times = time_grid(&p.t_grid, p.t_max, p.t_points)?;
    let e = BipartiteEntropies::of(&rho)?;
    let mi = e.mutual_information();
    let upper = 2.0 * e.a.min(e.b);
    let mut table = Table::new(column_names(ExperimentKind::PartialTraceDiffusion));
    let mut prev = e.joint;
    for &t in &times {
        let s_equiv = -(-t).exp_m1();
        let rho_t = partial_trace_diffusion(&rho, t)?;
        let s = von_neumann_entropy(&rho_t);
        let hidden = s - e.joint;
        let lower = s_equiv * mi;
        table.push(vec![
            f(t),
            f(s_equiv),
            f(s),
            f(hidden),
            f(lower),
            f(upper),
            b(s >= prev - QUANTUM_MONOTONE_TOL),
            b(bounds_ok(hidden, lower, upper)),
        ]);
        prev = s;
    }
    Ok(table)
}

fn entropy_column(kind: ExperimentKind) -> Option<&'static str> {
    match kind {
        ExperimentKind::ClassicalBoxFlow => Some("boxedEntropy"),
        ExperimentKind::AuditAll => None,
        _ => Some("entropy"),
    }
}

fn all_flags(table: &Table, name: &str) -> bool {
    match table.column_index(name) {
        Some(i) => table.rows.iter().all(|r| r[i] != Cell::Bool(false)),
        None => true,
    }
}

/// Runs a validated configuration. Numerical errors inside the flow are
/// returned as errors; violated flags are reported in the output.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut audit_report = None;
    let table = match &cfg.parameters {
        Parameters::ClassicalDiffusion(p) => run_classical_diffusion(cfg, p)?,
        Parameters::ClassicalBoxFlow(p) => run_box_flow(cfg, p)?,
        Parameters::AggregationSweep(p) => run_aggregation(cfg, p)?,
        Parameters::QuantumFamilyCurve(p) => run_family_curve(cfg, p)?,
        Parameters::HilbertDiffusion(p) => run_hilbert(cfg, p)?,
        Parameters::PartialTraceDiffusion(p) => run_partial_trace_diffusion(cfg, p)?,
        Parameters::AuditAll(p) => {
            let opts = AuditOptions {
                seed: cfg.seed,
                max_dim: p.max_dim.unwrap_or(AuditOptions::DEFAULT_MAX_DIM),
                inject_fault: p.inject_fault.unwrap_or(false),
            };
            let report = audit(&opts)?;
            let t = report.table();
            audit_report = Some(report);
            t
        }
    };
    let failure = table.first_false_flag();
    let passed = failure.is_none();
    let mut summary = json!({
        "kind": cfg.kind.as_str(),
        "seed": cfg.seed,
        "config": cfg.source,
        "rows": table.rows.len(),
        "monotone": all_flags(&table, "monotoneOk"),
        "boundsHold": all_flags(&table, "boundsOk"),
        "passed": passed,
        "firstFailure": failure.map(|(row, column)| json!({"row": row, "flag": column})),
    });
    if let Some(col) = entropy_column(cfg.kind) {
        let values = table.float_column(col).unwrap_or_default();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        summary["minEntropy"] = json!(min);
        summary["maxEntropy"] = json!(max);
    }
    if let Some(cols) = table.column_index("massOk") {
        summary["massConserved"] = json!(table.rows.iter().all(|r| r[cols] != Cell::Bool(false)));
    }
    if let Some(report) = &audit_report {
        summary["audit"] = report.to_json();
    }
    Ok(RunOutput {
        kind: cfg.kind,
        table,
        summary,
        passed,
        audit: audit_report,
    })
}
