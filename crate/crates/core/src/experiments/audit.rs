//! The invariant audit: every property suite of the library, run on seeded
//! random inputs, collected into one deterministic report.

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::output::{Cell, Table};
use super::schema::column_names;
use super::config::ExperimentKind;
use crate::classical::{
    aggregate_asymmetric, aggregate_naive, box_hidden_information, box_probabilities,
    boxwise_density, continuum_entropy, diffusion_step, geometric_mean_volume, shannon_entropy,
    DiffusionSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::quantum::{
    asymmetric_mix, decohere_full, decohere_partial, default_s_grid, entropy_flow_curve,
    maximal_mix, reduced_product, relative_entropy, tuneable_asymmetric_mix,
    tuneable_partial_trace, von_neumann_entropy, BipartiteEntropies, CoarseFamily, DensityMatrix,
    ProjectorBasis,
};
use crate::sampling::{
    random_density_matrix, random_density_matrix_with_rank, random_grid_density,
    random_partition, random_probability_vector, random_unitary, rng_from_seed, SampleRng,
};
use crate::superscattering::{
    build_channel, incoherent_sum, partial_trace_diffusion, ChannelSpec, DiffusionPropagator,
    SuperScattering, UnitaryEnsemble,
};

/// Environment variable capping the audit's thread count.
pub const THREADS_ENV: &str = "ENTROPYFLOW_THREADS";

#[derive(Clone, Debug, PartialEq)]
pub struct AuditOptions {
    pub seed: u64,
    /// Largest quantum dimension sampled (at most 16).
    pub max_dim: usize,
    /// Adds a replacement channel `rho -> |0><0|` whose monotone flag has
    /// been forced on; the channel suites must catch it.
    pub inject_fault: bool,
}

impl AuditOptions {
    pub const DEFAULT_MAX_DIM: usize = 8;
    pub const MAX_SUPPORTED_DIM: usize = 16;
    /// Dimension cap for suites that exponentiate `N^2 x N^2` generators.
    pub const DIFFUSION_DIM_CAP: usize = 8;

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            max_dim: Self::DEFAULT_MAX_DIM,
            inject_fault: false,
        }
    }
}

/// Outcome of one invariant suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub inequality: &'static str,
    pub checked: usize,
    /// Smallest slack seen; a failure is a slack below minus the tolerance.
    pub worst_margin: f64,
    pub passed: bool,
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub seed: u64,
    pub max_dim: usize,
    pub inject_fault: bool,
    pub suites: Vec<SuiteResult>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn failed_suites(&self) -> Vec<&SuiteResult> {
        self.suites.iter().filter(|s| !s.passed).collect()
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "maxDim": self.max_dim,
            "injectFault": self.inject_fault,
            "passed": self.passed(),
            "suites": self.suites.iter().map(|s| json!({
                "name": s.name,
                "inequality": s.inequality,
                "checked": s.checked,
                "worstMargin": finite_or_null(s.worst_margin),
                "passed": s.passed,
                "counterexample": s.counterexample,
            })).collect::<Vec<_>>(),
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(column_names(ExperimentKind::AuditAll));
        for s in &self.suites {
            t.push(vec![
                Cell::Text(s.name.to_string()),
                Cell::Int(s.checked as u64),
                Cell::Float(s.worst_margin),
                Cell::Bool(s.passed),
            ]);
        }
        t
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Accumulates checks of one suite.
struct Checker {
    checked: usize,
    worst: f64,
    counterexample: Option<Value>,
}

impl Checker {
    fn new() -> Self {
        Self {
            checked: 0,
            worst: f64::INFINITY,
            counterexample: None,
        }
    }

    /// `margin >= -tol` passes. The first failure's payload is kept.
    fn check(&mut self, margin: f64, tol: f64, payload: impl FnOnce() -> Value) {
        self.checked += 1;
        if !(margin >= self.worst) {
            self.worst = margin;
        }
        if !(margin >= -tol) && self.counterexample.is_none() {
            let mut p = payload();
            p["margin"] = finite_or_null(margin);
            p["tolerance"] = json!(tol);
            self.counterexample = Some(p);
        }
    }

    /// `|diff| <= tol`.
    fn check_eq(&mut self, diff: f64, tol: f64, payload: impl FnOnce() -> Value) {
        self.check(-diff.abs(), tol, payload);
    }
}

type SuiteFn = fn(&mut SampleRng, &AuditOptions, &mut Checker) -> Result<()>;

struct Suite {
    name: &'static str,
    inequality: &'static str,
    body: SuiteFn,
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows = |f: fn(&crate::linalg::C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect()).collect()
    };
    json!({"real": rows(|z| z.re), "imag": rows(|z| z.im)})
}

fn dim(rng: &mut SampleRng, opts: &AuditOptions) -> usize {
    rng.random_range(2..=opts.max_dim.max(2))
}

fn bipartite_dims(rng: &mut SampleRng, max_dim: usize) -> (usize, usize) {
    if max_dim < 4 {
        return (1, max_dim.max(1));
    }
    let na = rng.random_range(2..=max_dim / 2);
    let nb = rng.random_range(2..=max_dim / na);
    (na, nb)
}

fn random_state(rng: &mut SampleRng, n: usize) -> Result<DensityMatrix> {
    let rank = rng.random_range(1..=n);
    random_density_matrix_with_rank(rng, n, rank)
}

fn random_bipartite(rng: &mut SampleRng, max_dim: usize) -> Result<DensityMatrix> {
    let (na, nb) = bipartite_dims(rng, max_dim);
    random_state(rng, na * nb)?.into_bipartite((na, nb))
}

const QUANTUM_SAMPLES: usize = 40;

// ------------------------------------------------------------- classical

fn shannon_range(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..200 {
        let n = rng.random_range(1..=64);
        let p = random_probability_vector(rng, n)?;
        let s = shannon_entropy(&p);
        let ln_n = (n as f64).ln();
        c.check(s.min(ln_n - s), 1e-12, || json!({"sample": k, "n": n, "entropy": s}));
    }
    Ok(())
}

fn aggregation_monotone(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..2000 {
        let n = rng.random_range(2..=32);
        let p = random_probability_vector(rng, n)?;
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let lambda: f64 = rng.random_range(0.001..0.999);
        let s = shannon_entropy(&p);
        let naive = shannon_entropy(&aggregate_naive(&p, a, b)?);
        let asym = shannon_entropy(&aggregate_asymmetric(&p, a, b, lambda)?);
        c.check(naive - s, 1e-12, || json!({"sample": k, "mode": "naive", "pair": [a, b], "probs": p.probs()}));
        c.check(asym - s, 1e-12, || {
            json!({"sample": k, "mode": "asymmetric", "pair": [a, b], "lambda": lambda, "probs": p.probs()})
        });
    }
    Ok(())
}

fn random_grid_and_partition(
    rng: &mut SampleRng,
    rho_star: f64,
) -> Result<(crate::classical::GridDensity, crate::classical::BoxPartition)> {
    let dims = rng.random_range(1..=3);
    let shape: Vec<usize> = (0..dims).map(|_| rng.random_range(2..=if dims == 1 { 40 } else { 8 })).collect();
    let spacing: Vec<f64> = shape.iter().map(|_| rng.random_range(0.05..0.5)).collect();
    let grid = random_grid_density(rng, shape, spacing, rho_star)?;
    let boxes = rng.random_range(1..=grid.len().min(12));
    let part = random_partition(rng, &grid, boxes)?;
    Ok((grid, part))
}

fn box_averaging(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..200 {
        let (grid, part) = random_grid_and_partition(rng, 1.0)?;
        let gain = continuum_entropy(&boxwise_density(&grid, &part)?) - continuum_entropy(&grid);
        c.check(gain, 1e-9, || json!({"sample": k, "shape": grid.shape(), "boxes": part.boxes()}));
    }
    Ok(())
}

fn box_identity(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..200 {
        let rho_star = [0.1, 1.0, 10.0][k % 3];
        let (grid, part) = random_grid_and_partition(rng, rho_star)?;
        let p = box_probabilities(&grid, &part)?;
        let vbar = geometric_mean_volume(&p, &part)?;
        let lhs = continuum_entropy(&boxwise_density(&grid, &part)?);
        let rhs = shannon_entropy(&p) + (rho_star * vbar).ln();
        c.check_eq(lhs - rhs, 1e-9, || json!({"sample": k, "lhs": lhs, "rhs": rhs}));
    }
    Ok(())
}

fn rho_star_invariance(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..200 {
        let (grid, part) = random_grid_and_partition(rng, 1.0)?;
        let base = box_hidden_information(&grid, &part)?;
        for rs in [0.1, 10.0] {
            let other = box_hidden_information(&grid.with_rho_star(rs)?, &part)?;
            c.check_eq(other - base, 1e-9, || json!({"sample": k, "rhoStar": rs, "at1": base, "atRhoStar": other}));
        }
    }
    Ok(())
}

fn classical_diffusion_monotone(rng: &mut SampleRng, _: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..20 {
        let dims = rng.random_range(1..=2);
        let shape: Vec<usize> = (0..dims).map(|_| rng.random_range(4..=if dims == 1 { 60 } else { 12 })).collect();
        let spacing: Vec<f64> = shape.iter().map(|n| 1.0 / *n as f64).collect();
        let mut rho = random_grid_density(rng, shape, spacing, 1.0)?;
        let sigma = rng.random_range(0.1..2.0);
        let spec = DiffusionSpec::simple(sigma, DiffusionSpec::max_stable_step(&rho, sigma));
        let m0 = rho.total_mass();
        let mut s = continuum_entropy(&rho);
        for step in 1..=50 {
            rho = diffusion_step(&rho, &spec)?;
            let next = continuum_entropy(&rho);
            c.check(next - s, 1e-12, || json!({"sample": k, "step": step, "before": s, "after": next}));
            let drift = rho.total_mass() - m0;
            c.check_eq(drift, 1e-12, || json!({"sample": k, "step": step, "massDrift": drift}));
            s = next;
        }
    }
    Ok(())
}

// ------------------------------------------------------------- quantum

fn state_validity(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let rho = random_bipartite(rng, opts.max_dim)?;
        let s: f64 = rng.random_range(0.0..=1.0);
        let basis = ProjectorBasis::from_unitary(&random_unitary(rng, rho.dim()))?;
        let outputs = [
            ("maximalMix", maximal_mix(&rho, s)),
            ("reducedProduct", reduced_product(&rho)),
            ("tuneablePartialTrace", tuneable_partial_trace(&rho, s)),
            ("asymmetricMix", asymmetric_mix(&rho)),
            ("tuneableAsymmetricMix", tuneable_asymmetric_mix(&rho, s)),
            ("decohereFull", decohere_full(&rho, &basis)),
            ("decoherePartial", decohere_partial(&rho, &basis, s)),
        ];
        for (op, out) in outputs {
            match out {
                Ok(out) => {
                    let ln_n = (out.dim() as f64).ln();
                    let e = von_neumann_entropy(&out);
                    c.check(out.min_eigenvalue().min(0.0) + 1e-10, 0.0, || json!({"sample": k, "op": op}));
                    c.check(e.min(ln_n - e), 1e-10, || json!({"sample": k, "op": op, "entropy": e}));
                }
                Err(e) => c.check(f64::NEG_INFINITY, 0.0, || json!({"sample": k, "op": op, "error": e.to_string()})),
            }
        }
    }
    Ok(())
}

fn concavity(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let n = dim(rng, opts);
        let a = random_state(rng, n)?;
        let b = random_state(rng, n)?;
        let s: f64 = rng.random_range(0.0..=1.0);
        let mix = DensityMatrix::new(a.matrix().lin_comb(1.0 - s, b.matrix(), s).hermitian_part())?;
        let margin = von_neumann_entropy(&mix) - (1.0 - s) * von_neumann_entropy(&a) - s * von_neumann_entropy(&b);
        c.check(margin, 1e-9, || json!({"sample": k, "n": n, "s": s}));
    }
    Ok(())
}

fn triangle(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES * 5 {
        let rho = random_bipartite(rng, opts.max_dim)?;
        let e = BipartiteEntropies::of(&rho)?;
        let payload = || json!({"sample": k, "dims": rho.bipartition(), "sA": e.a, "sB": e.b, "sAB": e.joint});
        c.check(e.joint - (e.a - e.b).abs(), 1e-9, payload);
        c.check(e.a + e.b - e.joint, 1e-9, payload);
    }
    Ok(())
}

fn klein(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES * 5 {
        let n = dim(rng, opts);
        let rho = random_density_matrix(rng, n)?;
        let sigma = random_density_matrix(rng, n)?;
        let d = relative_entropy(&rho, &sigma)?;
        c.check(d, 1e-9, || json!({"sample": k, "n": n, "relativeEntropy": d}));
    }
    Ok(())
}

fn decoherence_identity(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let n = dim(rng, opts);
        let rho = random_density_matrix(rng, n)?;
        let basis = if k % 2 == 0 {
            ProjectorBasis::computational(n)
        } else {
            ProjectorBasis::from_unitary(&random_unitary(rng, n))?
        };
        let d = decohere_full(&rho, &basis)?;
        let gap = von_neumann_entropy(&d) - von_neumann_entropy(&rho);
        let rel = relative_entropy(&rho, &d)?;
        c.check_eq(gap - rel, 1e-9, || json!({"sample": k, "n": n, "entropyGap": gap, "relativeEntropy": rel}));
    }
    Ok(())
}

fn families(rng: &mut SampleRng, opts: &AuditOptions) -> Result<(DensityMatrix, Vec<CoarseFamily>)> {
    let rho = random_bipartite(rng, opts.max_dim)?;
    let basis = ProjectorBasis::from_unitary(&random_unitary(rng, rho.dim()))?;
    Ok((
        rho,
        vec![
            CoarseFamily::MaximalMix,
            CoarseFamily::TuneablePartialTrace,
            CoarseFamily::TuneableAsymmetricMix,
            CoarseFamily::PartialDecoherence(basis),
        ],
    ))
}

fn family_monotone(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let (rho, fams) = families(rng, opts)?;
        for fam in &fams {
            let curve = entropy_flow_curve(fam, &rho, &default_s_grid())?;
            for w in curve.windows(2) {
                c.check(w[1].entropy - w[0].entropy, 1e-9, || {
                    json!({"sample": k, "family": fam.name(), "s": [w[0].s, w[1].s], "entropy": [w[0].entropy, w[1].entropy]})
                });
            }
        }
    }
    Ok(())
}

fn family_bounds(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let (rho, fams) = families(rng, opts)?;
        for fam in &fams {
            for p in entropy_flow_curve(fam, &rho, &default_s_grid())? {
                c.check((p.hidden - p.lower).min(p.upper - p.hidden), 1e-9, || {
                    json!({"sample": k, "family": fam.name(), "s": p.s, "hidden": p.hidden, "lower": p.lower, "upper": p.upper})
                });
            }
        }
    }
    Ok(())
}

fn idempotence(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let rho = random_bipartite(rng, opts.max_dim)?;
        let basis = ProjectorBasis::from_unitary(&random_unitary(rng, rho.dim()))?;
        let d = decohere_full(&rho, &basis)?;
        let dd = decohere_full(&d, &basis)?;
        c.check_eq(dd.matrix().max_abs_diff(d.matrix()), 1e-10, || json!({"sample": k, "op": "decohereFull"}));
        let p = reduced_product(&rho)?;
        let pp = reduced_product(&p)?;
        c.check_eq(pp.matrix().max_abs_diff(p.matrix()), 1e-10, || json!({"sample": k, "op": "reducedProduct"}));
    }
    Ok(())
}

// ------------------------------------------------------------- channels

type DirectOp = Box<dyn Fn(&DensityMatrix) -> Result<DensityMatrix> + Send + Sync>;

/// A table channel together with the direct operation it must reproduce.
struct TableChannel {
    name: &'static str,
    channel: SuperScattering,
    direct: DirectOp,
}

fn table_channels(rng: &mut SampleRng, dims: (usize, usize)) -> Result<Vec<TableChannel>> {
    let n = dims.0 * dims.1;
    let s: f64 = rng.random_range(0.05..0.95);
    let basis = ProjectorBasis::from_unitary(&random_unitary(rng, n))?;
    let k = rng.random_range(1..=3);
    let ens = UnitaryEnsemble::new(
        random_probability_vector(rng, k)?,
        (0..k).map(|_| random_unitary(rng, n)).collect(),
    )?;
    let (b1, b2, e1) = (basis.clone(), basis.clone(), ens.clone());
    Ok(vec![
        TableChannel {
            name: "maximal",
            channel: build_channel(&ChannelSpec::Maximal { dim: n, s })?,
            direct: Box::new(move |r| maximal_mix(r, s)),
        },
        TableChannel {
            name: "partialMaximal",
            channel: build_channel(&ChannelSpec::PartialMaximal { dims })?,
            direct: Box::new(asymmetric_mix),
        },
        TableChannel {
            name: "partialMaximalTuneable",
            channel: build_channel(&ChannelSpec::PartialMaximalTuneable { dims, s })?,
            direct: Box::new(move |r| tuneable_asymmetric_mix(r, s)),
        },
        TableChannel {
            name: "fullDecoherence",
            channel: build_channel(&ChannelSpec::FullDecoherence(basis))?,
            direct: Box::new(move |r| decohere_full(r, &b1)),
        },
        TableChannel {
            name: "partialDecoherence",
            channel: build_channel(&ChannelSpec::PartialDecoherence { basis: b2.clone(), s })?,
            direct: Box::new(move |r| decohere_partial(r, &b2, s)),
        },
        TableChannel {
            name: "incoherentSum",
            channel: build_channel(&ChannelSpec::IncoherentSum(ens))?,
            direct: Box::new(move |r| incoherent_sum(&e1, r)),
        },
    ])
}

/// `rho -> tr(rho) |0><0|` with its monotone attestation overridden.
pub fn injected_fault_channel(n: usize) -> Result<SuperScattering> {
    let chan = SuperScattering::from_action(n, |x| ComplexMatrix::unit(n, 0, 0).scale_c(x.trace()), 0)?;
    Ok(chan.assume_monotone())
}

/// Channels claiming monotonicity that the channel suites exercise.
fn monotone_channels(rng: &mut SampleRng, opts: &AuditOptions, dims: (usize, usize)) -> Result<Vec<(&'static str, SuperScattering)>> {
    let mut out: Vec<(&'static str, SuperScattering)> =
        table_channels(rng, dims)?.into_iter().map(|t| (t.name, t.channel)).collect();
    if opts.inject_fault {
        out.push(("injectedReplacement", injected_fault_channel(dims.0 * dims.1)?));
    }
    Ok(out)
}

fn channel_dims(rng: &mut SampleRng, max_dim: usize) -> (usize, usize) {
    bipartite_dims(rng, max_dim)
}

fn channel_agreement(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..10 {
        let dims = channel_dims(rng, opts.max_dim);
        let table = table_channels(rng, dims)?;
        for _ in 0..10 {
            let rho = random_state(rng, dims.0 * dims.1)?.into_bipartite(dims)?;
            for t in &table {
                let via = t.channel.apply(&rho)?;
                let direct = (t.direct)(&rho)?;
                let diff = via.matrix().max_abs_diff(direct.matrix());
                c.check_eq(diff, 1e-10, || json!({"sample": k, "channel": t.name, "dims": dims}));
            }
        }
    }
    Ok(())
}

fn trace_preservation(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..10 {
        let dims = channel_dims(rng, opts.max_dim);
        for (name, chan) in monotone_channels(rng, opts, dims)? {
            let n = chan.dim();
            let delta = chan.generator();
            // tr(unvec(Delta vec(E_kl))) summed over the diagonal rows.
            for col in 0..n * n {
                let tr: crate::linalg::C64 = (0..n).map(|i| delta[(i * n + i, col)]).sum();
                c.check_eq(tr.norm(), 1e-10, || json!({"sample": k, "channel": name, "matrixUnit": [col / n, col % n]}));
            }
        }
    }
    Ok(())
}

fn channel_monotone(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..10 {
        let dims = channel_dims(rng, opts.max_dim);
        let chans = monotone_channels(rng, opts, dims)?;
        for j in 0..10 {
            let rho = random_state(rng, dims.0 * dims.1)?.into_bipartite(dims)?;
            let before = von_neumann_entropy(&rho);
            for (name, chan) in &chans {
                let after = von_neumann_entropy(&chan.apply(&rho)?);
                c.check(after - before, 1e-9, || {
                    json!({
                        "sample": k, "state": j, "channel": name, "dims": dims,
                        "violated": "S($ rho) >= S(rho)",
                        "entropyBefore": before, "entropyAfter": after,
                        "rho": matrix_json(rho.matrix()),
                    })
                });
            }
        }
    }
    Ok(())
}

fn diffusion_dims(rng: &mut SampleRng, opts: &AuditOptions) -> (usize, usize) {
    bipartite_dims(rng, opts.max_dim.min(AuditOptions::DIFFUSION_DIM_CAP))
}

fn diffusion_semigroup(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..4 {
        let dims = diffusion_dims(rng, opts);
        for (name, chan) in monotone_channels(rng, opts, dims)? {
            let t1: f64 = rng.random_range(0.0..3.0);
            let t2: f64 = rng.random_range(0.0..3.0);
            let rho = random_state(rng, dims.0 * dims.1)?;
            let joint = DiffusionPropagator::new(&chan, t1 + t2)?.apply(&rho)?;
            let split = DiffusionPropagator::new(&chan, t2)?.apply(&DiffusionPropagator::new(&chan, t1)?.apply(&rho)?)?;
            let diff = joint.matrix().max_abs_diff(split.matrix());
            c.check_eq(diff, 1e-9, || json!({"sample": k, "channel": name, "t1": t1, "t2": t2}));
        }
    }
    Ok(())
}

fn hilbert_diffusion_monotone(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    const POINTS: usize = 20;
    for k in 0..4 {
        let dims = diffusion_dims(rng, opts);
        for (name, chan) in monotone_channels(rng, opts, dims)? {
            let rho = random_state(rng, dims.0 * dims.1)?;
            let dt = 10.0 / (POINTS - 1) as f64;
            let step = DiffusionPropagator::new(&chan, dt)?;
            let mut state = rho.clone();
            let mut s = von_neumann_entropy(&state);
            for i in 1..POINTS {
                state = step.apply(&state)?;
                let next = von_neumann_entropy(&state);
                c.check(next - s, 1e-9, || {
                    json!({
                        "sample": k, "channel": name, "t": i as f64 * dt,
                        "violated": "S(rho_t) non-decreasing in t",
                        "entropyBefore": s, "entropyAfter": next,
                        "rho": matrix_json(rho.matrix()),
                    })
                });
                s = next;
            }
        }
    }
    Ok(())
}

fn convergence(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..4 {
        let dims = diffusion_dims(rng, opts);
        let n = dims.0 * dims.1;
        let rho = random_state(rng, n)?.into_bipartite(dims)?;
        let s: f64 = rng.random_range(0.2..=1.0);
        let mixed = ComplexMatrix::identity(n).scale(1.0 / n as f64);
        let basis = ProjectorBasis::from_unitary(&random_unitary(rng, n))?;
        let cases: Vec<(&str, ChannelSpec, ComplexMatrix)> = vec![
            ("maximal", ChannelSpec::Maximal { dim: n, s }, mixed.clone()),
            ("partialMaximalTuneable", ChannelSpec::PartialMaximalTuneable { dims, s }, asymmetric_mix(&rho)?.matrix().clone()),
            ("partialDecoherence", ChannelSpec::PartialDecoherence { basis: basis.clone(), s }, decohere_full(&rho, &basis)?.matrix().clone()),
        ];
        for (name, spec, target) in cases {
            // The slowest mode of these generators decays like exp(-s t).
            let out = DiffusionPropagator::new(&build_channel(&spec)?, 40.0 / s)?.apply(&rho)?;
            let dist = out.matrix().frobenius_distance(&target);
            c.check(1e-6 - dist, 0.0, || json!({"sample": k, "channel": name, "s": s, "distance": dist}));
        }
    }
    Ok(())
}

fn partial_trace_diffusion_suite(rng: &mut SampleRng, opts: &AuditOptions, c: &mut Checker) -> Result<()> {
    for k in 0..QUANTUM_SAMPLES {
        let rho = random_bipartite(rng, opts.max_dim)?;
        let mut prev = von_neumann_entropy(&rho);
        for i in 1..20 {
            let t = 0.5 * i as f64;
            let a = partial_trace_diffusion(&rho, t)?;
            let b = tuneable_partial_trace(&rho, -(-t).exp_m1())?;
            c.check_eq(a.matrix().max_abs_diff(b.matrix()), 1e-12, || json!({"sample": k, "t": t}));
            let s = von_neumann_entropy(&a);
            c.check(s - prev, 1e-9, || json!({"sample": k, "t": t, "before": prev, "after": s}));
            prev = s;
        }
        let marginal = rho.marginal(Subsystem::A)?;
        c.check(marginal.min_eigenvalue() + 1e-10, 0.0, || json!({"sample": k}));
    }
    Ok(())
}

const SUITES: &[Suite] = &[
    Suite { name: "shannonRange", inequality: "0 <= S(p) <= ln N", body: shannon_range },
    Suite { name: "aggregationMonotone", inequality: "S(aggregate(p)) >= S(p)", body: aggregation_monotone },
    Suite { name: "boxAveraging", inequality: "S(rho_B) >= S(rho)", body: box_averaging },
    Suite { name: "boxIdentity", inequality: "S(rho_B) = S_B + ln(rho* Vbar)", body: box_identity },
    Suite { name: "rhoStarInvariance", inequality: "hidden information independent of rho*", body: rho_star_invariance },
    Suite { name: "classicalDiffusion", inequality: "S(rho_t) non-decreasing, mass conserved", body: classical_diffusion_monotone },
    Suite { name: "stateValidity", inequality: "coarse-grained outputs are density matrices with 0 <= S <= ln N", body: state_validity },
    Suite { name: "concavity", inequality: "S((1-s) a + s b) >= (1-s) S(a) + s S(b)", body: concavity },
    Suite { name: "triangle", inequality: "|S_A - S_B| <= S_AB <= S_A + S_B", body: triangle },
    Suite { name: "klein", inequality: "D(rho || sigma) >= 0", body: klein },
    Suite { name: "decoherenceIdentity", inequality: "S(rho_D) - S(rho) = D(rho || rho_D)", body: decoherence_identity },
    Suite { name: "familyMonotone", inequality: "S(rho_s) non-decreasing in s", body: family_monotone },
    Suite { name: "familyBounds", inequality: "lower(s) <= I(s) <= upper", body: family_bounds },
    Suite { name: "idempotence", inequality: "N(N(rho)) = N(rho)", body: idempotence },
    Suite { name: "channelAgreement", inequality: "unvec($ vec rho) = direct operation", body: channel_agreement },
    Suite { name: "tracePreservation", inequality: "tr(Delta E_kl) = 0", body: trace_preservation },
    Suite { name: "channelMonotone", inequality: "S($ rho) >= S(rho)", body: channel_monotone },
    Suite { name: "diffusionSemigroup", inequality: "rho_(t1+t2) = exp(t2 Delta) exp(t1 Delta) rho", body: diffusion_semigroup },
    Suite { name: "hilbertDiffusionMonotone", inequality: "S(rho_t) non-decreasing in t", body: hilbert_diffusion_monotone },
    Suite { name: "convergence", inequality: "||rho_(40/s) - fixed point||_F <= 1e-6", body: convergence },
    Suite { name: "partialTraceDiffusion", inequality: "rho_t = tuneable partial trace at s = 1 - e^-t", body: partial_trace_diffusion_suite },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn suite_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_suite(index: usize, suite: &Suite, opts: &AuditOptions) -> SuiteResult {
    let mut rng = rng_from_seed(suite_seed(opts.seed, index));
    let mut c = Checker::new();
    if let Err(e) = (suite.body)(&mut rng, opts, &mut c) {
        c.check(f64::NEG_INFINITY, 0.0, || json!({"error": e.to_string()}));
    }
    SuiteResult {
        name: suite.name,
        inequality: suite.inequality,
        checked: c.checked,
        worst_margin: c.worst,
        passed: c.counterexample.is_none(),
        counterexample: c.counterexample,
    }
}

/// Thread count from [`THREADS_ENV`], or `None` for rayon's default.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs every suite. Suites run in parallel; each is sequential with its
/// own seed, so the report does not depend on the thread count.
pub fn audit(opts: &AuditOptions) -> Result<AuditReport> {
    if opts.max_dim < 2 || opts.max_dim > AuditOptions::MAX_SUPPORTED_DIM {
        return Err(Error::Config(format!(
            "max dimension {} outside 2..={}",
            opts.max_dim,
            AuditOptions::MAX_SUPPORTED_DIM
        )));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let suites = pool.install(|| {
        SUITES
            .par_iter()
            .enumerate()
            .map(|(i, s)| run_suite(i, s, opts))
            .collect::<Vec<_>>()
    });
    Ok(AuditReport {
        seed: opts.seed,
        max_dim: opts.max_dim,
        inject_fault: opts.inject_fault,
        suites,
    })
}
