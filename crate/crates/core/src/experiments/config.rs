//! Experiment configuration files.
//!
//! The top level is checked first (`version`, `kind`, `seed`, ...); the
//! `initialState` and `parameters` objects are then parsed against the
//! schema of the declared kind. Unknown fields are rejected everywhere.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;

use crate::classical::{BoxPartition, GridDensity, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{CoarseFamily, DensityMatrix, ProjectorBasis};
use crate::sampling::{
    random_density_matrix_with_rank, random_grid_density, random_probability_vector,
    random_unitary, SampleRng,
};
use crate::superscattering::{ChannelLabel, ChannelSpec, UnitaryEnsemble};

pub const CONFIG_VERSION: u32 = 1;

/// What an experiment computes; one CSV schema per kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    ClassicalDiffusion,
    ClassicalBoxFlow,
    AggregationSweep,
    QuantumFamilyCurve,
    HilbertDiffusion,
    PartialTraceDiffusion,
    AuditAll,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::ClassicalDiffusion,
        ExperimentKind::ClassicalBoxFlow,
        ExperimentKind::AggregationSweep,
        ExperimentKind::QuantumFamilyCurve,
        ExperimentKind::HilbertDiffusion,
        ExperimentKind::PartialTraceDiffusion,
        ExperimentKind::AuditAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ClassicalDiffusion => "classicalDiffusion",
            ExperimentKind::ClassicalBoxFlow => "classicalBoxFlow",
            ExperimentKind::AggregationSweep => "aggregationSweep",
            ExperimentKind::QuantumFamilyCurve => "quantumFamilyCurve",
            ExperimentKind::HilbertDiffusion => "hilbertDiffusion",
            ExperimentKind::PartialTraceDiffusion => "partialTraceDiffusion",
            ExperimentKind::AuditAll => "auditAll",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

/// Which files a run writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn writes_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn writes_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

/// `path` is a file stem: `<path>.csv` and `<path>.json` are written.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawConfig {
    version: u32,
    kind: String,
    seed: u64,
    #[serde(default)]
    initial_state: Option<Value>,
    #[serde(default)]
    parameters: Option<Value>,
    #[serde(default)]
    output: Option<OutputSpec>,
}

// ---------------------------------------------------------------- states

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MatrixLiteral {
    pub real: Vec<Vec<f64>>,
    #[serde(default)]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl MatrixLiteral {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.real.len();
        if n == 0 || self.real.iter().any(|r| r.len() != self.real[0].len()) {
            return Err(Error::Config("matrix literal rows must be non-empty and equal length".into()));
        }
        let cols = self.real[0].len();
        if let Some(im) = &self.imag {
            if im.len() != n || im.iter().any(|r| r.len() != cols) {
                return Err(Error::Config("imag part shape differs from real part".into()));
            }
        }
        let mut data = Vec::with_capacity(n * cols);
        for i in 0..n {
            for j in 0..cols {
                let im = self.imag.as_ref().map_or(0.0, |m| m[i][j]);
                data.push(C64::new(self.real[i][j], im));
            }
        }
        ComplexMatrix::new(n, cols, data).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GridGenerator {
    Spike,
    Uniform,
    Gaussian,
    RandomSeeded,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GridSpec {
    pub generator: GridGenerator,
    pub shape: Vec<usize>,
    /// Defaults to `1 / shape[i]` (the unit box).
    #[serde(default)]
    pub spacing: Option<Vec<f64>>,
    #[serde(default)]
    pub rho_star: Option<f64>,
    /// Spike location; defaults to the middle cell.
    #[serde(default)]
    pub cell: Option<Vec<usize>>,
    /// Gaussian centre in physical units; defaults to the box centre.
    #[serde(default)]
    pub centre: Option<Vec<f64>>,
    #[serde(default)]
    pub width: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum StateSpec {
    ProbabilityVector {
        #[serde(default)]
        probs: Option<Vec<f64>>,
        /// Draw a random vector of this length instead.
        #[serde(default)]
        random: Option<usize>,
    },
    Grid(GridSpec),
    DensityMatrix {
        #[serde(flatten)]
        matrix: MatrixLiteral,
        #[serde(default)]
        bipartition: Option<[usize; 2]>,
    },
    Pure {
        /// `[re, im]` pairs.
        amplitudes: Vec<[f64; 2]>,
        #[serde(default)]
        bipartition: Option<[usize; 2]>,
    },
    Bell {},
    MaximallyMixed {
        dim: usize,
        #[serde(default)]
        bipartition: Option<[usize; 2]>,
    },
    RandomSeeded {
        #[serde(default)]
        dim: Option<usize>,
        #[serde(default)]
        bipartition: Option<[usize; 2]>,
        #[serde(default)]
        rank: Option<usize>,
    },
}

fn cfg<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(other.to_string()),
    })
}

impl GridSpec {
    pub fn build(&self, rng: &mut SampleRng) -> Result<GridDensity> {
        let spacing = match &self.spacing {
            Some(s) => s.clone(),
            None => self.shape.iter().map(|&n| 1.0 / n.max(1) as f64).collect(),
        };
        let rho_star = self.rho_star.unwrap_or(1.0);
        let shape = self.shape.clone();
        cfg(match self.generator {
            GridGenerator::Uniform => GridDensity::uniform(shape, spacing, rho_star),
            GridGenerator::Spike => {
                let idx = match &self.cell {
                    Some(c) => c.clone(),
                    None => shape.iter().map(|n| n / 2).collect(),
                };
                if idx.len() != shape.len() || idx.iter().zip(&shape).any(|(i, n)| i >= n) {
                    return Err(Error::Config(format!("spike cell {idx:?} outside shape {shape:?}")));
                }
                let flat = idx.iter().zip(&shape).fold(0, |acc, (i, n)| acc * n + i);
                GridDensity::spike(shape, spacing, flat, rho_star)
            }
            GridGenerator::Gaussian => {
                let centre = match &self.centre {
                    Some(c) => c.clone(),
                    None => shape.iter().zip(&spacing).map(|(n, h)| 0.5 * *n as f64 * h).collect(),
                };
                if centre.len() != shape.len() {
                    return Err(Error::Config("centre has the wrong number of axes".into()));
                }
                let w = self.width.unwrap_or(0.1);
                if !(w > 0.0) {
                    return Err(Error::Config(format!("gaussian width {w} must be positive")));
                }
                GridDensity::from_fn(shape, spacing, rho_star, move |x| {
                    let r2: f64 = x.iter().zip(&centre).map(|(a, c)| (a - c) * (a - c)).sum();
                    (-0.5 * r2 / (w * w)).exp()
                })
            }
            GridGenerator::RandomSeeded => random_grid_density(rng, shape, spacing, rho_star),
        })
    }
}

impl StateSpec {
    pub fn probability_vector(&self, rng: &mut SampleRng) -> Result<ProbabilityVector> {
        match self {
            StateSpec::ProbabilityVector { probs: Some(p), random: None } => cfg(ProbabilityVector::new(p.clone())),
            StateSpec::ProbabilityVector { probs: None, random: Some(n) } => cfg(random_probability_vector(rng, *n)),
            StateSpec::ProbabilityVector { .. } => Err(Error::Config(
                "probabilityVector needs exactly one of probs or random".into(),
            )),
            _ => Err(Error::Config("this kind needs a probabilityVector initial state".into())),
        }
    }

    pub fn grid(&self, rng: &mut SampleRng) -> Result<GridDensity> {
        match self {
            StateSpec::Grid(g) => g.build(rng),
            _ => Err(Error::Config("this kind needs a grid initial state".into())),
        }
    }

    pub fn density_matrix(&self, rng: &mut SampleRng) -> Result<DensityMatrix> {
        let (rho, bip) = match self {
            StateSpec::DensityMatrix { matrix, bipartition } => {
                (cfg(DensityMatrix::new(matrix.to_matrix()?))?, *bipartition)
            }
            StateSpec::Pure { amplitudes, bipartition } => {
                let psi: Vec<C64> = amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                (cfg(DensityMatrix::pure(&psi))?, *bipartition)
            }
            StateSpec::Bell {} => (DensityMatrix::bell(), Some([2, 2])),
            StateSpec::MaximallyMixed { dim, bipartition } => {
                (cfg(DensityMatrix::maximally_mixed(*dim))?, *bipartition)
            }
            StateSpec::RandomSeeded { dim, bipartition, rank } => {
                let n = match (dim, bipartition) {
                    (Some(d), Some([a, b])) if d != &(a * b) => {
                        return Err(Error::Config(format!("dim {d} does not match bipartition {a}x{b}")))
                    }
                    (Some(d), _) => *d,
                    (None, Some([a, b])) => a * b,
                    (None, None) => return Err(Error::Config("randomSeeded needs dim or bipartition".into())),
                };
                let r = rank.unwrap_or(n);
                (cfg(random_density_matrix_with_rank(rng, n, r))?, *bipartition)
            }
            _ => return Err(Error::Config("this kind needs a quantum initial state".into())),
        };
        match bip {
            Some([a, b]) => cfg(rho.into_bipartite((a, b))),
            None => Ok(rho),
        }
    }
}

// ---------------------------------------------------------------- parameters

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiffusionParams {
    pub sigma: f64,
    /// Defaults to the largest stable step.
    #[serde(default)]
    pub step: Option<f64>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BoxFlowParams {
    pub sigma: f64,
    #[serde(default)]
    pub step: Option<f64>,
    pub steps: usize,
    /// Equal slabs along the first axis.
    #[serde(default)]
    pub boxes: Option<usize>,
    /// Explicit box label per cell.
    #[serde(default)]
    pub labels: Option<Vec<usize>>,
}

impl BoxFlowParams {
    pub fn partition(&self, grid: &GridDensity) -> Result<BoxPartition> {
        cfg(match (&self.boxes, &self.labels) {
            (Some(k), None) => BoxPartition::slabs(grid, *k),
            (None, Some(l)) => BoxPartition::new(l.clone(), grid.cell_volume()),
            _ => return Err(Error::Config("give exactly one of boxes or labels".into())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AggregationMode {
    Naive,
    Asymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum PairOrder {
    /// `(k mod N, k+1 mod N)` on round `k`.
    #[default]
    Cyclic,
    Random,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AggregationParams {
    pub mode: AggregationMode,
    #[serde(default)]
    pub lambda: Option<f64>,
    pub rounds: usize,
    #[serde(default)]
    pub pairs: PairOrder,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum BasisSpec {
    Computational {},
    /// Projectors onto the columns.
    Unitary {
        #[serde(flatten)]
        matrix: MatrixLiteral,
    },
    RandomSeeded {},
}

impl BasisSpec {
    pub fn build(&self, n: usize, rng: &mut SampleRng) -> Result<ProjectorBasis> {
        let basis = match self {
            BasisSpec::Computational {} => ProjectorBasis::computational(n),
            BasisSpec::Unitary { matrix } => cfg(ProjectorBasis::from_unitary(&matrix.to_matrix()?))?,
            BasisSpec::RandomSeeded {} => cfg(ProjectorBasis::from_unitary(&random_unitary(rng, n)))?,
        };
        if basis.dim() != n {
            return Err(Error::Config(format!(
                "basis of dimension {} for a state of dimension {n}",
                basis.dim()
            )));
        }
        Ok(basis)
    }
}

fn build_basis(spec: &Option<BasisSpec>, n: usize, rng: &mut SampleRng) -> Result<ProjectorBasis> {
    match spec {
        Some(b) => b.build(n, rng),
        None => Ok(ProjectorBasis::computational(n)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyName {
    MaximalMix,
    TuneablePartialTrace,
    TuneableAsymmetricMix,
    PartialDecoherence,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FamilyParams {
    pub family: FamilyName,
    #[serde(default)]
    pub s_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub s_points: Option<usize>,
    #[serde(default)]
    pub basis: Option<BasisSpec>,
}

impl FamilyParams {
    pub fn family(&self, n: usize, rng: &mut SampleRng) -> Result<CoarseFamily> {
        Ok(match self.family {
            FamilyName::MaximalMix => CoarseFamily::MaximalMix,
            FamilyName::TuneablePartialTrace => CoarseFamily::TuneablePartialTrace,
            FamilyName::TuneableAsymmetricMix => CoarseFamily::TuneableAsymmetricMix,
            FamilyName::PartialDecoherence => CoarseFamily::PartialDecoherence(build_basis(&self.basis, n, rng)?),
        })
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        sample_grid(&self.s_grid, self.s_points, 1.0, "s")
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EnsembleSpec {
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub unitaries: Option<Vec<MatrixLiteral>>,
    /// Equal-weight seeded random unitaries instead of literals.
    #[serde(default)]
    pub random: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ChannelConfig {
    pub label: String,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub basis: Option<BasisSpec>,
    #[serde(default)]
    pub ensemble: Option<EnsembleSpec>,
}

impl ChannelConfig {
    /// Channel on `rho`'s space; partial-maximal channels use its bipartition.
    pub fn spec(&self, rho: &DensityMatrix, rng: &mut SampleRng) -> Result<ChannelSpec> {
        let n = rho.dim();
        let label: ChannelLabel = self.label.parse()?;
        let need_s = || {
            self.s
                .ok_or_else(|| Error::Config(format!("channel {label} needs s")))
        };
        let dims = || {
            rho.bipartition()
                .ok_or_else(|| Error::Config(format!("channel {label} needs a bipartite initial state")))
        };
        Ok(match label {
            ChannelLabel::Maximal => ChannelSpec::Maximal { dim: n, s: need_s()? },
            ChannelLabel::PartialMaximal => ChannelSpec::PartialMaximal { dims: dims()? },
            ChannelLabel::PartialMaximalTuneable => ChannelSpec::PartialMaximalTuneable { dims: dims()?, s: need_s()? },
            ChannelLabel::FullDecoherence => ChannelSpec::FullDecoherence(build_basis(&self.basis, n, rng)?),
            ChannelLabel::PartialDecoherence => ChannelSpec::PartialDecoherence {
                basis: build_basis(&self.basis, n, rng)?,
                s: need_s()?,
            },
            ChannelLabel::IncoherentSum => {
                let e = self
                    .ensemble
                    .as_ref()
                    .ok_or_else(|| Error::Config("incoherentSum needs an ensemble".into()))?;
                ChannelSpec::IncoherentSum(e.build(n, rng)?)
            }
            ChannelLabel::Custom => {
                return Err(Error::Config("custom channels cannot be built from a config".into()))
            }
        })
    }
}

impl EnsembleSpec {
    fn build(&self, n: usize, rng: &mut SampleRng) -> Result<UnitaryEnsemble> {
        let unitaries = match (&self.unitaries, self.random) {
            (Some(us), None) => us.iter().map(|u| u.to_matrix()).collect::<Result<Vec<_>>>()?,
            (None, Some(k)) if k > 0 => (0..k).map(|_| random_unitary(rng, n)).collect(),
            _ => return Err(Error::Config("ensemble needs exactly one of unitaries or random (> 0)".into())),
        };
        let weights = match &self.weights {
            Some(w) => cfg(ProbabilityVector::new(w.clone()))?,
            None => cfg(ProbabilityVector::uniform(unitaries.len()))?,
        };
        cfg(UnitaryEnsemble::new(weights, unitaries))
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct HilbertParams {
    pub channel: ChannelConfig,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub t_points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TimeParams {
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub t_points: Option<usize>,
}

/// Defaults: `t` on `[0, 10]` with 21 points.
pub(crate) fn time_grid(grid: &Option<Vec<f64>>, t_max: Option<f64>, points: Option<usize>) -> Result<Vec<f64>> {
    if grid.is_some() && (t_max.is_some() || points.is_some()) {
        return Err(Error::Config("give tGrid or tMax/tPoints, not both".into()));
    }
    let t_max = t_max.unwrap_or(10.0);
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::Config(format!("tMax {t_max} must be non-negative")));
    }
    let g = sample_grid(grid, points, t_max, "t")?;
    if g.iter().any(|t| *t < 0.0) {
        return Err(Error::Config("times must be non-negative".into()));
    }
    Ok(g)
}

fn sample_grid(grid: &Option<Vec<f64>>, points: Option<usize>, end: f64, name: &str) -> Result<Vec<f64>> {
    let g = match (grid, points) {
        (Some(_), Some(_)) => return Err(Error::Config(format!("give {name}Grid or {name}Points, not both"))),
        (Some(g), None) => g.clone(),
        (None, p) => {
            let p = p.unwrap_or(21);
            if p == 0 {
                return Err(Error::Config(format!("{name}Points must be positive")));
            }
            crate::quantum::uniform_s_grid(p).into_iter().map(|x| x * end).collect()
        }
    };
    if g.is_empty() || g.iter().any(|x| !x.is_finite()) || g.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config(format!("{name} grid must be non-empty, finite and ascending")));
    }
    if end == 1.0 && g.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Config(format!("{name} values must lie in [0, 1]")));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AuditParams {
    #[serde(default)]
    pub max_dim: Option<usize>,
    #[serde(default)]
    pub inject_fault: Option<bool>,
}

/// Typed parameters for each kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Parameters {
    ClassicalDiffusion(DiffusionParams),
    ClassicalBoxFlow(BoxFlowParams),
    AggregationSweep(AggregationParams),
    QuantumFamilyCurve(FamilyParams),
    HilbertDiffusion(HilbertParams),
    PartialTraceDiffusion(TimeParams),
    AuditAll(AuditParams),
}

/// A validated experiment configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub initial_state: Option<StateSpec>,
    pub parameters: Parameters,
    pub output: Option<OutputSpec>,
    /// The input document, echoed into the summary.
    pub source: Value,
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("{what}: {e}")))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let source: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        let raw: RawConfig = typed(source.clone(), "config")?;
        if raw.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                raw.version
            )));
        }
        let kind: ExperimentKind = raw.kind.parse()?;
        let params = raw.parameters.unwrap_or_else(|| Value::Object(Default::default()));
        let parameters = match kind {
            ExperimentKind::ClassicalDiffusion => Parameters::ClassicalDiffusion(typed(params, "parameters")?),
            ExperimentKind::ClassicalBoxFlow => Parameters::ClassicalBoxFlow(typed(params, "parameters")?),
            ExperimentKind::AggregationSweep => Parameters::AggregationSweep(typed(params, "parameters")?),
            ExperimentKind::QuantumFamilyCurve => Parameters::QuantumFamilyCurve(typed(params, "parameters")?),
            ExperimentKind::HilbertDiffusion => Parameters::HilbertDiffusion(typed(params, "parameters")?),
            ExperimentKind::PartialTraceDiffusion => Parameters::PartialTraceDiffusion(typed(params, "parameters")?),
            ExperimentKind::AuditAll => Parameters::AuditAll(typed(params, "parameters")?),
        };
        let initial_state = match raw.initial_state {
            Some(v) => Some(typed::<StateSpec>(v, "initialState")?),
            None if kind == ExperimentKind::AuditAll => None,
            None => return Err(Error::Config(format!("{kind} needs an initialState"))),
        };
        Ok(Self {
            kind,
            seed: raw.seed,
            initial_state,
            parameters,
            output: raw.output,
            source,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub(crate) fn state(&self) -> Result<&StateSpec> {
        self.initial_state
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} needs an initialState", self.kind)))
    }
}
