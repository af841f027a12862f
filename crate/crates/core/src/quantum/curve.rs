use super::coarse::{decohere_full, decohere_partial, maximal_mix, tuneable_asymmetric_mix, tuneable_partial_trace};
use super::entropy::{von_neumann_entropy, BipartiteEntropies};
use super::state::{DensityMatrix, ProjectorBasis};
use crate::error::{Error, Result};

/// Number of points in [`default_s_grid`].
pub const DEFAULT_S_POINTS: usize = 21;

/// The one-parameter coarse-graining families.
#[derive(Clone, Debug, PartialEq)]
pub enum CoarseFamily {
    MaximalMix,
    TuneablePartialTrace,
    TuneableAsymmetricMix,
    PartialDecoherence(ProjectorBasis),
}

impl CoarseFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CoarseFamily::MaximalMix => "maximalMix",
            CoarseFamily::TuneablePartialTrace => "tuneablePartialTrace",
            CoarseFamily::TuneableAsymmetricMix => "tuneableAsymmetricMix",
            CoarseFamily::PartialDecoherence(_) => "partialDecoherence",
        }
    }

    pub fn apply(&self, rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
        match self {
            CoarseFamily::MaximalMix => maximal_mix(rho, s),
            CoarseFamily::TuneablePartialTrace => tuneable_partial_trace(rho, s),
            CoarseFamily::TuneableAsymmetricMix => tuneable_asymmetric_mix(rho, s),
            CoarseFamily::PartialDecoherence(basis) => decohere_partial(rho, basis, s),
        }
    }

    /// Hidden-information bounds at `s` as `(lower, upper)`:
    ///
    /// | family | lower | upper |
    /// |---|---|---|
    /// | maximal mix | `s (ln N - S)` | `ln N - S` |
    /// | partial trace | `s (S_A + S_B - S_AB)` | `2 min(S_A, S_B)` |
    /// | asymmetric mix | `s (S_A + ln N_B - S_AB)` | `S_A + ln N_B - S_AB` |
    /// | partial decoherence | `s (S(rho_D) - S)` | `ln N - S` |
    ///
    /// The partial-trace upper bound is the weak general one; the tighter
    /// `S_A + S_B - S_AB` also holds.
    pub fn hidden_information_bounds(&self, rho: &DensityMatrix, s: f64) -> Result<(f64, f64)> {
        Ok(FamilyBounds::new(self, rho)?.at(s))
    }
}

/// `s`-independent pieces of a family's bounds: `I_s` lies in
/// `[s * slope, cap]`.
#[derive(Clone, Copy, Debug)]
struct FamilyBounds {
    slope: f64,
    cap: f64,
}

impl FamilyBounds {
    fn new(family: &CoarseFamily, rho: &DensityMatrix) -> Result<Self> {
        let s0 = von_neumann_entropy(rho);
        let ln_n = (rho.dim() as f64).ln();
        Ok(match family {
            CoarseFamily::MaximalMix => Self {
                slope: ln_n - s0,
                cap: ln_n - s0,
            },
            CoarseFamily::TuneablePartialTrace => {
                let e = BipartiteEntropies::of(rho)?;
                Self {
                    slope: e.mutual_information(),
                    cap: 2.0 * e.a.min(e.b),
                }
            }
            CoarseFamily::TuneableAsymmetricMix => {
                let e = BipartiteEntropies::of(rho)?;
                let nb = rho.require_bipartition()?.1 as f64;
                let gap = e.a + nb.ln() - e.joint;
                Self { slope: gap, cap: gap }
            }
            CoarseFamily::PartialDecoherence(basis) => {
                let sd = von_neumann_entropy(&decohere_full(rho, basis)?);
                Self {
                    slope: sd - s0,
                    cap: ln_n - s0,
                }
            }
        })
    }

    fn at(&self, s: f64) -> (f64, f64) {
        (s * self.slope, self.cap)
    }
}

/// One sample of an entropy-flow curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    pub entropy: f64,
    /// `S(rho_s) - S(rho_0)`.
    pub hidden: f64,
    pub lower: f64,
    pub upper: f64,
}

impl CurvePoint {
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.hidden >= self.lower - tol && self.hidden <= self.upper + tol
    }
}

/// `DEFAULT_S_POINTS` evenly spaced values on `[0, 1]`, both ends exact.
pub fn default_s_grid() -> Vec<f64> {
    uniform_s_grid(DEFAULT_S_POINTS)
}

pub fn uniform_s_grid(points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points).map(|k| k as f64 / (points - 1) as f64).collect(),
    }
}

/// Entropy, hidden information and its bounds along `s_grid`.
pub fn entropy_flow_curve(
    family: &CoarseFamily,
    rho: &DensityMatrix,
    s_grid: &[f64],
) -> Result<Vec<CurvePoint>> {
    if s_grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::ParameterOutOfRange {
            name: "sGrid",
            value: s_grid.windows(2).find(|w| !(w[1] >= w[0])).map_or(f64::NAN, |w| w[1]),
        });
    }
    let bounds = FamilyBounds::new(family, rho)?;
    let s0 = von_neumann_entropy(rho);
    s_grid
        .iter()
        .map(|&s| {
            let entropy = von_neumann_entropy(&family.apply(rho, s)?);
            let (lower, upper) = bounds.at(s);
            Ok(CurvePoint {
                s,
                entropy,
                hidden: entropy - s0,
                lower,
                upper,
            })
        })
        .collect()
}
