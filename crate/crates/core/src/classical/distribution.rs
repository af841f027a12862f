use crate::error::{Error, Result};

/// Normalization tolerance of a [`ProbabilityVector`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Finite discrete distribution `{p_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, NORMALIZATION_TOL)
    }

    pub(crate) fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "p[{i}] = {p} is negative or not finite"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl AsRef<[f64]> for ProbabilityVector {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// `-p ln p` with `0 ln 0 = 0`.
#[inline]
pub(crate) fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Shannon entropy `-sum p_i ln p_i` in nats, in `[0, ln N]`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    p.probs.iter().map(|&x| entropy_term(x)).sum()
}

/// `ln N - S`, the information still available relative to the uniform state.
pub fn negentropy(p: &ProbabilityVector) -> f64 {
    ((p.len() as f64).ln() - shannon_entropy(p)).max(0.0)
}

fn check_pair(p: &ProbabilityVector, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Err(Error::IndexError(format!("indices coincide ({a})")));
    }
    let n = p.len();
    if a >= n || b >= n {
        return Err(Error::IndexError(format!(
            "pair ({a}, {b}) outside a distribution of length {n}"
        )));
    }
    Ok(())
}

/// Replaces `p_a` and `p_b` by their mean. The number of states is unchanged.
pub fn aggregate_naive(p: &ProbabilityVector, a: usize, b: usize) -> Result<ProbabilityVector> {
    check_pair(p, a, b)?;
    let mean = 0.5 * (p.probs[a] + p.probs[b]);
    let mut out = p.probs.clone();
    out[a] = mean;
    out[b] = mean;
    let out = ProbabilityVector { probs: out };
    debug_assert!(shannon_entropy(&out) >= shannon_entropy(p) - 1e-12);
    Ok(out)
}

/// `p_a' = l p_a + (1-l) p_b`, `p_b' = (1-l) p_a + l p_b` for `l` in `(0, 1)`.
///
/// The pair mean is unchanged and the gap shrinks by `|2l - 1|`.
pub fn aggregate_asymmetric(
    p: &ProbabilityVector,
    a: usize,
    b: usize,
    lambda: f64,
) -> Result<ProbabilityVector> {
    check_pair(p, a, b)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let (pa, pb) = (p.probs[a], p.probs[b]);
    let mut out = p.probs.clone();
    out[a] = lambda * pa + (1.0 - lambda) * pb;
    out[b] = (1.0 - lambda) * pa + lambda * pb;
    let out = ProbabilityVector { probs: out };
    debug_assert!(shannon_entropy(&out) >= shannon_entropy(p) - 1e-12);
    Ok(out)
}
