use super::channel::{finish_state, SuperScattering};
use crate::error::{Error, Result};
use crate::linalg::{expm, unvectorize, vectorize, ComplexMatrix};
use crate::quantum::{reduced_product_kernel, DensityMatrix};

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// `exp(t Delta)` for a monotone channel, reusable across states.
#[derive(Clone, Debug)]
pub struct DiffusionPropagator {
    dim: usize,
    t: f64,
    matrix: ComplexMatrix,
}

impl DiffusionPropagator {
    pub fn new(chan: &SuperScattering, t: f64) -> Result<Self> {
        if !chan.is_monotone() {
            return Err(Error::NonMonotoneChannel);
        }
        check_time(t)?;
        let n2 = chan.dim() * chan.dim();
        let matrix = if t == 0.0 {
            ComplexMatrix::identity(n2)
        } else {
            expm(&chan.generator().scale(t))?
        };
        Ok(Self {
            dim: chan.dim(),
            t,
            matrix,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "propagator on dimension {} applied to a state of dimension {}",
                self.dim,
                rho.dim()
            )));
        }
        if self.t == 0.0 {
            return Ok(rho.clone());
        }
        let out = unvectorize(&self.matrix.apply_vec(&vectorize(rho.matrix()))?, self.dim)?;
        finish_state(out, rho.bipartition())
    }
}

/// `rho_t = exp(t ($ - I)) rho`. Requires a monotone channel and `t >= 0`;
/// `t = 0` returns `rho` unchanged.
pub fn hilbert_diffusion(chan: &SuperScattering, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    DiffusionPropagator::new(chan, t)?.apply(rho)
}

/// `rho_t = e^-t rho_AB + (1 - e^-t) rho_A (x) rho_B`: diffusion generated by
/// the (nonlinear, idempotent) reduced-product map.
pub fn partial_trace_diffusion(rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let dims = rho.require_bipartition()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let decay = (-t).exp();
    let product = reduced_product_kernel(rho.matrix(), dims)?;
    let out = rho.matrix().lin_comb(decay, &product, -(-t).exp_m1());
    DensityMatrix::from_computed(out, Some(dims))
}

/// `||N(w a + (1-w) b) - (w N(a) + (1-w) N(b))||_F` for the reduced-product
/// map `N`. Zero for every pair would mean `N` is affine on states.
pub fn reduced_product_additivity_defect(a: &DensityMatrix, b: &DensityMatrix, w: f64) -> Result<f64> {
    let dims = a.require_bipartition()?;
    if b.bipartition() != Some(dims) {
        return Err(Error::DimensionMismatch("states with different bipartitions".into()));
    }
    let mix = a.matrix().lin_comb(w, b.matrix(), 1.0 - w);
    let lhs = reduced_product_kernel(&mix, dims)?;
    let rhs = reduced_product_kernel(a.matrix(), dims)?.lin_comb(w, &reduced_product_kernel(b.matrix(), dims)?, 1.0 - w);
    Ok(lhs.frobenius_distance(&rhs))
}

/// An explicit pair on which the reduced product is not additive: the Bell
/// state and `|00><00|`, mixed equally.
pub fn reduced_product_nonlinearity_witness() -> Result<(DensityMatrix, DensityMatrix, f64)> {
    let bell = DensityMatrix::bell();
    let zero = DensityMatrix::basis_state(4, 0)?.into_bipartite((2, 2))?;
    let defect = reduced_product_additivity_defect(&bell, &zero, 0.5)?;
    Ok((bell, zero, defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigendecompose, C64};
    use crate::quantum::{tuneable_partial_trace, von_neumann_entropy, ProjectorBasis};
    use crate::sampling::{random_bipartite_state, rng_from_seed};
    use crate::superscattering::{build_channel, ChannelSpec};

    fn plus() -> DensityMatrix {
        let h = 0.5f64.sqrt();
        DensityMatrix::pure(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn decoherence_diffusion_closed_form() {
        let chan = build_channel(&ChannelSpec::FullDecoherence(ProjectorBasis::computational(2))).unwrap();
        let rho = hilbert_diffusion(&chan, &plus(), 1.0).unwrap();
        let e = (-1.0f64).exp();
        let expected = ComplexMatrix::from_real(2, 2, &[0.5, 0.5 * e, 0.5 * e, 0.5]).unwrap();
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-14);
        let eig = hermitian_eigendecompose(rho.matrix()).unwrap().eigenvalues;
        assert!((eig[0] - 0.5 * (1.0 - e)).abs() < 1e-14);
        assert!((eig[1] - 0.5 * (1.0 + e)).abs() < 1e-14);
        let (p, q) = (0.5 * (1.0 + e), 0.5 * (1.0 - e));
        let oracle = -(p * p.ln() + q * q.ln());
        assert!((von_neumann_entropy(&rho) - oracle).abs() < 1e-13);
        assert!((oracle - 0.623864).abs() < 1e-6);
    }

    #[test]
    fn time_zero_and_errors() {
        let chan = build_channel(&ChannelSpec::Maximal { dim: 2, s: 1.0 }).unwrap();
        assert_eq!(hilbert_diffusion(&chan, &plus(), 0.0).unwrap(), plus());
        assert!(matches!(hilbert_diffusion(&chan, &plus(), -1.0), Err(Error::NegativeTime(_))));
        let reset = SuperScattering::from_action(2, |x| ComplexMatrix::unit(2, 0, 0).scale_c(x.trace()), 0).unwrap();
        assert!(matches!(hilbert_diffusion(&reset, &plus(), 1.0), Err(Error::NonMonotoneChannel)));
    }

    #[test]
    fn maximally_mixed_is_fixed() {
        let chan = build_channel(&ChannelSpec::Maximal { dim: 3, s: 0.4 }).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        for t in [0.5, 3.0, 20.0] {
            let out = hilbert_diffusion(&chan, &mixed, t).unwrap();
            assert!(out.matrix().max_abs_diff(mixed.matrix()) < 1e-14);
        }
    }

    #[test]
    fn partial_trace_diffusion_matches_tuning() {
        let rho = random_bipartite_state(&mut rng_from_seed(8), 2, 3).unwrap();
        for t in [0.1, 2f64.ln(), 3.0] {
            let a = partial_trace_diffusion(&rho, t).unwrap();
            let b = tuneable_partial_trace(&rho, 1.0 - (-t).exp()).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
        let bell = partial_trace_diffusion(&DensityMatrix::bell(), 2f64.ln()).unwrap();
        let oracle = -(0.625f64 * 0.625f64.ln() + 3.0 * 0.125 * 0.125f64.ln());
        assert!((von_neumann_entropy(&bell) - oracle).abs() < 1e-12);
    }

    #[test]
    fn witness_is_nonzero() {
        let (_, _, defect) = reduced_product_nonlinearity_witness().unwrap();
        assert!(defect > 0.1, "defect {defect}");
        assert!(matches!(
            SuperScattering::from_action(4, |x| reduced_product_kernel(x, (2, 2)).unwrap(), 0),
            Err(Error::NonlinearAction { .. })
        ));
    }
}
