//! Matrix exponential for general (non-normal) complex matrices.
//!
//! Scaling and squaring with a truncated Taylor series: `A` is scaled by
//! `2^-k` until `||A / 2^k||_1 <= 0.5`, the series is summed to 18 terms and
//! the result squared `k` times. At that norm the truncation error of the
//! series is below `0.5^19 / 19!`, far under double precision.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const TAYLOR_TERMS: usize = 18;
pub const SCALED_NORM_BOUND: f64 = 0.5;

pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let norm = a.one_norm();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > SCALED_NORM_BOUND {
        squarings += 1;
    }
    let scaled = a.scale(2f64.powi(-(squarings as i32)));

    let n = a.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=TAYLOR_TERMS {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(sum)
}
