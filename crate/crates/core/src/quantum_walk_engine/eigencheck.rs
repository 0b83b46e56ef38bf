use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::Walk;
use crate::classical_walk::guard;
use crate::error::{QwError, Result};
use crate::unit_circle_spectrum::{build_poly, roots};

/// Largest `n^d` for which dense per-mode matrices are formed.
pub const EIGEN_LIMIT: usize = 1024;

const CONTAINMENT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct EigencheckReport {
    pub xi: usize,
    pub weight: usize,
    pub rho: f64,
    /// Values required to appear in the spectrum.
    pub expected: Vec<Complex64>,
    pub eigenvalues: Vec<Complex64>,
    /// Largest distance from an expected value to the nearest eigenvalue.
    pub max_gap: f64,
    pub passed: bool,
}

/// Eigenvalues of `M_ξ = diag(η^{-ξ·y}) C` against the zeros of the mode
/// polynomial at `ρ_{|ξ|}`. For `ξ = 0` the expected set is `{1}`.
pub fn mode_unitary_eigencheck(walk: &Walk, xi: usize) -> Result<EigencheckReport> {
    let size = walk.size();
    guard(size, EIGEN_LIMIT, "per-mode eigensolve")?;
    if xi >= size {
        return Err(QwError::DimensionMismatch {
            expected: size,
            found: xi,
        });
    }
    let space = walk.space();
    let p = walk.coin().p();
    let eta = walk.roots_of_unity();
    let m = DMatrix::from_fn(size, size, |a, b| {
        let coin = 2.0 * p[a] * p[b] - if a == b { 1.0 } else { 0.0 };
        eta.pow(-(space.dot(xi, a) as i64)) * coin
    });
    let eigenvalues: Vec<Complex64> = Schur::new(m)
        .eigenvalues()
        .ok_or_else(|| {
            QwError::HypothesisViolated("complex Schur form did not triangularize".into())
        })?
        .iter()
        .copied()
        .collect();
    let weight = space.weight(xi);
    let rho = walk.spectrum().rho()[weight];
    let expected = if xi == 0 {
        vec![Complex64::new(1.0, 0.0)]
    } else {
        roots(&build_poly(rho, walk.params().n())?)?
    };
    let max_gap = expected
        .iter()
        .map(|z| {
            eigenvalues
                .iter()
                .map(|e| (e - z).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(EigencheckReport {
        xi,
        weight,
        rho,
        expected,
        eigenvalues,
        max_gap,
        passed: max_gap <= CONTAINMENT_TOL,
    })
}
