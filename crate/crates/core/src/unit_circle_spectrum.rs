//! The per-mode characteristic polynomial
//! `p(z) = (-z)^n + 2ρ Σ_{i=1}^{n-1} (-z)^i + 1`, its zeros (all on the unit
//! circle for `-1/(n-1) ≤ ρ ≤ 1`), and the coefficients `c^{(i)}` that expand
//! the mode sum `a(t)` in powers of those zeros.

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{QwError, Result};
use crate::hamming_scheme::is_prime;

/// Allowed deviation of a computed root from the unit circle.
pub const UNIT_TOL: f64 = 1e-9;

/// Pairwise root distance below which a spectrum counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Tolerance for recognising the boundary values `ρ = 1` and `ρ = -1/(n-1)`.
pub const BOUNDARY_TOL: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Lower end of the admissible range, `-1/(n-1)`.
pub fn rho_lower(n: usize) -> f64 {
    -1.0 / (n as f64 - 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfReciprocalPoly {
    n: usize,
    rho: f64,
    /// `coeffs[i]` multiplies `z^i`.
    coeffs: Vec<f64>,
}

impl SelfReciprocalPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| {
                acc * z + c * i as f64
            })
    }

    pub fn is_at_upper_boundary(&self) -> bool {
        (self.rho - 1.0).abs() <= BOUNDARY_TOL
    }

    pub fn is_at_lower_boundary(&self) -> bool {
        (self.rho - rho_lower(self.n)).abs() <= BOUNDARY_TOL
    }
}

/// Coefficients of `(-z)^n + 2ρ Σ_{i=1}^{n-1} (-z)^i + 1`.
pub fn build_poly(rho: f64, n: usize) -> Result<SelfReciprocalPoly> {
    if !is_prime(n) {
        return Err(QwError::NotPrime(n));
    }
    check_rho(rho, n)?;
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    coeffs[n] = sign(n);
    for (i, c) in coeffs.iter_mut().enumerate().take(n).skip(1) {
        *c = 2.0 * rho * sign(i);
    }
    Ok(SelfReciprocalPoly { n, rho, coeffs })
}

fn check_rho(rho: f64, n: usize) -> Result<()> {
    let lower = rho_lower(n);
    if !rho.is_finite() || rho < lower - BOUNDARY_TOL || rho > 1.0 + BOUNDARY_TOL {
        return Err(QwError::RhoOutOfRange { rho, lower });
    }
    Ok(())
}

/// Coefficients of the unsubstituted polynomial `z^n + 2ρ Σ z^i + 1`.
pub fn parent_coeffs(rho: f64, n: usize) -> Vec<f64> {
    let mut c = vec![2.0 * rho; n + 1];
    c[0] = 1.0;
    c[n] = 1.0;
    c
}

/// Zeros of `poly`, on the unit circle and sorted by argument in `[0, 2π)`.
///
/// `n = 2` and `n = 3` use closed forms, the boundary values of ρ use the
/// known factorizations, and every other case goes through a balanced
/// companion-matrix eigensolve followed by one Newton step.
pub fn roots(poly: &SelfReciprocalPoly) -> Result<Vec<Complex64>> {
    let (n, rho) = (poly.n, poly.rho);
    let raw = if n == 2 {
        let s = (1.0 - rho * rho).max(0.0).sqrt();
        vec![Complex64::new(rho, s), Complex64::new(rho, -s)]
    } else if n == 3 {
        // -(z - 1)(z^2 + (1 - 2ρ) z + 1)
        let c = (rho - 0.5).clamp(-1.0, 1.0);
        let s = (1.0 - c * c).sqrt();
        vec![ONE, Complex64::new(c, s), Complex64::new(c, -s)]
    } else if poly.is_at_upper_boundary() {
        special_roots(SpecialCase::RhoOne, n)?
    } else if poly.is_at_lower_boundary() {
        special_roots(SpecialCase::RhoLowerBound, n)?
    } else {
        companion_roots(poly)?
    };
    normalize_roots(raw)
}

/// Projects onto the unit circle after checking the deviation, then sorts.
fn normalize_roots(raw: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let mut out = raw
        .into_iter()
        .map(|z| {
            let deviation = (z.norm() - 1.0).abs();
            if deviation > UNIT_TOL {
                Err(QwError::UnitCircleViolation {
                    re: z.re,
                    im: z.im,
                    deviation,
                })
            } else {
                Ok(z / z.norm())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| argument(*a).total_cmp(&argument(*b)));
    Ok(out)
}

/// Argument in `[0, 2π)`, with values within `1e-12` of `2π` folded to 0.
pub fn argument(z: Complex64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if TAU - a < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Eigenvalues of the balanced companion matrix, each refined by one Newton
/// step on the polynomial. No unit-circle projection is applied.
pub fn companion_roots(poly: &SelfReciprocalPoly) -> Result<Vec<Complex64>> {
    let mut roots = polynomial_roots(&poly.coeffs)?;
    for z in roots.iter_mut() {
        let dp = poly.eval_derivative(*z);
        if dp.norm() > 1e-10 {
            *z -= poly.eval(*z) / dp;
        }
    }
    Ok(roots)
}

/// Roots of a real polynomial (ascending coefficients) via the companion matrix.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead == 0.0 {
        return Err(QwError::InvalidParams("leading coefficient is zero".into()));
    }
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -coeffs[i] / lead;
    }
    balance_parlett_reinsch(&mut m);
    Ok(m.complex_eigenvalues().iter().copied().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    /// `ρ = 1`
    RhoOne,
    /// `ρ = 0`
    RhoZero,
    /// `ρ = -1/(n-1)`
    RhoLowerBound,
}

impl SpecialCase {
    pub fn rho(self, n: usize) -> f64 {
        match self {
            SpecialCase::RhoOne => 1.0,
            SpecialCase::RhoZero => 0.0,
            SpecialCase::RhoLowerBound => rho_lower(n),
        }
    }
}

/// Zeros of the unsubstituted polynomial `z^n + 2ρ Σ z^i + 1` at a special ρ.
pub fn special_parent_roots(case: SpecialCase, n: usize) -> Result<Vec<Complex64>> {
    if !is_prime(n) {
        return Err(QwError::NotPrime(n));
    }
    let unit = |k: usize| Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
    let minus_one = Complex64::new(-1.0, 0.0);
    Ok(match case {
        // (z + 1)(z^{n-1} + … + 1): -1 and the primitive n-th roots.
        SpecialCase::RhoOne => std::iter::once(minus_one).chain((1..n).map(unit)).collect(),
        // z^n + 1; for odd n these are -η^k, k = 0..n.
        SpecialCase::RhoZero => (0..n)
            .map(|k| Complex64::from_polar(1.0, PI * (2 * k + 1) as f64 / n as f64))
            .collect(),
        SpecialCase::RhoLowerBound => {
            if n == 2 {
                vec![ONE, ONE]
            } else {
                let mut out = vec![ONE, ONE, minus_one];
                out.extend(polynomial_roots(&lower_bound_residual(n))?);
                out
            }
        }
    })
}

/// Zeros of the substituted polynomial at a special ρ (the negated parent
/// zeros), sorted by argument.
pub fn special_roots(case: SpecialCase, n: usize) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = special_parent_roots(case, n)?
        .into_iter()
        .map(|z| -z)
        .collect();
    out.sort_by(|a, b| argument(*a).total_cmp(&argument(*b)));
    Ok(out)
}

/// The degree `n-3` factor left after removing `(z-1)^2 (z+1)` from the
/// parent polynomial at `ρ = -1/(n-1)`; ascending coefficients.
pub fn lower_bound_residual(n: usize) -> Vec<f64> {
    // term i contributes z^{n-i-2}
    let mut c = vec![0.0; n.saturating_sub(2)];
    for i in 1..=n.saturating_sub(2) {
        let value = i.div_ceil(2) as f64 * (n - 2 * (i / 2) - 1) as f64 / (n as f64 - 1.0);
        c[n - i - 2] = value;
    }
    c
}

/// Ascending-coefficient polynomial product.
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn min_root_gap(roots: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

/// Closed-form spectral coefficients
/// `c = (μ^n + (1-ρ)μ^{n-1} - ρ(-1)^n) /
///      (nμ^n + [n - 2ρ(n-1)]μ^{n-1} - 2ρ(-1)^n Σ_{k=0}^{n-2} (-μ)^k)`.
pub fn coefficients_closed_form(roots: &[Complex64], rho: f64, n: usize) -> Vec<Complex64> {
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    roots
        .iter()
        .map(|&mu| {
            let mu_n1 = mu.powu(n as u32 - 1);
            let mu_n = mu_n1 * mu;
            let geometric: Complex64 = (0..=n - 2).map(|k| (-mu).powu(k as u32)).sum();
            let num = mu_n + mu_n1 * (1.0 - rho) - rho * sign_n;
            let den = mu_n * n as f64 + mu_n1 * (n as f64 - 2.0 * rho * (n as f64 - 1.0))
                - geometric * (2.0 * rho * sign_n);
            num / den
        })
        .collect()
}

/// Right side of the interpolation system: `1, ρ, (2ρ-1)ρ, …, (2ρ-1)^{n-2}ρ`.
pub fn initial_moments(rho: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| {
            if t == 0 {
                1.0
            } else {
                (2.0 * rho - 1.0).powi(t as i32 - 1) * rho
            }
        })
        .collect()
}

/// Solves the Vandermonde system `Σ_i c_i μ_i^t = m_t`, `t = 0..n`.
pub fn coefficients_vandermonde(roots: &[Complex64], rho: f64, n: usize) -> Result<Vec<Complex64>> {
    let a = DMatrix::from_fn(n, n, |t, i| roots[i].powu(t as u32));
    let b = DVector::from_iterator(
        n,
        initial_moments(rho, n)
            .into_iter()
            .map(|m| Complex64::new(m, 0.0)),
    );
    a.lu()
        .solve(&b)
        .map(|c| c.iter().copied().collect())
        .ok_or(QwError::DegenerateSpectrum {
            min_gap: min_root_gap(roots),
        })
}

/// Spectral coefficients by the closed form, cross-checked against the
/// Vandermonde solve.
pub fn spectral_coefficients(roots: &[Complex64], rho: f64, n: usize) -> Result<Vec<Complex64>> {
    let gap = min_root_gap(roots);
    if gap < DEGENERACY_GAP {
        return Err(QwError::DegenerateSpectrum { min_gap: gap });
    }
    let closed = coefficients_closed_form(roots, rho, n);
    let solved = coefficients_vandermonde(roots, rho, n)?;
    let mismatch = closed
        .iter()
        .zip(&solved)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if mismatch.is_nan() || mismatch > 1e-9 {
        return Err(QwError::HypothesisViolated(format!(
            "closed-form and Vandermonde coefficients differ by {mismatch:e} (rho = {rho}, n = {n})"
        )));
    }
    Ok(closed)
}

/// Zeros and coefficients for one distance class `j` with eigenvalue `ρ_j`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModeSpectrum {
    pub j: usize,
    pub rho: f64,
    pub mu: Vec<Complex64>,
    pub theta: Vec<f64>,
    pub c: Vec<Complex64>,
    pub degenerate: bool,
}

impl ModeSpectrum {
    /// Degenerate spectra are returned with an empty `c`.
    pub fn new(j: usize, rho: f64, n: usize) -> Result<Self> {
        let poly = build_poly(rho, n)?;
        let mu = roots(&poly)?;
        let theta = mu.iter().map(|&z| argument(z)).collect();
        let degenerate = min_root_gap(&mu) < DEGENERACY_GAP;
        let c = if degenerate {
            Vec::new()
        } else {
            spectral_coefficients(&mu, rho, n)?
        };
        Ok(Self {
            j,
            rho,
            mu,
            theta,
            c,
            degenerate,
        })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// `-1/(n-1) < ρ < 1` strictly.
    pub fn is_interior(&self) -> bool {
        let n = self.n();
        self.rho > rho_lower(n) + BOUNDARY_TOL && self.rho < 1.0 - BOUNDARY_TOL
    }

    /// `μ_i^t`, evaluated through the argument so that `|μ^t| = 1` exactly.
    pub fn mu_pow(&self, i: usize, t: usize) -> Complex64 {
        Complex64::from_polar(1.0, (self.theta[i] * t as f64).rem_euclid(TAU))
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.degenerate {
            Err(QwError::DegenerateSpectrum {
                min_gap: min_root_gap(&self.mu),
            })
        } else {
            Ok(())
        }
    }
}

/// `a(t) = (n^d)^{-1/2} Σ_i c_i μ_i^t`.
pub fn mode_sum_sequence(spec: &ModeSpectrum, t: usize, state_size: usize) -> Result<Complex64> {
    spec.require_nondegenerate()?;
    let s: Complex64 = (0..spec.n()).map(|i| spec.c[i] * spec.mu_pow(i, t)).sum();
    Ok(s / (state_size as f64).sqrt())
}

/// Iterates `a(t) = 2ρ Σ_{j=1}^{n-1} (-1)^{j-1} a(t-j) + (-1)^{n-1} a(t-n)`
/// from the initial values `a(0..n)`; returns `a(0..=t_max)`.
pub fn mode_recurrence(rho: f64, n: usize, state_size: usize, t_max: usize) -> Vec<f64> {
    let scale = 1.0 / (state_size as f64).sqrt();
    let mut a: Vec<f64> = initial_moments(rho, n)
        .into_iter()
        .map(|m| m * scale)
        .collect();
    let tail_sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    while a.len() <= t_max {
        let t = a.len();
        let mut next = tail_sign * a[t - n];
        for j in 1..n {
            let s = if j % 2 == 1 { 1.0 } else { -1.0 };
            next += 2.0 * rho * s * a[t - j];
        }
        a.push(next);
    }
    a.truncate(t_max + 1);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn contains_all(haystack: &[Complex64], needles: &[Complex64], tol: f64) -> bool {
        needles
            .iter()
            .all(|z| haystack.iter().any(|h| close(*h, *z, tol)))
    }

    #[test]
    fn build_poly_low_degrees() {
        let p = build_poly(0.3, 2).unwrap();
        assert_eq!(p.coeffs(), &[1.0, -0.6, 1.0]);
        let p = build_poly(0.3, 3).unwrap();
        assert_eq!(p.coeffs(), &[1.0, -0.6, 0.6, -1.0]);
    }

    #[test]
    fn build_poly_errors() {
        assert!(matches!(build_poly(0.1, 4), Err(QwError::NotPrime(4))));
        assert!(matches!(
            build_poly(1.1, 3),
            Err(QwError::RhoOutOfRange { .. })
        ));
        assert!(matches!(
            build_poly(-0.6, 3),
            Err(QwError::RhoOutOfRange { .. })
        ));
        assert!(build_poly(-0.5, 3).is_ok());
    }

    #[test]
    fn self_reciprocal_sign_pattern() {
        for n in [2usize, 3, 5, 7] {
            let p = build_poly(0.37, n).unwrap();
            let c = p.coeffs();
            let flip = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..=n {
                assert_eq!(c[n - i], flip * c[i]);
            }
        }
    }

    #[test]
    fn n2_rho0_roots_are_pm_i() {
        let r = roots(&build_poly(0.0, 2).unwrap()).unwrap();
        assert!(close(r[0], Complex64::new(0.0, 1.0), 1e-15));
        assert!(close(r[1], Complex64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn n3_closed_form_angle() {
        let rho = 0.2;
        let r = roots(&build_poly(rho, 3).unwrap()).unwrap();
        assert!(close(r[0], ONE, 1e-15));
        assert!((r[1].re - (rho - 0.5)).abs() < 1e-15);
        assert!(close(r[2], r[1].conj(), 1e-15));
    }

    #[test]
    fn rho0_n3_matches_negated_cyclotomic_shift() {
        let r = roots(&build_poly(0.0, 3).unwrap()).unwrap();
        let expect = special_roots(SpecialCase::RhoZero, 3).unwrap();
        assert!(contains_all(&r, &expect, 1e-14));
    }

    #[test]
    fn n5_angle_equation() {
        let rho = 0.3;
        let n = 5;
        let r = roots(&build_poly(rho, n).unwrap()).unwrap();
        for z in r {
            let th = argument(z);
            if th.abs() < 1e-9 {
                continue;
            }
            let rhs =
                1.0 + (th.cos() - (n as f64 * th).cos()) / (1.0 - ((n - 1) as f64 * th).cos());
            assert!((2.0 * rho - rhs).abs() < 1e-8);
        }
    }

    #[test]
    fn companion_agrees_with_closed_forms() {
        for n in [2usize, 3] {
            for rho in [-0.4, 0.0, 0.25, 0.9] {
                let p = build_poly(rho, n).unwrap();
                let closed = roots(&p).unwrap();
                let comp = normalize_roots(companion_roots(&p).unwrap()).unwrap();
                assert!(contains_all(&comp, &closed, 1e-9), "n={n} rho={rho}");
            }
        }
    }

    #[test]
    fn special_parent_zeros() {
        let eta = |k: usize, n: usize| Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let r = special_parent_roots(SpecialCase::RhoOne, 3).unwrap();
        assert!(contains_all(
            &r,
            &[Complex64::new(-1.0, 0.0), eta(1, 3), eta(2, 3)],
            1e-14
        ));
        for n in [3usize, 5, 7, 11] {
            let r = special_parent_roots(SpecialCase::RhoZero, n).unwrap();
            let expect: Vec<_> = (0..n).map(|k| -eta(k, n)).collect();
            assert!(contains_all(&r, &expect, 1e-13));
        }
        let r = special_parent_roots(SpecialCase::RhoLowerBound, 3).unwrap();
        assert_eq!(r.len(), 3);
        assert!(contains_all(&r, &[ONE, Complex64::new(-1.0, 0.0)], 0.0));
    }

    #[test]
    fn special_roots_are_zeros_of_parent() {
        for n in [3usize, 5, 7, 11] {
            for case in [
                SpecialCase::RhoOne,
                SpecialCase::RhoZero,
                SpecialCase::RhoLowerBound,
            ] {
                let coeffs = parent_coeffs(case.rho(n), n);
                let roots = special_parent_roots(case, n).unwrap();
                assert_eq!(roots.len(), n);
                for z in roots {
                    let v = coeffs
                        .iter()
                        .rev()
                        .fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c);
                    assert!(v.norm() < 1e-10, "n={n} {case:?} z={z}");
                    assert!((z.norm() - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn lower_bound_factorization_expands_to_parent() {
        for n in [3usize, 5, 7, 11, 13] {
            let lead = poly_mul(
                &poly_mul(&[1.0, -2.0, 1.0], &[1.0, 1.0]),
                &lower_bound_residual(n),
            );
            let parent = parent_coeffs(rho_lower(n), n);
            for (a, b) in lead.iter().zip(&parent) {
                assert!((a - b).abs() < 1e-13, "n={n}");
            }
            assert_eq!(lower_bound_residual(n).len(), n - 2);
        }
    }

    #[test]
    fn boundary_zero_tests() {
        for n in [3usize, 5, 7] {
            for rho in [rho_lower(n), -0.1, 0.0, 0.4, 1.0] {
                let coeffs = parent_coeffs(rho, n);
                let at = |z: Complex64| {
                    coeffs
                        .iter()
                        .rev()
                        .fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c)
                };
                let one_is_root = at(ONE).norm() < 1e-12;
                assert_eq!(one_is_root, (rho - rho_lower(n)).abs() < 1e-15);
                for k in 1..n {
                    let primitive = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
                    assert_eq!(at(primitive).norm() < 1e-12, rho == 1.0);
                }
            }
        }
    }

    #[test]
    fn coefficients_for_n2_are_halves() {
        for rho in [-0.7, 0.0, 0.3, 0.95] {
            let r = roots(&build_poly(rho, 2).unwrap()).unwrap();
            let c = spectral_coefficients(&r, rho, 2).unwrap();
            for ci in c {
                assert!(close(ci, Complex64::new(0.5, 0.0), 1e-12));
            }
        }
    }

    #[test]
    fn coefficients_for_n3_simple_walk() {
        let d = 5;
        for j in 1..d {
            let rho = 1.0 - 3.0 * j as f64 / (2.0 * d as f64);
            let spec = ModeSpectrum::new(j, rho, 3).unwrap();
            let c1 = d as f64 / (d + 3 * j) as f64;
            let c2 = 3.0 * j as f64 / (2.0 * (d + 3 * j) as f64);
            assert!(close(spec.c[0], Complex64::new(c1, 0.0), 1e-12));
            assert!(close(spec.c[1], Complex64::new(c2, 0.0), 1e-12));
            assert!(close(spec.c[2], Complex64::new(c2, 0.0), 1e-12));
        }
    }

    #[test]
    fn degenerate_detection() {
        let spec = ModeSpectrum::new(1, 1.0, 2).unwrap();
        assert!(spec.degenerate);
        assert!(spec.c.is_empty());
        assert!(matches!(
            mode_sum_sequence(&spec, 3, 4),
            Err(QwError::DegenerateSpectrum { .. })
        ));
        let r = roots(&build_poly(-1.0, 2).unwrap()).unwrap();
        assert!(matches!(
            spectral_coefficients(&r, -1.0, 2),
            Err(QwError::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn mode_sum_initial_values_and_recurrence() {
        let state = 27;
        let spec = ModeSpectrum::new(1, 0.25, 3).unwrap();
        let scale = 1.0 / (state as f64).sqrt();
        assert!(close(
            mode_sum_sequence(&spec, 0, state).unwrap(),
            Complex64::new(scale, 0.0),
            1e-14
        ));
        assert!(close(
            mode_sum_sequence(&spec, 1, state).unwrap(),
            Complex64::new(scale * 0.25, 0.0),
            1e-14
        ));
        let seq = mode_recurrence(0.25, 3, state, 6);
        let a6 = mode_sum_sequence(&spec, 6, state).unwrap();
        assert!((a6 - seq[6]).norm() <= 1e-10);
    }

    #[test]
    fn boundary_roots_use_factorizations() {
        let r = roots(&build_poly(rho_lower(5), 5).unwrap()).unwrap();
        assert_eq!(r.len(), 5);
        assert!(min_root_gap(&r) < 1e-12);
        let spec = ModeSpectrum::new(2, rho_lower(5), 5).unwrap();
        assert!(spec.degenerate && !spec.is_interior());
        let spec = ModeSpectrum::new(2, 1.0, 5).unwrap();
        assert!(!spec.degenerate && !spec.is_interior());
    }

    #[test]
    fn mode_spectrum_json_shape() {
        let spec = ModeSpectrum::new(1, 0.0, 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["mu"][0].as_array().unwrap().len(), 2);
        assert_eq!(v["degenerate"], false);
        let back: ModeSpectrum = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
    }
}
