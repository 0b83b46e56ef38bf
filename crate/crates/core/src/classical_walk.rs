//! Symmetric random walks on H(d, n) whose transition probability depends
//! only on the distance between the two vertices.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::hamming_scheme::{binomial, HammingParams, HammingSpace, KrawtchoukTable};
use crate::par;

/// Tolerance used to decide `ρ = ±1` and similar boundary tests.
pub const RHO_TOL: f64 = 1e-12;

/// Largest `n^d` accepted by [`brute_force_markov_dense`].
pub const DENSE_LIMIT: usize = 4096;

/// Largest `n^d` accepted by [`brute_force_markov`].
pub const MARKOV_LIMIT: usize = 1 << 13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkKind {
    /// Moves to a uniformly chosen neighbour.
    Simple,
    /// Moves to a uniformly chosen vertex.
    Independent,
    /// Moves to a uniformly chosen vertex at distance `m`.
    NonLocal { m: usize },
    /// Binomial(d, α) number of coordinates updated.
    Mixture { alpha: f64 },
    /// Explicit distance-class weights `w_0..w_d`.
    Custom { weights: Vec<f64> },
}

impl WalkKind {
    pub fn name(&self) -> &'static str {
        match self {
            WalkKind::Simple => "simple",
            WalkKind::Independent => "independent",
            WalkKind::NonLocal { .. } => "nonlocal",
            WalkKind::Mixture { .. } => "mixture",
            WalkKind::Custom { .. } => "custom",
        }
    }
}

/// Distance-class weights `w_i`: the walker jumps to a uniformly chosen vertex
/// at distance `i` with probability `w_i`.
#[derive(Clone, Debug)]
pub struct WalkWeights {
    params: HammingParams,
    w: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl WalkWeights {
    /// Validates nonnegativity and `Σ w = 1` within `1e-9`, then renormalizes.
    pub fn from_values(params: HammingParams, w: Vec<f64>) -> Result<Self> {
        let d = params.d();
        if w.len() != d + 1 {
            return Err(QwError::InvalidWeights(format!(
                "expected {} weights, got {}",
                d + 1,
                w.len()
            )));
        }
        if let Some(bad) = w.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(QwError::InvalidWeights(format!(
                "weight {bad} is negative or not finite"
            )));
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(QwError::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let w = w.into_iter().map(|v| v / total).collect();
        Ok(Self {
            params,
            w,
            exact: None,
        })
    }

    /// Weights given as exact rationals. They must sum to exactly one.
    pub fn from_exact(params: HammingParams, exact: Vec<BigRational>) -> Result<Self> {
        if exact.len() != params.d() + 1 {
            return Err(QwError::InvalidWeights(format!(
                "expected {} weights, got {}",
                params.d() + 1,
                exact.len()
            )));
        }
        if exact.iter().any(|v| *v < BigRational::zero()) {
            return Err(QwError::InvalidWeights("negative weight".into()));
        }
        let total: BigRational = exact.iter().sum();
        if !total.is_one() {
            return Err(QwError::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let w = exact.iter().map(ratio_to_f64).collect();
        Ok(Self {
            params,
            w,
            exact: Some(exact),
        })
    }

    pub fn params(&self) -> &HammingParams {
        &self.params
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// `w_h / κ_h`, the probability of one particular vertex at distance `h`.
    pub fn vertex_prob(&self, table: &KrawtchoukTable, h: usize) -> f64 {
        self.w[h] / table.kappa(h) as f64
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Weights of the named walk families.
pub fn weights_for(kind: &WalkKind, params: HammingParams) -> Result<WalkWeights> {
    let d = params.d();
    let unit = |i: usize| -> Vec<BigRational> {
        (0..=d)
            .map(|h| {
                if h == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect()
    };
    match kind {
        WalkKind::Simple => WalkWeights::from_exact(params, unit(1)),
        WalkKind::Independent => {
            let total = BigInt::from(params.size());
            let table = KrawtchoukTable::new(params)?;
            let w = (0..=d)
                .map(|i| BigRational::new(BigInt::from(table.kappa(i)), total.clone()))
                .collect();
            WalkWeights::from_exact(params, w)
        }
        WalkKind::NonLocal { m } => {
            if *m < 2 || *m > d {
                return Err(QwError::InvalidParams(format!(
                    "non-local walk needs 2 <= m <= d, got m = {m}"
                )));
            }
            WalkWeights::from_exact(params, unit(*m))
        }
        WalkKind::Mixture { alpha } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(QwError::InvalidParams(format!(
                    "mixture needs alpha in (0, 1), got {alpha}"
                )));
            }
            let a = BigRational::from_float(*alpha)
                .ok_or_else(|| QwError::InvalidParams("alpha not finite".into()))?;
            mixture_weights(params, &a)
        }
        WalkKind::Custom { weights } => WalkWeights::from_values(params, weights.clone()),
    }
}

/// `w_i = C(d,i) α^i (1-α)^{d-i}` in exact arithmetic.
pub fn mixture_weights(params: HammingParams, alpha: &BigRational) -> Result<WalkWeights> {
    if *alpha <= BigRational::zero() || *alpha >= BigRational::one() {
        return Err(QwError::InvalidParams(format!(
            "alpha = {alpha} outside (0, 1)"
        )));
    }
    let d = params.d();
    let beta = BigRational::one() - alpha;
    let w = (0..=d)
        .map(|i| {
            Ok(BigRational::from_integer(BigInt::from(binomial(d, i)?))
                * pow_ratio(alpha, i)
                * pow_ratio(&beta, d - i))
        })
        .collect::<Result<Vec<_>>>()?;
    WalkWeights::from_exact(params, w)
}

pub fn pow_ratio(r: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * r)
}

/// Eigenvalues `ρ_i` of the transition matrix, indexed by distance class.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicalSpectrum {
    rho: Vec<f64>,
    #[serde(skip)]
    exact: Option<Vec<BigRational>>,
}

impl ClassicalSpectrum {
    pub fn from_rho(rho: Vec<f64>) -> Self {
        Self { rho, exact: None }
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// `-1` is an eigenvalue: the walk is periodic.
    pub fn is_periodic(&self) -> bool {
        self.rho.iter().any(|r| (r + 1.0).abs() <= RHO_TOL)
    }

    /// Eigenvalue 1 has multiplicity above one: the walk is reducible.
    pub fn is_reducible(&self) -> bool {
        self.rho.iter().skip(1).any(|r| (r - 1.0).abs() <= RHO_TOL)
    }

    /// Checks `-1/(n-1) ≤ ρ_i ≤ 1`.
    pub fn satisfies_bound(&self, n: usize) -> bool {
        let lower = -1.0 / (n as f64 - 1.0) - RHO_TOL;
        self.rho.iter().all(|&r| r >= lower && r <= 1.0 + RHO_TOL)
    }
}

/// `ρ_i = Σ_j w_j K_i(j) / κ_i`, exact when the weights are.
pub fn eigenvalues(weights: &WalkWeights, table: &KrawtchoukTable) -> ClassicalSpectrum {
    let d = table.d();
    if let Some(exact) = weights.exact() {
        let rho_exact: Vec<BigRational> = (0..=d)
            .map(|i| {
                let kappa = BigInt::from(table.kappa(i));
                exact
                    .iter()
                    .enumerate()
                    .map(|(j, w)| w * BigRational::new(BigInt::from(table.k(i, j)), kappa.clone()))
                    .sum()
            })
            .collect();
        ClassicalSpectrum {
            rho: rho_exact.iter().map(ratio_to_f64).collect(),
            exact: Some(rho_exact),
        }
    } else {
        let w = weights.w();
        let rho = (0..=d)
            .map(|i| (0..=d).map(|j| w[j] * table.q(i, j)).sum())
            .collect();
        ClassicalSpectrum { rho, exact: None }
    }
}

/// Per-vertex probabilities of a class function, indexed by distance from
/// the starting vertex.
#[derive(Clone, Debug, Serialize)]
pub struct ClassDistribution {
    pub t: usize,
    pub per_vertex: Vec<f64>,
    pub kappa: Vec<i128>,
}

impl ClassDistribution {
    pub fn class_mass(&self, h: usize) -> f64 {
        self.per_vertex[h] * self.kappa[h] as f64
    }

    pub fn total(&self) -> f64 {
        (0..self.per_vertex.len()).map(|h| self.class_mass(h)).sum()
    }

    pub fn max_abs_diff(&self, other: &ClassDistribution) -> f64 {
        self.per_vertex
            .iter()
            .zip(&other.per_vertex)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `P_t(h) = n^{-d} Σ_i ρ_i^t K_i(h)`.
pub fn spectral_transition(
    spec: &ClassicalSpectrum,
    t: usize,
    table: &KrawtchoukTable,
) -> ClassDistribution {
    let d = table.d();
    let scale = 1.0 / table.params().size() as f64;
    let powers: Vec<f64> = spec.rho.iter().map(|r| r.powi(t as i32)).collect();
    let per_vertex = (0..=d)
        .map(|h| scale * (0..=d).map(|i| powers[i] * table.kf(i, h)).sum::<f64>())
        .collect();
    ClassDistribution {
        t,
        per_vertex,
        kappa: table.kappas().to_vec(),
    }
}

/// Averages a vertex function over weight classes. Returns the class means
/// and the largest deviation of any vertex from its class mean.
pub fn class_aggregate(space: &HammingSpace, values: &[f64]) -> (Vec<f64>, f64) {
    let d = space.params().d();
    let mut sums = vec![0.0; d + 1];
    let mut counts = vec![0usize; d + 1];
    for (idx, v) in values.iter().enumerate() {
        sums[space.weight(idx)] += v;
        counts[space.weight(idx)] += 1;
    }
    let means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let spread = values
        .iter()
        .enumerate()
        .map(|(idx, v)| (v - means[space.weight(idx)]).abs())
        .fold(0.0, f64::max);
    (means, spread)
}

/// Iterates the chain `t` steps from the origin without forming the matrix:
/// `p'(y) = Σ_z p(y ⊖ z) w_{|z|}/κ_{|z|}`.
pub fn brute_force_markov(weights: &WalkWeights, t: usize) -> Result<ClassDistribution> {
    let params = *weights.params();
    guard(params.size(), MARKOV_LIMIT, "Markov oracle state space")?;
    let table = KrawtchoukTable::new(params)?;
    let space = HammingSpace::new(params);
    let size = params.size();
    let jump: Vec<f64> = (0..size)
        .map(|z| weights.vertex_prob(&table, space.weight(z)))
        .collect();
    let support: Vec<usize> = (0..size).filter(|&z| jump[z] > 0.0).collect();
    let mut p = vec![0.0; size];
    p[0] = 1.0;
    for _ in 0..t {
        let prev = &p;
        p = par::map_range(size, |y| {
            support
                .iter()
                .map(|&z| prev[space.scaled_add(y, params.n() - 1, z)] * jump[z])
                .sum()
        });
    }
    let (per_vertex, _) = class_aggregate(&space, &p);
    Ok(ClassDistribution {
        t,
        per_vertex,
        kappa: table.kappas().to_vec(),
    })
}

/// Dense transition matrix `P_{x,y} = w_{∂(x,y)} / κ_{∂(x,y)}`, guarded by
/// [`DENSE_LIMIT`].
pub fn dense_transition_matrix(weights: &WalkWeights) -> Result<DMatrix<f64>> {
    let params = *weights.params();
    guard(params.size(), DENSE_LIMIT, "dense transition matrix")?;
    let table = KrawtchoukTable::new(params)?;
    let space = HammingSpace::new(params);
    let size = params.size();
    Ok(DMatrix::from_fn(size, size, |x, y| {
        let diff = space.scaled_add(y, params.n() - 1, x);
        weights.vertex_prob(&table, space.weight(diff))
    }))
}

/// Row 0 of `P^t` from the materialized matrix.
pub fn brute_force_markov_dense(weights: &WalkWeights, t: usize) -> Result<ClassDistribution> {
    let params = *weights.params();
    let matrix = dense_transition_matrix(weights)?;
    let transposed = matrix.transpose();
    let mut row = DVector::zeros(params.size());
    row[0] = 1.0;
    for _ in 0..t {
        row = &transposed * row;
    }
    let space = HammingSpace::new(params);
    let (per_vertex, _) = class_aggregate(&space, row.as_slice());
    Ok(ClassDistribution {
        t,
        per_vertex,
        kappa: KrawtchoukTable::new(params)?.kappas().to_vec(),
    })
}

/// The lumped chain on distances,
/// `P(l → l') = C(d,l') (1-1/n)^{l'} (1/n)^{d-l'} Σ_i ρ_i Q_i(l') Q_i(l)`.
/// Row `l`, column `l'`.
pub fn eagleson_kernel(spec: &ClassicalSpectrum, table: &KrawtchoukTable) -> Vec<Vec<f64>> {
    let d = table.d();
    let binom = binomial_pmf(table.params());
    (0..=d)
        .map(|l| {
            (0..=d)
                .map(|lp| {
                    binom[lp]
                        * (0..=d)
                            .map(|i| spec.rho[i] * table.q(i, lp) * table.q(i, l))
                            .sum::<f64>()
                })
                .collect()
        })
        .collect()
}

/// Binomial(d, 1-1/n) mass function.
pub fn binomial_pmf(params: &HammingParams) -> Vec<f64> {
    let (d, n) = (params.d(), params.n() as f64);
    (0..=d)
        .map(|l| {
            binomial(d, l).map(|c| c as f64).unwrap_or(f64::NAN)
                * (1.0 - 1.0 / n).powi(l as i32)
                * (1.0 / n).powi((d - l) as i32)
        })
        .collect()
}

pub(crate) fn guard(size: usize, limit: usize, what: &'static str) -> Result<()> {
    if size > limit {
        Err(QwError::SizeTooLarge {
            what,
            size: size as u128,
            limit: limit as u128,
        })
    } else {
        Ok(())
    }
}
