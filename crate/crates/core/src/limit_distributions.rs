//! Time-averaged limits `P̄(x) = lim_T T^{-1} Σ_{t<T} P_t(x)`: a numeric
//! Cesàro average over any engine path, closed forms for the named walks,
//! and the polynomial identities those closed forms rest on.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classical_walk::{WalkKind, RHO_TOL};
use crate::error::{QwError, Result};
use crate::hamming_scheme::{sphere_intersections, HammingParams, HammingSpace, KrawtchoukTable};
use crate::par;
use crate::quantum_walk_engine::{EnginePath, PathReport, Walk};

/// Block length for the parallel Cesàro sum.
const CESARO_BLOCK: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Cesaro { horizon: usize, path: EnginePath },
    ClosedForm { name: String },
}

impl Provenance {
    pub fn label(&self) -> String {
        match self {
            Provenance::Cesaro { horizon, path } => format!("cesaro(T={horizon},{})", path.name()),
            Provenance::ClosedForm { name } => format!("closed_form({name})"),
        }
    }
}

/// A class function on H(d, n): `per_vertex[h]` is `P̄(x)` for `|x| = h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeAveragedDistribution {
    pub d: usize,
    pub n: usize,
    pub per_vertex: Vec<f64>,
    pub kappa: Vec<i128>,
    pub provenance: Provenance,
}

impl TimeAveragedDistribution {
    fn closed(table: &KrawtchoukTable, per_vertex: Vec<f64>, name: &str) -> Self {
        let params = table.params();
        Self {
            d: params.d(),
            n: params.n(),
            per_vertex,
            kappa: table.kappas().to_vec(),
            provenance: Provenance::ClosedForm {
                name: name.to_string(),
            },
        }
    }

    pub fn class_mass(&self, h: usize) -> f64 {
        self.per_vertex[h] * self.kappa[h] as f64
    }

    pub fn total(&self) -> f64 {
        (0..self.per_vertex.len()).map(|h| self.class_mass(h)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.per_vertex
            .iter()
            .zip(&other.per_vertex)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.per_vertex
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `T^{-1} Σ_{t=0}^{T-1} P_t(x)` at one representative position per class.
pub fn cesaro_average(
    walk: &Walk,
    horizon: usize,
    path: EnginePath,
) -> Result<(TimeAveragedDistribution, PathReport)> {
    if horizon == 0 {
        return Err(QwError::InvalidParams(
            "the Cesàro horizon must be at least 1".into(),
        ));
    }
    let d = walk.params().d();
    let reps = walk.space().class_representatives();
    let spectral_ok =
        matches!(path, EnginePath::Spectral | EnginePath::Auto) && walk.spectral_table(0).is_ok();
    let (sum, report) = if spectral_ok {
        let modes = if walk.params().n() == 2 {
            Vec::new()
        } else {
            walk.mode_spectra()?
        };
        let sum = par::blocked_vector_sum(horizon, d + 1, CESARO_BLOCK, |t, acc| {
            let table = if walk.params().n() == 2 {
                crate::quantum_walk_engine::spectral_table_n2(walk, t)
            } else {
                crate::quantum_walk_engine::spectral_table_general(walk, &modes, t)
                    .expect("hypotheses were checked at t = 0")
            };
            for (a, v) in acc.iter_mut().zip(walk.class_probabilities(&table, &reps)) {
                *a += v;
            }
        });
        let report = PathReport {
            requested: path,
            taken: EnginePath::Spectral,
            fallback: None,
        };
        (sum, report)
    } else {
        let mut sum = vec![0.0; d + 1];
        let report = walk.class_trajectory(horizon - 1, path, |_, p| {
            for (a, v) in sum.iter_mut().zip(p) {
                *a += v;
            }
        })?;
        (sum, report)
    };
    let per_vertex = sum.into_iter().map(|s| s / horizon as f64).collect();
    Ok((
        TimeAveragedDistribution {
            d,
            n: walk.params().n(),
            per_vertex,
            kappa: walk.table().kappas().to_vec(),
            provenance: Provenance::Cesaro {
                horizon,
                path: report.taken,
            },
        },
        report,
    ))
}

fn big(v: i128) -> BigInt {
    BigInt::from(v)
}

/// Discrete arcsine law on distances: `4^{-d} C(2(d-h), d-h) C(2h, h)`.
pub fn arcsine_pmf_exact(d: usize) -> Vec<BigRational> {
    let denom = BigInt::from(4).pow(d as u32);
    (0..=d)
        .map(|h| BigRational::new(central_binomial(d - h) * central_binomial(h), denom.clone()))
        .collect()
}

pub fn arcsine_pmf(d: usize) -> Vec<f64> {
    arcsine_pmf_exact(d)
        .iter()
        .map(crate::classical_walk::ratio_to_f64)
        .collect()
}

fn central_binomial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(2 * k - i) / BigInt::from(i + 1);
    }
    acc
}

fn big_binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Per-vertex arcsine term `C(2(d-h), d-h) C(2h, h) / (2·4^d·C(d, h))`.
fn arcsine_vertex_exact(d: usize, h: usize) -> BigRational {
    BigRational::new(
        central_binomial(d - h) * central_binomial(h),
        BigInt::from(2) * BigInt::from(4).pow(d as u32) * big_binomial(d, h),
    )
}

/// The two halves of the generic n = 2 limit, per vertex of each class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcsineDecomposition {
    pub arcsine: Vec<f64>,
    pub residual: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcsineDecompositionExact {
    pub arcsine: Vec<BigRational>,
    pub residual: Vec<BigRational>,
    pub kappa: Vec<i128>,
}

impl ArcsineDecompositionExact {
    pub fn arcsine_total(&self) -> BigRational {
        self.class_total(&self.arcsine)
    }

    pub fn residual_total(&self) -> BigRational {
        self.class_total(&self.residual)
    }

    fn class_total(&self, v: &[BigRational]) -> BigRational {
        v.iter()
            .zip(&self.kappa)
            .map(|(p, &k)| p * BigRational::from_integer(big(k)))
            .sum()
    }
}

fn check_generic_n2(walk: &Walk) -> Result<()> {
    if walk.params().n() != 2 {
        return Err(QwError::InvalidParams(
            "this closed form needs n = 2".into(),
        ));
    }
    let rho = &walk.spectrum().rho()[1..];
    for (j, r) in rho.iter().enumerate() {
        if r.abs() >= 1.0 - RHO_TOL {
            return Err(QwError::HypothesisViolated(format!(
                "rho_{} = {r} is not inside (-1, 1)",
                j + 1
            )));
        }
        for (k, s) in rho.iter().enumerate().skip(j + 1) {
            if (r - s).abs() <= RHO_TOL {
                return Err(QwError::HypothesisViolated(format!(
                    "rho_{} = rho_{} = {r}: class eigenvalues are not distinct",
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// `Σ_{y} f(|y|) Σ_j (ρ_j K_j(h) - K_j(|x ⊕ y|))² / (1 - ρ_j²)` for `|x| = h`,
/// grouped by `|y| = a` and `|x ⊕ y| = b`.
fn n2_sphere_sum(
    table: &KrawtchoukTable,
    f: &[f64],
    rho: &[f64],
    h: usize,
    js: &[usize],
) -> Result<f64> {
    let mut total = 0.0;
    for (a, &fa) in f.iter().enumerate() {
        if fa == 0.0 {
            continue;
        }
        for (b, count) in sphere_intersections(table.params(), h, a)? {
            let s: f64 = js
                .iter()
                .map(|&j| {
                    let v = rho[j] * table.kf(j, h) - table.kf(j, b);
                    v * v / (1.0 - rho[j] * rho[j])
                })
                .sum();
            total += fa * count as f64 * s;
        }
    }
    Ok(total)
}

/// The generic n = 2 limit
/// `P̄(x) = arcsine(|x|) + (1 + Σ_y (w_{|y|}/κ_{|y|}) Σ_j (ρ_j K_j(|x|) - K_j(|x⊕y|))²/(1-ρ_j²)) / (2·4^d)`,
/// valid when every `|ρ_j| < 1` (`j ≥ 1`) and the `ρ_j` are distinct.
pub fn limit_closed_n2(walk: &Walk) -> Result<(TimeAveragedDistribution, ArcsineDecomposition)> {
    check_generic_n2(walk)?;
    let table = walk.table();
    let d = table.d();
    let rho = walk.spectrum().rho();
    let f: Vec<f64> = (0..=d)
        .map(|a| walk.coin().weights().vertex_prob(table, a))
        .collect();
    let js: Vec<usize> = (1..=d).collect();
    let scale = 1.0 / (2.0 * 4f64.powi(d as i32));
    let arcsine: Vec<f64> = (0..=d)
        .map(|h| crate::classical_walk::ratio_to_f64(&arcsine_vertex_exact(d, h)))
        .collect();
    let residual = (0..=d)
        .map(|h| Ok((1.0 + n2_sphere_sum(table, &f, rho, h, &js)?) * scale))
        .collect::<Result<Vec<f64>>>()?;
    let per_vertex = arcsine.iter().zip(&residual).map(|(a, r)| a + r).collect();
    Ok((
        TimeAveragedDistribution::closed(table, per_vertex, "generic_n2"),
        ArcsineDecomposition { arcsine, residual },
    ))
}

/// Exact-rational version of the decomposition; requires exact weights.
pub fn limit_closed_n2_exact(walk: &Walk) -> Result<ArcsineDecompositionExact> {
    check_generic_n2(walk)?;
    let table = walk.table();
    let d = table.d();
    let rho = walk.spectrum().exact().ok_or_else(|| {
        QwError::InvalidWeights("exact weights are required for the rational lane".into())
    })?;
    let w = walk
        .coin()
        .weights()
        .exact()
        .expect("exact spectrum implies exact weights");
    let f: Vec<BigRational> = (0..=d)
        .map(|a| &w[a] / BigRational::from_integer(big(table.kappa(a))))
        .collect();
    let scale = BigRational::new(
        BigInt::one(),
        BigInt::from(2) * BigInt::from(4).pow(d as u32),
    );
    let k = |j: usize, h: usize| BigRational::from_integer(big(table.k(j, h)));
    let one = BigRational::one();
    let mut residual = Vec::with_capacity(d + 1);
    for h in 0..=d {
        let mut acc = BigRational::zero();
        for (a, fa) in f.iter().enumerate() {
            if fa.is_zero() {
                continue;
            }
            for (b, count) in sphere_intersections(table.params(), h, a)? {
                let mut s = BigRational::zero();
                for j in 1..=d {
                    let v = &rho[j] * k(j, h) - k(j, b);
                    s += &v * &v / (&one - &rho[j] * &rho[j]);
                }
                acc += fa * BigRational::from_integer(big(count)) * s;
            }
        }
        residual.push((&one + acc) * &scale);
    }
    Ok(ArcsineDecompositionExact {
        arcsine: (0..=d).map(|h| arcsine_vertex_exact(d, h)).collect(),
        residual,
        kappa: table.kappas().to_vec(),
    })
}

/// Named walks whose limits have closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum LimitExample {
    SimpleN2 {
        d: usize,
    },
    IndependentN2 {
        d: usize,
    },
    /// Non-local walk with `m = 2`; needs odd `d ≥ 3`.
    Nonlocal2N2 {
        d: usize,
    },
    MixtureN2 {
        d: usize,
        r: f64,
    },
    /// Independent walk for an odd prime `n`.
    IndependentGeneral {
        d: usize,
        n: usize,
    },
    SimpleN3 {
        d: usize,
    },
}

impl LimitExample {
    pub fn name(&self) -> &'static str {
        match self {
            LimitExample::SimpleN2 { .. } => "simple_n2",
            LimitExample::IndependentN2 { .. } => "independent_n2",
            LimitExample::Nonlocal2N2 { .. } => "nonlocal2_n2",
            LimitExample::MixtureN2 { .. } => "mixture_n2",
            LimitExample::IndependentGeneral { .. } => "independent_general",
            LimitExample::SimpleN3 { .. } => "simple_n3",
        }
    }

    pub fn params(&self) -> Result<HammingParams> {
        match *self {
            LimitExample::SimpleN2 { d }
            | LimitExample::IndependentN2 { d }
            | LimitExample::Nonlocal2N2 { d }
            | LimitExample::MixtureN2 { d, .. } => HammingParams::new(d, 2),
            LimitExample::IndependentGeneral { d, n } => HammingParams::new(d, n),
            LimitExample::SimpleN3 { d } => HammingParams::new(d, 3),
        }
    }

    /// The walk the closed form describes.
    pub fn walk_kind(&self) -> WalkKind {
        match *self {
            LimitExample::SimpleN2 { .. } | LimitExample::SimpleN3 { .. } => WalkKind::Simple,
            LimitExample::IndependentN2 { .. } | LimitExample::IndependentGeneral { .. } => {
                WalkKind::Independent
            }
            LimitExample::Nonlocal2N2 { .. } => WalkKind::NonLocal { m: 2 },
            LimitExample::MixtureN2 { r, .. } => WalkKind::Mixture { alpha: r },
        }
    }

    /// Picks the example matching a walk kind, if one exists.
    pub fn for_walk(kind: &WalkKind, d: usize, n: usize) -> Option<Self> {
        match (kind, n) {
            (WalkKind::Simple, 2) => Some(LimitExample::SimpleN2 { d }),
            (WalkKind::Simple, 3) => Some(LimitExample::SimpleN3 { d }),
            (WalkKind::Independent, 2) => Some(LimitExample::IndependentN2 { d }),
            (WalkKind::Independent, _) => Some(LimitExample::IndependentGeneral { d, n }),
            (WalkKind::NonLocal { m: 2 }, 2) => Some(LimitExample::Nonlocal2N2 { d }),
            (WalkKind::Mixture { alpha }, 2) => Some(LimitExample::MixtureN2 { d, r: *alpha }),
            _ => None,
        }
    }
}

pub fn limit_example(example: &LimitExample) -> Result<TimeAveragedDistribution> {
    let params = example.params()?;
    let table = KrawtchoukTable::new(params)?;
    let d = params.d();
    let df = d as f64;
    let four_d = 4f64.powi(d as i32);
    let arcsine = |h: usize| crate::classical_walk::ratio_to_f64(&arcsine_vertex_exact(d, h));
    let per_vertex: Vec<f64> = match *example {
        LimitExample::SimpleN2 { .. } => {
            let rho: Vec<f64> = (0..=d).map(|j| 1.0 - 2.0 * j as f64 / df).collect();
            let f = unit_sphere_indicator(d);
            let js: Vec<usize> = (1..d).collect();
            (0..=d)
                .map(|h| {
                    let s = n2_sphere_sum(&table, &f, &rho, h, &js)?;
                    Ok(arcsine(h) + 1.0 / four_d + s / (2.0 * df * four_d))
                })
                .collect::<Result<_>>()?
        }
        LimitExample::IndependentN2 { .. } => {
            let two_d = 2f64.powi(d as i32);
            (0..=d)
                .map(|h| {
                    let delta = if h == 0 { 0.5 - 1.0 / two_d } else { 0.0 };
                    1.0 / (2.0 * two_d) + 1.0 / four_d + delta
                })
                .collect()
        }
        LimitExample::Nonlocal2N2 { .. } => {
            if d < 3 || d % 2 == 0 {
                return Err(QwError::InvalidParams(format!(
                    "the non-local closed form needs odd d >= 3, got d = {d}"
                )));
            }
            let kappa2 = table.kappa(2) as f64;
            let rho: Vec<f64> = (0..=d).map(|j| table.kf(2, j) / kappa2).collect();
            let mut f = vec![0.0; d + 1];
            f[2] = 1.0;
            let js: Vec<usize> = (1..=(d - 1) / 2).collect();
            (0..=d)
                .map(|h| {
                    if h % 2 == 1 {
                        return Ok(0.0);
                    }
                    let s = n2_sphere_sum(&table, &f, &rho, h, &js)?;
                    Ok((2.0 * four_d * arcsine(h) + 2.0) / four_d
                        + 4.0 * s / (df * (df - 1.0) * four_d))
                })
                .collect::<Result<_>>()?
        }
        LimitExample::MixtureN2 { r, .. } => {
            if !(r > 0.0 && r < 1.0) || (r - 0.5).abs() < 1e-12 {
                return Err(QwError::InvalidParams(format!(
                    "the mixture closed form needs 0 < r < 1 and r != 1/2, got {r}"
                )));
            }
            let base = 1.0 - 2.0 * r;
            let rho: Vec<f64> = (0..=d).map(|j| base.powi(j as i32)).collect();
            let f: Vec<f64> = (0..=d)
                .map(|a| r.powi(a as i32) * (1.0 - r).powi((d - a) as i32))
                .collect();
            let js: Vec<usize> = (1..=d).collect();
            (0..=d)
                .map(|h| {
                    let s = n2_sphere_sum(&table, &f, &rho, h, &js)?;
                    Ok(arcsine(h) + (1.0 + s) / (2.0 * four_d))
                })
                .collect::<Result<_>>()?
        }
        LimitExample::IndependentGeneral { n, .. } => {
            if n == 2 {
                return limit_example(&LimitExample::IndependentN2 { d });
            }
            params.require_prime()?;
            let nf = n as f64;
            let uniform = (1.0 - 1.0 / nf) / nf.powi(d as i32);
            (0..=d)
                .map(|h| uniform + if h == 0 { 1.0 / nf } else { 0.0 })
                .collect()
        }
        LimitExample::SimpleN3 { .. } => simple_n3_limit(&table)?,
    };
    Ok(TimeAveragedDistribution::closed(
        &table,
        per_vertex,
        example.name(),
    ))
}

fn unit_sphere_indicator(d: usize) -> Vec<f64> {
    let mut f = vec![0.0; d + 1];
    f[1] = 1.0;
    f
}

/// Simple walk on H(d, 3). With `h = |x|`, `h₁ = |x⊕y|`, `h₂ = |x⊕2y|` and
/// `cos θ_j = (d - 3j)/(2d)`:
///
/// `P̄(x) = (2d·9^d)^{-1} Σ_{|y|=1} [A² + (K_d(h) - K_d(h₁))²/4]
///        + (3·9^d)^{-1} Σ_{j<d} (d-j)^{-1} Σ_{|y|=1} |(K_j(h) + K_j(h₁) e^{2iθ_j} - K_j(h₂) e^{iθ_j}) / (1 + 3j/d)|²`
///
/// where `A = 1 + Σ_{j<d} d/(d+3j) (K_j(h) + K_j(h₁) - K_j(h₂)) + (K_d(h) + K_d(h₁) - 2K_d(h₂))/6`.
fn simple_n3_limit(table: &KrawtchoukTable) -> Result<Vec<f64>> {
    let params = *table.params();
    let space = HammingSpace::try_new(params)?;
    let d = params.d();
    let df = d as f64;
    let nine_d = 9f64.powi(d as i32);
    let k = |j: usize, h: usize| table.kf(j, h);
    let units: Vec<usize> = (0..space.size())
        .filter(|&y| space.weight(y) == 1)
        .collect();
    let phases: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(1.0, ((df - 3.0 * j as f64) / (2.0 * df)).acos()))
        .collect();
    Ok(space
        .class_representatives()
        .into_iter()
        .map(|x| {
            let h = space.weight(x);
            let mut first = 0.0;
            let mut second = 0.0;
            for &y in &units {
                let h1 = space.weight(space.add(x, y));
                let h2 = space.weight(space.scaled_add(x, 2, y));
                let mut a = 1.0 + (k(d, h) + k(d, h1) - 2.0 * k(d, h2)) / 6.0;
                for j in 1..d {
                    a += df / (df + 3.0 * j as f64) * (k(j, h) + k(j, h1) - k(j, h2));
                    let e = phases[j];
                    let z =
                        (e * e * k(j, h1) - e * k(j, h2) + k(j, h)) / (1.0 + 3.0 * j as f64 / df);
                    second += z.norm_sqr() / (df - j as f64);
                }
                let tail = k(d, h) - k(d, h1);
                first += a * a + tail * tail / 4.0;
            }
            first / (2.0 * df * nine_d) + second / (3.0 * nine_d)
        })
        .collect())
}

/// One named identity check with its measured residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest absolute residual for floating checks; 0 for exact ones.
    pub max_residual: f64,
    pub exact: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

const IDENTITY_MAX_D: usize = 12;
const ROOT_SUM_TOL: f64 = 1e-12;

/// Runs the Krawtchouk and root-of-unity identities used by the n = 2 and
/// odd-n limit formulas.
pub fn identity_suite() -> Result<IdentityReport> {
    Ok(IdentityReport {
        checks: vec![
            squared_sum_identity()?,
            unit_sphere_identity()?,
            three_term_recurrence()?,
            root_sums()?,
        ],
    })
}

fn exact_check(name: &str) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        cases: 0,
        failures: 0,
        max_residual: 0.0,
        exact: true,
    }
}

fn record(check: &mut IdentityCheck, ok: bool) {
    check.cases += 1;
    if !ok {
        check.failures += 1;
    }
}

/// `Σ_j K_j(h)² · C(d, h) = C(2(d-h), d-h) C(2h, h)` for n = 2.
fn squared_sum_identity() -> Result<IdentityCheck> {
    let mut check = exact_check("krawtchouk_squared_sum");
    for d in 2..=IDENTITY_MAX_D {
        let table = binary_table(d)?;
        for h in 0..=d {
            let lhs: BigInt = (0..=d)
                .map(|j| big(table.k(j, h)) * big(table.k(j, h)))
                .sum::<BigInt>()
                * big_binomial(d, h);
            record(
                &mut check,
                lhs == central_binomial(d - h) * central_binomial(h),
            );
        }
    }
    Ok(check)
}

fn binary_table(d: usize) -> Result<KrawtchoukTable> {
    KrawtchoukTable::new(HammingParams::new(d, 2)?)
}

/// `Σ_{|z|=1} (ρ_j K_j(h) - K_j(|x⊕z|))² = (1 - h/d) h (K_j(h-1) - K_j(h+1))²`
/// with `ρ_j = 1 - 2j/d`, cleared of denominators by `d²`.
fn unit_sphere_identity() -> Result<IdentityCheck> {
    let mut check = exact_check("unit_sphere_sum");
    for d in 2..=IDENTITY_MAX_D {
        let table = binary_table(d)?;
        let di = d as i128;
        let k = |j: usize, h: isize| -> i128 {
            if h < 0 || h as usize > d {
                0
            } else {
                table.k(j, h as usize)
            }
        };
        for j in 1..d {
            let rho_num = di - 2 * j as i128;
            for h in 0..=d {
                let mut lhs = 0i128;
                for (b, count) in sphere_intersections(table.params(), h, 1)? {
                    let v = rho_num * table.k(j, h) - di * table.k(j, b);
                    lhs += count * v * v;
                }
                let hi = h as isize;
                let diff = k(j, hi - 1) - k(j, hi + 1);
                let rhs = di * (di - h as i128) * h as i128 * diff * diff;
                record(&mut check, lhs == rhs);
            }
        }
    }
    Ok(check)
}

/// `i K_j(i-1) + (d-i) K_j(i+1) = (d-2j) K_j(i)`, `1 ≤ i ≤ d-1`, n = 2.
fn three_term_recurrence() -> Result<IdentityCheck> {
    let mut check = exact_check("three_term_recurrence");
    for d in 2..=IDENTITY_MAX_D {
        let table = binary_table(d)?;
        let di = d as i128;
        for j in 0..=d {
            for i in 1..d {
                let ii = i as i128;
                let lhs = ii * table.k(j, i - 1) + (di - ii) * table.k(j, i + 1);
                record(&mut check, lhs == (di - 2 * j as i128) * table.k(j, i));
            }
        }
    }
    Ok(check)
}

/// For odd n: `Σ_k 1/(1+η^k) = n/2`, `Σ_k η^{lk}/(1+η^k) = (n/2)(-1)^{l-1}`,
/// `Σ_k 1/|1+η^k|² = n²/4`.
fn root_sums() -> Result<IdentityCheck> {
    let mut check = IdentityCheck {
        name: "root_of_unity_sums".to_string(),
        cases: 0,
        failures: 0,
        max_residual: 0.0,
        exact: false,
    };
    let one = Complex64::new(1.0, 0.0);
    for n in [3usize, 5, 7, 11] {
        let roots = crate::hamming_scheme::RootsOfUnity::new(n);
        let nf = n as f64;
        let mut residuals = Vec::new();
        let s1: Complex64 = (0..n).map(|k| one / (one + roots.pow(k as i64))).sum();
        residuals.push((s1 - nf / 2.0).norm());
        for l in 1..n {
            let s2: Complex64 = (0..n)
                .map(|k| roots.pow((l * k) as i64) / (one + roots.pow(k as i64)))
                .sum();
            let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
            residuals.push((s2 - nf / 2.0 * sign).norm());
        }
        let s3: f64 = (0..n)
            .map(|k| 1.0 / (one + roots.pow(k as i64)).norm_sqr())
            .sum();
        residuals.push((s3 - nf * nf / 4.0).abs());
        for r in residuals {
            check.max_residual = check.max_residual.max(r);
            record(&mut check, r <= ROOT_SUM_TOL);
        }
    }
    Ok(check)
}

/// `Σ_h` of the exact arcsine law; equals 1.
pub fn arcsine_total_exact(d: usize) -> BigRational {
    arcsine_pmf_exact(d).into_iter().sum()
}

/// `P̄(0) - 1/n - (1-1/n)/n^d` for the independent walk on an odd prime n.
pub fn independent_general_point_gap(d: usize, n: usize) -> Result<f64> {
    let dist = limit_example(&LimitExample::IndependentGeneral { d, n })?;
    let nf = n as f64;
    Ok((dist.per_vertex[0] - 1.0 / nf - (1.0 - 1.0 / nf) / nf.powi(d as i32)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_walk::{ratio, weights_for, WalkWeights};

    fn walk(kind: WalkKind, d: usize, n: usize) -> Walk {
        Walk::from_kind(&kind, HammingParams::new(d, n).unwrap()).unwrap()
    }

    #[test]
    fn cesaro_t1_is_point_mass() {
        let w = walk(WalkKind::Simple, 3, 2);
        let (dist, _) = cesaro_average(&w, 1, EnginePath::Bruteforce).unwrap();
        assert!((dist.per_vertex[0] - 1.0).abs() < 1e-15);
        assert!(dist.per_vertex[1..].iter().all(|&v| v.abs() < 1e-15));
        assert!(cesaro_average(&w, 0, EnginePath::Auto).is_err());
    }

    #[test]
    fn cesaro_paths_agree() {
        let w = walk(WalkKind::Mixture { alpha: 0.3 }, 2, 3);
        let (a, ra) = cesaro_average(&w, 97, EnginePath::Bruteforce).unwrap();
        let (b, rb) = cesaro_average(&w, 97, EnginePath::Spectral).unwrap();
        let (c, _) = cesaro_average(&w, 97, EnginePath::Fourier).unwrap();
        assert_eq!(ra.taken, EnginePath::Bruteforce);
        assert_eq!(rb.taken, EnginePath::Spectral);
        assert!(a.max_abs_diff(&b) < 1e-9);
        assert!(a.max_abs_diff(&c) < 1e-9);
    }

    #[test]
    fn cesaro_records_fallback() {
        let w = walk(WalkKind::Simple, 2, 3);
        let (_, report) = cesaro_average(&w, 10, EnginePath::Spectral).unwrap();
        assert_eq!(report.taken, EnginePath::Fourier);
        assert!(report.fallback.is_some());
    }

    #[test]
    fn independent_n2_spot_value() {
        let dist = limit_example(&LimitExample::IndependentN2 { d: 2 }).unwrap();
        assert!((dist.per_vertex[0] - 7.0 / 16.0).abs() < 1e-15);
        assert!((dist.per_vertex[1] - 3.0 / 16.0).abs() < 1e-15);
        assert!((dist.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn independent_general_n3_d2() {
        let dist = limit_example(&LimitExample::IndependentGeneral { d: 2, n: 3 }).unwrap();
        assert!((dist.per_vertex[0] - 11.0 / 27.0).abs() < 1e-15);
        assert!((dist.total() - 1.0).abs() < 1e-14);
        for d in [6, 8, 10] {
            assert!(independent_general_point_gap(d, 3).unwrap() < 1e-15);
        }
    }

    #[test]
    fn arcsine_small_cases() {
        assert_eq!(arcsine_pmf_exact(1), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(
            arcsine_pmf_exact(2),
            vec![ratio(3, 8), ratio(1, 4), ratio(3, 8)]
        );
        for d in 1..=30 {
            assert_eq!(arcsine_total_exact(d), BigRational::one());
        }
    }

    #[test]
    fn identity_suite_passes() {
        let report = identity_suite().unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
            assert!(c.cases > 0);
        }
    }

    #[test]
    fn generic_n2_matches_mixture_example() {
        let w = walk(WalkKind::Mixture { alpha: 0.3 }, 3, 2);
        let (generic, parts) = limit_closed_n2(&w).unwrap();
        let example = limit_example(&LimitExample::MixtureN2 { d: 3, r: 0.3 }).unwrap();
        assert!(generic.max_abs_diff(&example) < 1e-14);
        let half = |v: &[f64]| -> f64 {
            v.iter()
                .zip(&generic.kappa)
                .map(|(p, &k)| p * k as f64)
                .sum()
        };
        assert!((half(&parts.arcsine) - 0.5).abs() < 1e-14);
        assert!((half(&parts.residual) - 0.5).abs() < 1e-14);
        let arcsine = arcsine_pmf(3);
        for h in 0..=3 {
            assert!((parts.arcsine[h] * generic.kappa[h] as f64 - arcsine[h] / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn generic_n2_rejects_boundary() {
        let w = walk(WalkKind::Simple, 3, 2);
        assert!(matches!(
            limit_closed_n2(&w),
            Err(QwError::HypothesisViolated(_))
        ));
        let w = walk(WalkKind::Independent, 3, 2);
        assert!(matches!(
            limit_closed_n2(&w),
            Err(QwError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn exact_decomposition_halves() {
        let params = HammingParams::new(4, 2).unwrap();
        let weights = WalkWeights::from_exact(
            params,
            vec![
                ratio(1, 10),
                ratio(2, 5),
                ratio(1, 5),
                ratio(1, 5),
                ratio(1, 10),
            ],
        )
        .unwrap();
        let w = Walk::new(weights).unwrap();
        let parts = limit_closed_n2_exact(&w).unwrap();
        assert_eq!(parts.arcsine_total(), ratio(1, 2));
        assert_eq!(parts.residual_total(), ratio(1, 2));
    }

    #[test]
    fn closed_forms_are_distributions() {
        for ex in [
            LimitExample::SimpleN2 { d: 4 },
            LimitExample::Nonlocal2N2 { d: 5 },
            LimitExample::MixtureN2 { d: 4, r: 0.7 },
            LimitExample::IndependentGeneral { d: 3, n: 5 },
            LimitExample::SimpleN3 { d: 3 },
        ] {
            let dist = limit_example(&ex).unwrap();
            assert!((dist.total() - 1.0).abs() < 1e-9, "{ex:?} {}", dist.total());
            assert!(dist.min_value() >= 0.0);
        }
    }

    #[test]
    fn example_errors() {
        assert!(limit_example(&LimitExample::Nonlocal2N2 { d: 4 }).is_err());
        assert!(limit_example(&LimitExample::MixtureN2 { d: 3, r: 0.5 }).is_err());
        assert!(limit_example(&LimitExample::IndependentGeneral { d: 2, n: 4 }).is_err());
    }

    #[test]
    fn simple_n2_matches_cesaro() {
        let ex = LimitExample::SimpleN2 { d: 4 };
        let closed = limit_example(&ex).unwrap();
        let w = Walk::new(weights_for(&ex.walk_kind(), ex.params().unwrap()).unwrap()).unwrap();
        let (avg, _) = cesaro_average(&w, 4000, EnginePath::Auto).unwrap();
        assert!(closed.max_abs_diff(&avg) <= 10.0 / 4000.0);
    }
}
