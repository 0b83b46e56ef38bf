//! Szegedy-coined quantum walk on H(d, n).
//!
//! Amplitudes `ψ_{y,x}(t)` carry a coin register `y` and a position `x`, both
//! vertices of the Hamming graph. One step applies the coin
//! `C = 2 p pᵀ - I` with `p_y = √(w_{|y|}/κ_{|y|})` and then the shift
//! `x → x ⊕ y`. The walk starts at `ψ_{y,x}(0) = δ_{x,0} p_y`.

mod eigencheck;
mod evolution;
mod spectral;

pub use eigencheck::{mode_unitary_eigencheck, EigencheckReport, EIGEN_LIMIT};
pub use evolution::{
    fourier_forward, fourier_inverse, fourier_step, initial_state, position_distribution,
    step_bruteforce,
};
pub use spectral::{
    mode_closed_form, mode_reduced_recursion, spectral_table_general, spectral_table_n2,
    wave_from_table, wave_spectral_general, wave_spectral_n2, ModeRecursion, ModeTable,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical_walk::{self, eigenvalues, guard, ClassicalSpectrum, WalkKind, WalkWeights};
use crate::error::{QwError, Result};
use crate::hamming_scheme::{HammingParams, HammingSpace, KrawtchoukTable, RootsOfUnity};
use crate::unit_circle_spectrum::ModeSpectrum;

/// Largest number of amplitudes `n^{2d}` held in a full wave vector.
pub const WAVE_LIMIT: usize = 1 << 22;

/// Coin register law: `p_y = √(w_{|y|}/κ_{|y|})` for every vertex `y`.
#[derive(Clone, Debug)]
pub struct CoinSpec {
    weights: WalkWeights,
    p: Vec<f64>,
    support: Vec<usize>,
}

impl CoinSpec {
    pub fn new(weights: WalkWeights, space: &HammingSpace, table: &KrawtchoukTable) -> Self {
        let p: Vec<f64> = (0..space.size())
            .map(|y| weights.vertex_prob(table, space.weight(y)).sqrt())
            .collect();
        let support = (0..p.len()).filter(|&y| p[y] != 0.0).collect();
        Self {
            weights,
            p,
            support,
        }
    }

    pub fn weights(&self) -> &WalkWeights {
        &self.weights
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Vertices with `p_y ≠ 0`.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn norm_sq(&self) -> f64 {
        self.p.iter().map(|v| v * v).sum()
    }

    /// Largest entry of `C Cᵀ - I` for the dense coin, guarded by [`EIGEN_LIMIT`].
    pub fn orthogonality_defect(&self) -> Result<f64> {
        let size = self.p.len();
        guard(size, EIGEN_LIMIT, "dense coin")?;
        let c = nalgebra::DMatrix::from_fn(size, size, |a, b| {
            2.0 * self.p[a] * self.p[b] - if a == b { 1.0 } else { 0.0 }
        });
        let defect = &c * c.transpose() - nalgebra::DMatrix::identity(size, size);
        Ok(defect.amax())
    }
}

/// Amplitudes over coin × position, stored row-major as `psi[y * N + x]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveVector {
    pub t: usize,
    pub size: usize,
    pub psi: Vec<Complex64>,
}

/// Fourier modes `ψ̃_{y,ξ}`, stored as `psi_tilde[y * N + ξ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    pub t: usize,
    pub size: usize,
    pub psi_tilde: Vec<Complex64>,
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}

impl WaveVector {
    pub fn get(&self, y: usize, x: usize) -> Complex64 {
        self.psi[y * self.size + x]
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.psi)
    }

    pub fn max_imag(&self) -> f64 {
        self.psi.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &WaveVector) -> f64 {
        max_diff(&self.psi, &other.psi)
    }
}

impl FourierField {
    pub fn get(&self, y: usize, xi: usize) -> Complex64 {
        self.psi_tilde[y * self.size + xi]
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.psi_tilde)
    }

    pub fn max_abs_diff(&self, other: &FourierField) -> f64 {
        max_diff(&self.psi_tilde, &other.psi_tilde)
    }

    /// `Σ_y |ψ̃_{y,ξ}|²` for one mode.
    pub fn mode_norm_sq(&self, xi: usize) -> f64 {
        (0..self.size).map(|y| self.get(y, xi).norm_sqr()).sum()
    }
}

/// `P_t(x) = Σ_y |ψ_{y,x}(t)|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionDistribution {
    pub t: usize,
    pub p: Vec<f64>,
}

impl PositionDistribution {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Class means and the largest deviation from them.
    pub fn class_means(&self, space: &HammingSpace) -> (Vec<f64>, f64) {
        classical_walk::class_aggregate(space, &self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EnginePath {
    #[default]
    Auto,
    Bruteforce,
    Fourier,
    Spectral,
}

impl EnginePath {
    pub fn name(self) -> &'static str {
        match self {
            EnginePath::Auto => "auto",
            EnginePath::Bruteforce => "bruteforce",
            EnginePath::Fourier => "fourier",
            EnginePath::Spectral => "spectral",
        }
    }
}

impl std::str::FromStr for EnginePath {
    type Err = QwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EnginePath::Auto),
            "bruteforce" => Ok(EnginePath::Bruteforce),
            "fourier" => Ok(EnginePath::Fourier),
            "spectral" => Ok(EnginePath::Spectral),
            other => Err(QwError::InvalidParams(format!(
                "unknown engine path '{other}'"
            ))),
        }
    }
}

/// Which path produced a result, and why the requested one was not used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathReport {
    pub requested: EnginePath,
    pub taken: EnginePath,
    pub fallback: Option<String>,
}

/// Everything derived from `(d, n, w)` that the engine paths share.
#[derive(Clone, Debug)]
pub struct Walk {
    space: HammingSpace,
    table: KrawtchoukTable,
    spectrum: ClassicalSpectrum,
    coin: CoinSpec,
    roots: RootsOfUnity,
}

impl Walk {
    pub fn new(weights: WalkWeights) -> Result<Self> {
        let params = *weights.params();
        params.require_prime()?;
        let table = KrawtchoukTable::new(params)?;
        let space = HammingSpace::try_new(params)?;
        let spectrum = eigenvalues(&weights, &table);
        let coin = CoinSpec::new(weights, &space, &table);
        Ok(Self {
            space,
            table,
            spectrum,
            coin,
            roots: RootsOfUnity::new(params.n()),
        })
    }

    pub fn from_kind(kind: &WalkKind, params: HammingParams) -> Result<Self> {
        Self::new(classical_walk::weights_for(kind, params)?)
    }

    pub fn params(&self) -> &HammingParams {
        self.space.params()
    }

    pub fn space(&self) -> &HammingSpace {
        &self.space
    }

    pub fn table(&self) -> &KrawtchoukTable {
        &self.table
    }

    pub fn spectrum(&self) -> &ClassicalSpectrum {
        &self.spectrum
    }

    pub fn coin(&self) -> &CoinSpec {
        &self.coin
    }

    pub fn roots_of_unity(&self) -> &RootsOfUnity {
        &self.roots
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    /// Mode spectra for the distance classes `j = 1..=d`.
    pub fn mode_spectra(&self) -> Result<Vec<ModeSpectrum>> {
        let n = self.params().n();
        (1..=self.params().d())
            .map(|j| ModeSpectrum::new(j, self.spectrum.rho()[j], n))
            .collect()
    }

    pub fn check_wave_size(&self) -> Result<()> {
        let size = self.size();
        guard(size.saturating_mul(size), WAVE_LIMIT, "wave vector")
    }

    /// The closed-form mode table at time `t`, if its hypotheses hold.
    pub fn spectral_table(&self, t: usize) -> Result<ModeTable> {
        if self.params().n() == 2 {
            Ok(spectral_table_n2(self, t))
        } else {
            spectral_table_general(self, &self.mode_spectra()?, t)
        }
    }

    /// Wave vector at time `t` by the requested path. `Auto` prefers the
    /// closed form and falls back to the Fourier recursion.
    pub fn wave_vector(&self, t: usize, path: EnginePath) -> Result<(WaveVector, PathReport)> {
        self.check_wave_size()?;
        let report = |taken, fallback| PathReport {
            requested: path,
            taken,
            fallback,
        };
        match path {
            EnginePath::Bruteforce => {
                let mut s = initial_state(self);
                for _ in 0..t {
                    s = step_bruteforce(self, &s)?;
                }
                Ok((s, report(EnginePath::Bruteforce, None)))
            }
            EnginePath::Fourier => {
                Ok((self.fourier_iterate(t)?, report(EnginePath::Fourier, None)))
            }
            EnginePath::Spectral | EnginePath::Auto => match self.spectral_table(t) {
                Ok(table) => Ok((
                    wave_from_table(self, &table),
                    report(EnginePath::Spectral, None),
                )),
                Err(e @ (QwError::HypothesisViolated(_) | QwError::DegenerateSpectrum { .. })) => {
                    Ok((
                        self.fourier_iterate(t)?,
                        report(EnginePath::Fourier, Some(e.to_string())),
                    ))
                }
                Err(e) => Err(e),
            },
        }
    }

    fn fourier_iterate(&self, t: usize) -> Result<WaveVector> {
        let mut f = fourier_forward(self, &initial_state(self))?;
        for _ in 0..t {
            f = fourier_step(self, &f);
        }
        fourier_inverse(self, &f)
    }

    /// Per-class probabilities `P_t(h)` at a vertex of weight `h`, for
    /// `t = 0..=t_max`, using only one representative position per class.
    ///
    /// `Spectral` evaluates the closed form at each `t`; `Fourier` iterates
    /// the symmetry-reduced mode recursion; `Bruteforce` evolves the full
    /// wave vector. `Auto` behaves like `Spectral` with fallback to `Fourier`.
    pub fn class_trajectory(
        &self,
        t_max: usize,
        path: EnginePath,
        mut visit: impl FnMut(usize, &[f64]),
    ) -> Result<PathReport> {
        let reps = self.space.class_representatives();
        let mut report = PathReport {
            requested: path,
            taken: path,
            fallback: None,
        };
        let mut effective = path;
        if matches!(path, EnginePath::Spectral | EnginePath::Auto) {
            match self.spectral_table(0) {
                Ok(_) => effective = EnginePath::Spectral,
                Err(e @ (QwError::HypothesisViolated(_) | QwError::DegenerateSpectrum { .. })) => {
                    effective = EnginePath::Fourier;
                    report.fallback = Some(e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        report.taken = effective;
        match effective {
            EnginePath::Bruteforce => {
                self.check_wave_size()?;
                let mut s = initial_state(self);
                for t in 0..=t_max {
                    if t > 0 {
                        s = step_bruteforce(self, &s)?;
                    }
                    let dist = position_distribution(&s);
                    let per: Vec<f64> = reps.iter().map(|&x| dist.p[x]).collect();
                    visit(t, &per);
                }
            }
            EnginePath::Fourier => {
                let mut rec = ModeRecursion::new(self);
                for t in 0..=t_max {
                    if t > 0 {
                        rec.step();
                    }
                    visit(t, &self.class_probabilities(&rec.table(), &reps));
                }
            }
            EnginePath::Spectral | EnginePath::Auto => {
                let modes = if self.params().n() == 2 {
                    Vec::new()
                } else {
                    self.mode_spectra()?
                };
                for t in 0..=t_max {
                    let table = if self.params().n() == 2 {
                        spectral_table_n2(self, t)
                    } else {
                        spectral_table_general(self, &modes, t)?
                    };
                    visit(t, &self.class_probabilities(&table, &reps));
                }
            }
        }
        Ok(report)
    }

    /// `P(x) = Σ_y |ψ_{y,x}|²` at the given positions from a mode table.
    pub fn class_probabilities(&self, table: &ModeTable, positions: &[usize]) -> Vec<f64> {
        positions
            .iter()
            .map(|&x| {
                self.coin
                    .support()
                    .iter()
                    .map(|&y| table.amplitude(self, y, x).norm_sqr())
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
