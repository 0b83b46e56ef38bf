use num_complex::Complex64;

use super::{Walk, WaveVector};
use crate::classical_walk::RHO_TOL;
use crate::error::{QwError, Result};
use crate::par;
use crate::unit_circle_spectrum::ModeSpectrum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `G[j][l]` of the representation
/// `ψ_{y,x}(t) = p_y n^{-d} Σ_{j=0}^{d} Σ_{l=0}^{n-1} K_j(|x ⊕ l y|) G[j][l]`.
///
/// Every closed form and the reduced recursion produce one of these.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeTable {
    pub t: usize,
    n: usize,
    g: Vec<Complex64>,
}

impl ModeTable {
    fn zeros(t: usize, d: usize, n: usize) -> Self {
        Self {
            t,
            n,
            g: vec![ZERO; (d + 1) * n],
        }
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.g[j * self.n + l]
    }

    fn set(&mut self, j: usize, l: usize, v: Complex64) {
        self.g[j * self.n + l] = v;
    }

    /// Builds `G[j][l] = n^{-1} Σ_k η^{lk} B[j][k]` from per-phase brackets.
    fn from_brackets(walk: &Walk, t: usize, brackets: &[Vec<Complex64>]) -> Self {
        let n = walk.params().n();
        let roots = walk.roots_of_unity();
        let mut table = Self::zeros(t, brackets.len() - 1, n);
        for (j, b) in brackets.iter().enumerate() {
            for l in 0..n {
                let s: Complex64 = (0..n).map(|k| roots.pow((l * k) as i64) * b[k]).sum();
                table.set(j, l, s / n as f64);
            }
        }
        table
    }

    pub fn amplitude(&self, walk: &Walk, y: usize, x: usize) -> Complex64 {
        let p = walk.coin().p()[y];
        if p == 0.0 {
            return ZERO;
        }
        let (space, table) = (walk.space(), walk.table());
        let d = walk.params().d();
        let mut acc = ZERO;
        for l in 0..self.n {
            let h = space.weight(space.scaled_add(x, l, y));
            for j in 0..=d {
                acc += self.get(j, l) * table.kf(j, h);
            }
        }
        acc * (p / walk.size() as f64)
    }
}

/// Bracket of the single-mode solution:
/// `(-η^{-k})^t (1 - Σ_i 2c_i/(1+η^k μ_i)) + Σ_i 2c_i μ_i^t/(1+η^k μ_i)`.
fn bracket(walk: &Walk, spec: &ModeSpectrum, k: usize, t: usize) -> Complex64 {
    let roots = walk.roots_of_unity();
    let ek = roots.pow(k as i64);
    let mut transient = ONE;
    let mut stationary = ZERO;
    for i in 0..spec.n() {
        let w = spec.c[i] * 2.0 / (ONE + ek * spec.mu[i]);
        transient -= w;
        stationary += w * spec.mu_pow(i, t);
    }
    let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
    roots.pow(-((k * t) as i64)) * sign * transient + stationary
}

fn require_interior(spec: &ModeSpectrum) -> Result<()> {
    spec.require_nondegenerate()?;
    if !spec.is_interior() {
        return Err(QwError::HypothesisViolated(format!(
            "class {} has boundary eigenvalue rho = {}",
            spec.j, spec.rho
        )));
    }
    Ok(())
}

/// `ψ̃_{y,ξ}(t)` from its initial value and the mode spectrum of class `|ξ|`.
pub fn mode_closed_form(
    walk: &Walk,
    spec: &ModeSpectrum,
    y: usize,
    xi: usize,
    t: usize,
) -> Result<Complex64> {
    let space = walk.space();
    let initial = Complex64::new(walk.coin().p()[y] / (walk.size() as f64).sqrt(), 0.0);
    if xi == 0 {
        return Ok(initial);
    }
    if space.weight(xi) != spec.j {
        return Err(QwError::InvalidParams(format!(
            "mode of weight {} evaluated with spectrum of class {}",
            space.weight(xi),
            spec.j
        )));
    }
    require_interior(spec)?;
    Ok(initial * bracket(walk, spec, space.dot(y, xi), t))
}

/// Mode table for prime `n ≥ 3` from the mode spectra of classes `1..=d`.
/// Requires every class eigenvalue strictly inside `(-1/(n-1), 1)` and
/// distinct roots.
pub fn spectral_table_general(walk: &Walk, modes: &[ModeSpectrum], t: usize) -> Result<ModeTable> {
    let (d, n) = (walk.params().d(), walk.params().n());
    if n < 3 {
        return Err(QwError::InvalidParams(
            "the general closed form needs n >= 3".into(),
        ));
    }
    if modes.len() != d {
        return Err(QwError::DimensionMismatch {
            expected: d,
            found: modes.len(),
        });
    }
    for spec in modes {
        require_interior(spec)?;
    }
    let mut brackets = vec![vec![ONE; n]];
    for spec in modes {
        brackets.push((0..n).map(|k| bracket(walk, spec, k, t)).collect());
    }
    Ok(ModeTable::from_brackets(walk, t, &brackets))
}

/// Mode table for `n = 2`, including the `ρ_j = ±1` classes.
pub fn spectral_table_n2(walk: &Walk, t: usize) -> ModeTable {
    let d = walk.params().d();
    let rho = walk.spectrum().rho();
    let tf = t as f64;
    let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut table = ModeTable::zeros(t, d, 2);
    table.set(0, 0, ONE);
    for j in 1..=d {
        let r = rho[j];
        let (a, b) = if r >= 1.0 - RHO_TOL {
            (1.0 - tf, tf)
        } else if r <= -1.0 + RHO_TOL {
            (sign * (1.0 - tf), -sign * tf)
        } else {
            let theta = r.clamp(-1.0, 1.0).acos();
            let mut a = ZERO;
            let mut b = ZERO;
            for s in [1.0, -1.0] {
                let mu = Complex64::from_polar(1.0, s * theta);
                let den = ONE - mu * r;
                a += Complex64::from_polar(1.0, s * theta * tf) / den;
                b += Complex64::from_polar(1.0, s * theta * (tf + 1.0)) / den;
            }
            table.set(j, 0, a * 0.5);
            table.set(j, 1, -b * 0.5);
            continue;
        };
        table.set(j, 0, Complex64::new(a, 0.0));
        table.set(j, 1, Complex64::new(b, 0.0));
    }
    table
}

pub fn wave_from_table(walk: &Walk, table: &ModeTable) -> WaveVector {
    let size = walk.size();
    let mut psi = vec![ZERO; size * size];
    par::for_each_chunk_mut(&mut psi, size, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            *out = table.amplitude(walk, y, x);
        }
    });
    WaveVector {
        t: table.t,
        size,
        psi,
    }
}

pub fn wave_spectral_n2(walk: &Walk, t: usize) -> Result<WaveVector> {
    if walk.params().n() != 2 {
        return Err(QwError::InvalidParams(
            "this closed form needs n = 2".into(),
        ));
    }
    walk.check_wave_size()?;
    Ok(wave_from_table(walk, &spectral_table_n2(walk, t)))
}

pub fn wave_spectral_general(walk: &Walk, t: usize) -> Result<WaveVector> {
    walk.check_wave_size()?;
    let table = spectral_table_general(walk, &walk.mode_spectra()?, t)?;
    Ok(wave_from_table(walk, &table))
}

/// The Fourier recursion reduced by symmetry. For `|ξ| = j` and
/// `y·ξ ≡ k`, `ψ̃_{y,ξ}(t) = p_y n^{-d/2} F_{j,k}(t)` with `F(0) = 1` and
/// `F_{j,k}(t+1) = η^{-k} (2 Σ_{k'} m_{j,k'} F_{j,k'}(t) - F_{j,k}(t))`,
/// where `m_{j,k}` is the coin mass on `{y : y·ξ ≡ k}`.
#[derive(Clone, Debug)]
pub struct ModeRecursion<'a> {
    walk: &'a Walk,
    t: usize,
    mass: Vec<Vec<f64>>,
    f: Vec<Vec<Complex64>>,
}

impl<'a> ModeRecursion<'a> {
    pub fn new(walk: &'a Walk) -> Self {
        let n = walk.params().n();
        let space = walk.space();
        let p = walk.coin().p();
        let mass = space
            .class_representatives()
            .into_iter()
            .map(|xi| {
                let mut m = vec![0.0; n];
                for &y in walk.coin().support() {
                    m[space.dot(y, xi)] += p[y] * p[y];
                }
                m
            })
            .collect::<Vec<_>>();
        let f = vec![vec![ONE; n]; mass.len()];
        Self {
            walk,
            t: 0,
            mass,
            f,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn step(&mut self) {
        let roots = self.walk.roots_of_unity();
        for (f, m) in self.f.iter_mut().zip(&self.mass) {
            let a: Complex64 = f.iter().zip(m).map(|(v, w)| v * w).sum();
            for (k, v) in f.iter_mut().enumerate() {
                *v = roots.pow(-(k as i64)) * (a * 2.0 - *v);
            }
        }
        self.t += 1;
    }

    pub fn table(&self) -> ModeTable {
        ModeTable::from_brackets(self.walk, self.t, &self.f)
    }
}

/// Reduced recursion advanced `t` steps.
pub fn mode_reduced_recursion(walk: &Walk, t: usize) -> ModeTable {
    let mut rec = ModeRecursion::new(walk);
    for _ in 0..t {
        rec.step();
    }
    rec.table()
}
