use num_complex::Complex64;

use super::{FourierField, PositionDistribution, Walk, WaveVector};
use crate::error::Result;
use crate::hamming_scheme::RootsOfUnity;
use crate::par;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ψ_{y,x}(0) = δ_{x,0} p_y`.
pub fn initial_state(walk: &Walk) -> WaveVector {
    let size = walk.size();
    let mut psi = vec![ZERO; size * size];
    for (y, &p) in walk.coin().p().iter().enumerate() {
        psi[y * size] = Complex64::new(p, 0.0);
    }
    WaveVector { t: 0, size, psi }
}

/// `ψ_{y,x}(t+1) = 2 p_y s(x ⊕ y) - ψ_{y,x⊕y}(t)` with
/// `s(z) = Σ_{y'} p_{y'} ψ_{y',z}(t)`.
pub fn step_bruteforce(walk: &Walk, state: &WaveVector) -> Result<WaveVector> {
    walk.check_wave_size()?;
    let size = state.size;
    let space = walk.space();
    let p = walk.coin().p();
    let support = walk.coin().support();
    let s = coin_projection(&state.psi, size, p, support);
    let mut next = vec![ZERO; size * size];
    par::for_each_chunk_mut(&mut next, size, |y, row| {
        let src = &state.psi[y * size..(y + 1) * size];
        let two_p = 2.0 * p[y];
        for (x, out) in row.iter_mut().enumerate() {
            let xy = space.add(x, y);
            *out = s[xy] * two_p - src[xy];
        }
    });
    Ok(WaveVector {
        t: state.t + 1,
        size,
        psi: next,
    })
}

/// `Σ_y p_y v[y * N + z]` for every column `z`.
fn coin_projection(v: &[Complex64], size: usize, p: &[f64], support: &[usize]) -> Vec<Complex64> {
    par::map_range(size, |z| {
        support.iter().map(|&y| v[y * size + z] * p[y]).sum()
    })
}

/// In-place length-n DFT along every axis of one row, with sign `±1` on the
/// exponent and no normalization.
fn dft_axes(row: &mut [Complex64], n: usize, d: usize, roots: &RootsOfUnity, sign: i64) {
    let mut buf = vec![ZERO; n];
    let mut place = 1usize;
    for _ in 0..d {
        for base in 0..row.len() {
            if !(base / place).is_multiple_of(n) {
                continue;
            }
            for (a, b) in buf.iter_mut().enumerate() {
                *b = row[base + a * place];
            }
            for k in 0..n {
                let mut acc = ZERO;
                for (a, v) in buf.iter().enumerate() {
                    acc += v * roots.pow(sign * (a * k) as i64);
                }
                row[base + k * place] = acc;
            }
        }
        place *= n;
    }
}

fn transform(walk: &Walk, data: &[Complex64], size: usize, sign: i64) -> Vec<Complex64> {
    let (d, n) = (walk.params().d(), walk.params().n());
    let scale = (size as f64).sqrt().recip();
    let roots = walk.roots_of_unity();
    let mut out = data.to_vec();
    par::for_each_chunk_mut(&mut out, size, |_, row| {
        dft_axes(row, n, d, roots, sign);
        row.iter_mut().for_each(|z| *z *= scale);
    });
    out
}

/// `ψ̃_{y,ξ} = n^{-d/2} Σ_x η^{ξ·x} ψ_{y,x}`.
pub fn fourier_forward(walk: &Walk, state: &WaveVector) -> Result<FourierField> {
    walk.params().require_prime()?;
    Ok(FourierField {
        t: state.t,
        size: state.size,
        psi_tilde: transform(walk, &state.psi, state.size, 1),
    })
}

/// `ψ_{y,x} = n^{-d/2} Σ_ξ η^{-ξ·x} ψ̃_{y,ξ}`.
pub fn fourier_inverse(walk: &Walk, field: &FourierField) -> Result<WaveVector> {
    walk.params().require_prime()?;
    Ok(WaveVector {
        t: field.t,
        size: field.size,
        psi: transform(walk, &field.psi_tilde, field.size, -1),
    })
}

/// `ψ̃_{y,ξ}(t+1) = η^{-ξ·y} (2 p_y Σ_{y'} p_{y'} ψ̃_{y',ξ} - ψ̃_{y,ξ})`.
pub fn fourier_step(walk: &Walk, field: &FourierField) -> FourierField {
    let size = field.size;
    let space = walk.space();
    let roots = walk.roots_of_unity();
    let p = walk.coin().p();
    let s = coin_projection(&field.psi_tilde, size, p, walk.coin().support());
    let mut next = vec![ZERO; size * size];
    par::for_each_chunk_mut(&mut next, size, |y, row| {
        let src = &field.psi_tilde[y * size..(y + 1) * size];
        let two_p = 2.0 * p[y];
        for (xi, out) in row.iter_mut().enumerate() {
            let phase = roots.pow(-(space.dot(xi, y) as i64));
            *out = phase * (s[xi] * two_p - src[xi]);
        }
    });
    FourierField {
        t: field.t + 1,
        size,
        psi_tilde: next,
    }
}

pub fn position_distribution(state: &WaveVector) -> PositionDistribution {
    let size = state.size;
    let p = par::map_range(size, |x| {
        (0..size).map(|y| state.psi[y * size + x].norm_sqr()).sum()
    });
    PositionDistribution { t: state.t, p }
}
