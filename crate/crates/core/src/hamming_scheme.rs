//! The Hamming scheme H(d, n): vertices of `{0, …, n-1}^d`, distance classes,
//! Krawtchouk polynomials and the character sums that diagonalize class
//! functions.
//!
//! Vertices are laid out in base-n lexicographic order with the first digit
//! most significant. Every module in the crate relies on this codec, so
//! amplitude and probability vectors can be indexed by `usize` directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{QwError, Result};

/// Largest `n^d` for which vertex-indexed storage is materialized.
pub const MAX_STATES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HammingParams {
    d: usize,
    n: usize,
    size: usize,
    prime: bool,
}

impl HammingParams {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 || n < 2 {
            return Err(QwError::InvalidParams(format!(
                "need d >= 2 and n >= 2, got d = {d}, n = {n}"
            )));
        }
        let mut size: u128 = 1;
        for _ in 0..d {
            size = size.saturating_mul(n as u128);
        }
        if size > usize::MAX as u128 {
            return Err(QwError::SizeTooLarge {
                what: "state space n^d",
                size,
                limit: usize::MAX as u128,
            });
        }
        Ok(Self {
            d,
            n,
            size: size as usize,
            prime: is_prime(n),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices, `n^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_prime(&self) -> bool {
        self.prime
    }

    pub fn require_prime(&self) -> Result<()> {
        if self.prime {
            Ok(())
        } else {
            Err(QwError::NotPrime(self.n))
        }
    }

    pub fn vertex(&self, digits: Vec<usize>) -> Result<Vertex> {
        Vertex::new(self, digits)
    }

    pub fn encode(&self, v: &Vertex) -> Result<usize> {
        if v.digits.len() != self.d {
            return Err(QwError::DimensionMismatch {
                expected: self.d,
                found: v.digits.len(),
            });
        }
        Ok(v.digits.iter().fold(0, |acc, &x| acc * self.n + x))
    }

    pub fn decode(&self, mut index: usize) -> Vertex {
        debug_assert!(index < self.size);
        let mut digits = vec![0; self.d];
        for slot in digits.iter_mut().rev() {
            *slot = index % self.n;
            index /= self.n;
        }
        Vertex { digits }
    }

    /// Hamming weight of the vertex with the given index.
    pub fn weight_of(&self, mut index: usize) -> usize {
        let mut w = 0;
        for _ in 0..self.d {
            if !index.is_multiple_of(self.n) {
                w += 1;
            }
            index /= self.n;
        }
        w
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    digits: Vec<usize>,
}

impl Vertex {
    pub fn new(params: &HammingParams, digits: Vec<usize>) -> Result<Self> {
        if digits.len() != params.d {
            return Err(QwError::DimensionMismatch {
                expected: params.d,
                found: digits.len(),
            });
        }
        if let Some(&bad) = digits.iter().find(|&&x| x >= params.n) {
            return Err(QwError::InvalidParams(format!(
                "digit {bad} out of range for n = {}",
                params.n
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Number of nonzero digits, i.e. the distance to the origin.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&x| x != 0).count()
    }
}

/// Number of coordinates in which `x` and `y` differ.
pub fn distance(x: &Vertex, y: &Vertex) -> Result<usize> {
    if x.digits.len() != y.digits.len() {
        return Err(QwError::DimensionMismatch {
            expected: x.digits.len(),
            found: y.digits.len(),
        });
    }
    Ok(x.digits
        .iter()
        .zip(&y.digits)
        .filter(|(a, b)| a != b)
        .count())
}

/// Precomputed digits and weights for every vertex, used by the hot loops.
#[derive(Clone, Debug)]
pub struct HammingSpace {
    params: HammingParams,
    digits: Vec<u32>,
    weights: Vec<u8>,
    place: Vec<usize>,
}

impl HammingSpace {
    /// Like [`HammingSpace::new`], but refuses more than [`MAX_STATES`] vertices.
    pub fn try_new(params: HammingParams) -> Result<Self> {
        if params.size > MAX_STATES {
            return Err(QwError::SizeTooLarge {
                what: "state space n^d",
                size: params.size as u128,
                limit: MAX_STATES as u128,
            });
        }
        Ok(Self::new(params))
    }

    pub fn new(params: HammingParams) -> Self {
        let (d, n, size) = (params.d, params.n, params.size);
        let mut digits = vec![0u32; size * d];
        let mut weights = vec![0u8; size];
        for idx in 0..size {
            let mut rem = idx;
            let mut w = 0u8;
            for pos in (0..d).rev() {
                let digit = rem % n;
                rem /= n;
                digits[idx * d + pos] = digit as u32;
                if digit != 0 {
                    w += 1;
                }
            }
            weights[idx] = w;
        }
        let mut place = vec![1usize; d];
        for pos in (0..d.saturating_sub(1)).rev() {
            place[pos] = place[pos + 1] * n;
        }
        Self {
            params,
            digits,
            weights,
            place,
        }
    }

    pub fn params(&self) -> &HammingParams {
        &self.params
    }

    pub fn size(&self) -> usize {
        self.params.size
    }

    #[inline]
    pub fn weight(&self, index: usize) -> usize {
        self.weights[index] as usize
    }

    #[inline]
    pub fn digits(&self, index: usize) -> &[u32] {
        let d = self.params.d;
        &self.digits[index * d..(index + 1) * d]
    }

    /// Index of `x ⊕ scale·y` (componentwise, modulo n).
    #[inline]
    pub fn scaled_add(&self, x: usize, scale: usize, y: usize) -> usize {
        if self.params.n == 2 {
            return if scale % 2 == 1 { x ^ y } else { x };
        }
        let n = self.params.n as u32;
        let s = (scale % self.params.n) as u32;
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut out = 0;
        for pos in 0..self.params.d {
            out += ((dx[pos] + s * dy[pos]) % n) as usize * self.place[pos];
        }
        out
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.scaled_add(x, 1, y)
    }

    /// Index of `⊖x`.
    pub fn neg(&self, x: usize) -> usize {
        self.scaled_add(0, self.params.n - 1, x)
    }

    /// `x·y mod n`.
    #[inline]
    pub fn dot(&self, x: usize, y: usize) -> usize {
        let n = self.params.n as u32;
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut acc = 0u32;
        for pos in 0..self.params.d {
            acc = (acc + dx[pos] * dy[pos]) % n;
        }
        acc as usize
    }

    /// Vertex indices grouped by weight; entry `h` lists the sphere of radius
    /// `h` around the origin.
    pub fn weight_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.params.d + 1];
        for idx in 0..self.size() {
            classes[self.weight(idx)].push(idx);
        }
        classes
    }

    /// One representative per weight class: `1…10…0` with `h` leading ones.
    pub fn class_representatives(&self) -> Vec<usize> {
        (0..=self.params.d)
            .map(|h| self.place[..h].iter().sum())
            .collect()
    }
}

/// Checked binomial coefficient.
pub fn binomial(n: usize, k: usize) -> Result<i128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i128)
            .ok_or_else(|| QwError::Overflow(format!("C({n},{k})")))?
            / (i as i128 + 1);
    }
    Ok(acc)
}

fn checked_pow(base: i128, exp: usize, what: &str) -> Result<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .ok_or_else(|| QwError::Overflow(what.to_string()))?;
    }
    Ok(acc)
}

/// Exact Krawtchouk values `K_i(j)` and sphere sizes `κ_i` of H(d, n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KrawtchoukTable {
    params: HammingParams,
    values: Vec<i128>,
    kappa: Vec<i128>,
}

impl KrawtchoukTable {
    /// Builds the table from the alternating binomial sum
    /// `K_i(j) = Σ_l (-1)^l (n-1)^{i-l} C(j,l) C(d-j,i-l)`.
    pub fn new(params: HammingParams) -> Result<Self> {
        let (d, n) = (params.d, params.n);
        let q = n as i128 - 1;
        let mut values = vec![0i128; (d + 1) * (d + 1)];
        for i in 0..=d {
            for j in 0..=d {
                let mut acc: i128 = 0;
                for l in 0..=i {
                    let term = checked_pow(q, i - l, "(n-1)^(i-l)")?
                        .checked_mul(binomial(j, l)?)
                        .and_then(|t| t.checked_mul(binomial(d - j, i - l).ok()?))
                        .ok_or_else(|| QwError::Overflow(format!("K_{i}({j})")))?;
                    acc = if l % 2 == 0 {
                        acc.checked_add(term)
                    } else {
                        acc.checked_sub(term)
                    }
                    .ok_or_else(|| QwError::Overflow(format!("K_{i}({j})")))?;
                }
                values[i * (d + 1) + j] = acc;
            }
        }
        let kappa = (0..=d).map(|i| values[i * (d + 1)]).collect();
        Ok(Self {
            params,
            values,
            kappa,
        })
    }

    pub fn params(&self) -> &HammingParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    /// `K_i(j)`.
    #[inline]
    pub fn k(&self, i: usize, j: usize) -> i128 {
        self.values[i * (self.params.d + 1) + j]
    }

    #[inline]
    pub fn kf(&self, i: usize, j: usize) -> f64 {
        self.k(i, j) as f64
    }

    /// Sphere size `κ_i = (n-1)^i C(d,i)`.
    pub fn kappa(&self, i: usize) -> i128 {
        self.kappa[i]
    }

    pub fn kappas(&self) -> &[i128] {
        &self.kappa
    }

    /// Zonal spherical function `Q_i(j) = K_i(j) / κ_i`.
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.k(i, j) as f64 / self.kappa[i] as f64
    }

    /// Σ_l K_i(l) K_j(l) C(d,l) (n-1)^l, which equals `δ_ij κ_i n^d` when the
    /// binomial orthogonality holds. Computed exactly.
    pub fn orthogonality_sum(&self, i: usize, j: usize) -> Result<i128> {
        let d = self.params.d;
        let q = self.params.n as i128 - 1;
        let mut acc: i128 = 0;
        for l in 0..=d {
            let term = self
                .k(i, l)
                .checked_mul(self.k(j, l))
                .and_then(|t| t.checked_mul(binomial(d, l).ok()?))
                .and_then(|t| t.checked_mul(checked_pow(q, l, "").ok()?))
                .ok_or_else(|| QwError::Overflow("orthogonality sum".into()))?;
            acc = acc
                .checked_add(term)
                .ok_or_else(|| QwError::Overflow("orthogonality sum".into()))?;
        }
        Ok(acc)
    }
}

/// Coefficients of `(1+(n-1)s)^{d-j} (1-s)^j`, i.e. the column `K_·(j)`.
pub fn krawtchouk_by_genfun(j: usize, params: &HammingParams) -> Result<Vec<i128>> {
    let d = params.d;
    if j > d {
        return Err(QwError::InvalidParams(format!("j = {j} exceeds d = {d}")));
    }
    let q = params.n as i128 - 1;
    let mut coeffs = vec![1i128];
    let factors = std::iter::repeat_n([1, q], d - j).chain(std::iter::repeat_n([1, -1], j));
    for [c0, c1] in factors {
        let mut next = vec![0i128; coeffs.len() + 1];
        for (p, &c) in coeffs.iter().enumerate() {
            let overflow = || QwError::Overflow("generating function".into());
            next[p] = next[p]
                .checked_add(c.checked_mul(c0).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
            next[p + 1] = next[p + 1]
                .checked_add(c.checked_mul(c1).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// The principal n-th root of unity `e^{2πi/n}`.
pub fn eta(n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / n as f64)
}

/// Table of `η^k`, `k = 0..n`, indexed modulo n so that `η^n = 1` exactly.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    powers: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(n: usize) -> Self {
        let powers = (0..n)
            .map(|k| snap(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)))
            .collect();
        Self { powers }
    }

    pub fn n(&self) -> usize {
        self.powers.len()
    }

    /// `η^e` for any integer exponent.
    #[inline]
    pub fn pow(&self, e: i64) -> Complex64 {
        self.powers[e.rem_euclid(self.powers.len() as i64) as usize]
    }
}

// Pin the quarter-turn values so that n = 2 and n = 4 are exact.
fn snap(z: Complex64) -> Complex64 {
    let r = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    Complex64::new(r(z.re), r(z.im))
}

/// `Σ_{z∈X} η^{k ξ·z} f(|z|)` by enumeration over all vertices.
pub fn character_sum(
    space: &HammingSpace,
    f: &[Complex64],
    xi: usize,
    k: usize,
) -> Result<Complex64> {
    check_character_args(space, f, k)?;
    let roots = RootsOfUnity::new(space.params.n);
    Ok((0..space.size())
        .map(|z| roots.pow((k * space.dot(xi, z)) as i64) * f[space.weight(z)])
        .sum())
}

/// `Σ_{ξ∈X} η^{-k ξ·z} f(|ξ|)` by enumeration over all vertices.
pub fn character_sum_dual(
    space: &HammingSpace,
    f: &[Complex64],
    z: usize,
    k: usize,
) -> Result<Complex64> {
    check_character_args(space, f, k)?;
    let roots = RootsOfUnity::new(space.params.n);
    Ok((0..space.size())
        .map(|xi| roots.pow(-((k * space.dot(xi, z)) as i64)) * f[space.weight(xi)])
        .sum())
}

/// The class-level value `Σ_j K_j(h) f(j)` that both character sums reduce to.
pub fn krawtchouk_transform(table: &KrawtchoukTable, f: &[Complex64], h: usize) -> Complex64 {
    (0..=table.d()).map(|j| f[j] * table.kf(j, h)).sum()
}

fn check_character_args(space: &HammingSpace, f: &[Complex64], k: usize) -> Result<()> {
    space.params.require_prime()?;
    if k == 0 || k >= space.params.n {
        return Err(QwError::InvalidParams(format!(
            "character index k = {k} must lie in 1..{}",
            space.params.n
        )));
    }
    if f.len() != space.params.d + 1 {
        return Err(QwError::DimensionMismatch {
            expected: space.params.d + 1,
            found: f.len(),
        });
    }
    Ok(())
}

/// For a fixed `x` with `|x| = h`, counts the vertices `y` with `|y| = a`
/// grouped by `|x ⊕ y|`. Returns `(b, count)` pairs.
pub fn sphere_intersections(
    params: &HammingParams,
    h: usize,
    a: usize,
) -> Result<Vec<(usize, i128)>> {
    let (d, n) = (params.d, params.n as i128);
    let mut out = vec![0i128; d + 1];
    // i: coordinates in the support of x where y is nonzero,
    // c: of those, coordinates where y cancels x.
    for i in 0..=h.min(a) {
        if a - i > d - h {
            continue;
        }
        for c in 0..=i {
            let b = h + a - i - c;
            let count = binomial(h, i)?
                .checked_mul(binomial(i, c)?)
                .and_then(|t| t.checked_mul(checked_pow(n - 2, i - c, "").ok()?))
                .and_then(|t| t.checked_mul(binomial(d - h, a - i).ok()?))
                .and_then(|t| t.checked_mul(checked_pow(n - 1, a - i, "").ok()?))
                .ok_or_else(|| QwError::Overflow("sphere intersection".into()))?;
            out[b] += count;
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect())
}
