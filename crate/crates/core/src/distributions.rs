//! Weight distributions, the biweight approximation and their fixed-position
//! variants.
//!
//! Counts are kept both as `f64` and in the log domain; for long codes the
//! products in the transition formulas exceed the `f64` range.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bch::{ComponentCode, Variant};
use crate::error::{Error, Result};
use crate::numeric::LnFactorial;

/// Exact enumeration is used when the smaller of `k` and `n - k` is at most
/// this many bits.
pub const DEFAULT_EXACT_LOG2_LIMIT: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    Exact,
    Binomial,
}

/// How to obtain the weight distribution of the plain BCH parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightPolicy {
    /// Exact when `min(k, n-k) <= limit`, binomial otherwise.
    Auto { exact_log2_limit: usize },
    Exact,
    Binomial,
}

impl Default for WeightPolicy {
    fn default() -> Self {
        WeightPolicy::Auto {
            exact_log2_limit: DEFAULT_EXACT_LOG2_LIMIT,
        }
    }
}

/// Which branch of the biweight approximation applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiweightCase {
    /// No pair exists, or the second word is all-zero or all-one.
    Direct,
    /// Random overlap of the second word with the first.
    Overlap,
    /// Random overlap of the sum word with the first.
    Sum,
}

#[derive(Debug, Clone)]
pub struct WeightTables {
    n: usize,
    mode: WeightMode,
    counts: Vec<f64>,
    ln_counts: Vec<f64>,
    exact: Option<Vec<BigUint>>,
    lf: LnFactorial,
}

fn ln_of_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl WeightTables {
    pub fn for_code(code: &ComponentCode) -> Self {
        Self::for_code_with(code, WeightPolicy::default())
    }

    /// Weight distribution of `code`: computed for the plain BCH parent, then
    /// transformed for the even-weight subcode and for shortening.
    pub fn for_code_with(code: &ComponentCode, policy: WeightPolicy) -> Self {
        let d = code.descriptor();
        let parent = ComponentCode::bch(d.nu, d.t).expect("parent of a valid code");
        let np = parent.n();
        let kp = parent.k();
        let use_exact = match policy {
            WeightPolicy::Exact => true,
            WeightPolicy::Binomial => false,
            WeightPolicy::Auto { exact_log2_limit } => kp.min(np - kp) <= exact_log2_limit,
        };
        let mut tables = if use_exact {
            Self::from_exact(plain_exact_distribution(&parent))
        } else {
            Self::binomial(np, d.nu, d.t)
        };
        if d.variant.is_even() {
            tables = tables.even_weight();
        }
        if d.variant.is_shortened() {
            tables = tables.shortened();
        }
        debug_assert_eq!(tables.n, code.n());
        tables
    }

    pub fn from_exact(counts: Vec<BigUint>) -> Self {
        let n = counts.len() - 1;
        let ln_counts: Vec<f64> = counts.iter().map(ln_of_big).collect();
        Self {
            n,
            mode: WeightMode::Exact,
            counts: counts.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect(),
            ln_counts,
            exact: Some(counts),
            lf: LnFactorial::new(n),
        }
    }

    /// `A(b) = 2^(-nu t) C(n, b)` for `2t+1 <= b <= n-2t-1`, `A(0) = A(n) = 1`.
    pub fn binomial(n: usize, nu: u32, t: usize) -> Self {
        let lf = LnFactorial::new(n);
        let shift = (nu as f64) * (t as f64) * std::f64::consts::LN_2;
        let ln_counts: Vec<f64> = (0..=n)
            .map(|b| {
                if b == 0 || b == n {
                    0.0
                } else if b > 2 * t && b + 2 * t < n {
                    lf.ln_binom(n as i64, b as i64) - shift
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        Self {
            n,
            mode: WeightMode::Binomial,
            counts: ln_counts.iter().map(|l| l.exp()).collect(),
            ln_counts,
            exact: None,
            lf,
        }
    }

    /// Odd-weight entries removed.
    pub fn even_weight(&self) -> Self {
        let mut out = self.clone();
        for b in (1..=self.n).step_by(2) {
            out.counts[b] = 0.0;
            out.ln_counts[b] = f64::NEG_INFINITY;
            if let Some(ex) = out.exact.as_mut() {
                ex[b] = BigUint::zero();
            }
        }
        out
    }

    /// `A_Sh(b) = (n + 1 - b) / (n + 1) A(b)` for a cyclic parent of length `n + 1`.
    pub fn shortened(&self) -> Self {
        let np = self.n;
        let n = np - 1;
        let lnp = (np as f64).ln();
        let mut counts = Vec::with_capacity(n + 1);
        let mut ln_counts = Vec::with_capacity(n + 1);
        for b in 0..=n {
            let f = (np - b) as f64;
            counts.push(self.counts[b] * f / np as f64);
            ln_counts.push(self.ln_counts[b] + f.ln() - lnp);
        }
        let exact = self.exact.as_ref().map(|ex| {
            (0..=n)
                .map(|b| {
                    let num = &ex[b] * BigUint::from(np - b);
                    debug_assert!((&num % BigUint::from(np)).is_zero());
                    num / BigUint::from(np)
                })
                .collect::<Vec<_>>()
        });
        if let Some(ex) = &exact {
            for (c, e) in counts.iter_mut().zip(ex) {
                *c = e.to_f64().unwrap_or(f64::INFINITY);
            }
        }
        Self {
            n,
            mode: self.mode,
            counts,
            ln_counts,
            exact,
            lf: LnFactorial::new(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// `A(b)` for all `b = 0..=n`.
    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// Exact integer counts, when available.
    pub fn exact_counts(&self) -> Option<&[BigUint]> {
        self.exact.as_deref()
    }

    #[inline]
    pub fn a(&self, b: usize) -> f64 {
        self.counts.get(b).copied().unwrap_or(0.0)
    }

    #[inline]
    pub fn ln_a(&self, b: i64) -> f64 {
        if b < 0 || b as usize > self.n {
            return f64::NEG_INFINITY;
        }
        self.ln_counts[b as usize]
    }

    /// Smallest nonzero weight.
    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&b| self.counts[b] > 0.0)
    }

    /// `A_k^alpha(b) = (b_alpha / n) A(b)`.
    pub fn fixed_position(&self, alpha: u8, b1: usize) -> f64 {
        self.ln_fixed_position(alpha, b1 as i64).exp()
    }

    #[inline]
    pub fn ln_fixed_position(&self, alpha: u8, b1: i64) -> f64 {
        let b_alpha = if alpha == 1 { b1 } else { self.n as i64 - b1 };
        if b_alpha <= 0 {
            return f64::NEG_INFINITY;
        }
        self.ln_a(b1) + (b_alpha as f64).ln() - (self.n as f64).ln()
    }

    fn check_sum(&self, b: [i64; 4]) -> Result<()> {
        if b.iter().any(|&x| x < 0) || b.iter().sum::<i64>() != self.n as i64 {
            return Err(Error::IndexSum {
                b11: b[0].max(0) as usize,
                b10: b[1].max(0) as usize,
                b01: b[2].max(0) as usize,
                b00: b[3].max(0) as usize,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Which approximation branch applies to `(b11, b10, b01, b00)`.
    pub fn biweight_case(&self, b: [i64; 4]) -> BiweightCase {
        let w2 = b[0] + b[2];
        let dh = b[1] + b[2];
        if w2 == 0 || w2 == self.n as i64 || self.ln_a(w2) == f64::NEG_INFINITY {
            BiweightCase::Direct
        } else if w2 <= dh {
            BiweightCase::Overlap
        } else {
            BiweightCase::Sum
        }
    }

    /// `ln B(b11, b10, b01, b00)` under the approximation; indices must be
    /// nonnegative and sum to `n` (unchecked).
    #[inline]
    pub fn ln_biweight_unchecked(&self, b: [i64; 4]) -> f64 {
        let [b11, b10, b01, b00] = b;
        let b1 = b11 + b10;
        let b0 = b01 + b00;
        let w2 = b11 + b01;
        let dh = b10 + b01;
        let n = self.n as i64;
        let la1 = self.ln_a(b1);
        if la1 == f64::NEG_INFINITY {
            return la1;
        }
        let law2 = self.ln_a(w2);
        if w2 == 0 || w2 == n || law2 == f64::NEG_INFINITY {
            return la1 + law2;
        }
        let lf = &self.lf;
        if w2 <= dh {
            la1 + law2 + lf.ln_binom(b1, b11) + lf.ln_binom(b0, b01) - lf.ln_binom(n, w2)
        } else {
            la1 + self.ln_a(dh) + lf.ln_binom(b1, b10) + lf.ln_binom(b0, b01) - lf.ln_binom(n, dh)
        }
    }

    pub fn ln_biweight(&self, b: [i64; 4]) -> Result<f64> {
        self.check_sum(b)?;
        Ok(self.ln_biweight_unchecked(b))
    }

    pub fn biweight(&self, b11: usize, b10: usize, b01: usize, b00: usize) -> Result<f64> {
        Ok(self.ln_biweight([b11 as i64, b10 as i64, b01 as i64, b00 as i64])?.exp())
    }

    /// Both non-trivial estimates `(overlap, sum)` for one configuration,
    /// for inspecting the branch boundary.
    pub fn biweight_estimates(&self, b: [i64; 4]) -> Result<(f64, f64)> {
        self.check_sum(b)?;
        let [b11, b10, b01, b00] = b;
        let (b1, b0, n) = (b11 + b10, b01 + b00, self.n as i64);
        let lf = &self.lf;
        let base = self.ln_a(b1);
        let overlap = base + self.ln_a(b11 + b01) + lf.ln_binom(b1, b11) + lf.ln_binom(b0, b01)
            - lf.ln_binom(n, b11 + b01);
        let sum = base + self.ln_a(b10 + b01) + lf.ln_binom(b1, b10) + lf.ln_binom(b0, b01)
            - lf.ln_binom(n, b10 + b01);
        Ok((overlap.exp(), sum.exp()))
    }

    /// `ln B_k^{alpha beta} = ln B + ln(b_{alpha beta} / n)` (unchecked indices).
    #[inline]
    pub fn ln_fixed_position_biweight_unchecked(&self, alpha: u8, beta: u8, b: [i64; 4]) -> f64 {
        let idx = match (alpha, beta) {
            (1, 1) => 0,
            (1, 0) => 1,
            (0, 1) => 2,
            _ => 3,
        };
        if b[idx] <= 0 {
            return f64::NEG_INFINITY;
        }
        self.ln_biweight_unchecked(b) + (b[idx] as f64).ln() - (self.n as f64).ln()
    }

    pub fn fixed_position_biweight(&self, alpha: u8, beta: u8, b: [i64; 4]) -> Result<f64> {
        self.check_sum(b)?;
        Ok(self.ln_fixed_position_biweight_unchecked(alpha, beta, b).exp())
    }

    /// The shared log-factorial table (length `n`).
    pub fn ln_factorial(&self) -> &LnFactorial {
        &self.lf
    }
}

/// Packs a binary word into 64-bit limbs.
fn pack(word: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; word.len().div_ceil(64)];
    for (i, &b) in word.iter().enumerate() {
        if b != 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Weight histogram of the span of `basis` by Gray-code enumeration.
pub fn enumerate_weights(basis: &[Vec<u8>], n: usize) -> Vec<u64> {
    assert!(basis.len() < 40, "span too large to enumerate");
    let limbs = n.div_ceil(64).max(1);
    let packed: Vec<Vec<u64>> = basis.iter().map(|b| pack(b)).collect();
    let mut word = vec![0u64; limbs];
    let mut hist = vec![0u64; n + 1];
    hist[0] = 1;
    for g in 1u64..(1u64 << basis.len()) {
        let row = &packed[g.trailing_zeros() as usize];
        let mut w = 0u32;
        for (x, r) in word.iter_mut().zip(row) {
            *x ^= r;
            w += x.count_ones();
        }
        hist[w as usize] += 1;
    }
    hist
}

fn shifted_basis(poly: &[u8], count: usize, n: usize) -> Vec<Vec<u8>> {
    (0..count)
        .map(|i| {
            let mut row = vec![0u8; n];
            row[i..i + poly.len()].copy_from_slice(poly);
            row
        })
        .collect()
}

/// Exact weight distribution of a cyclic code by enumerating the code or
/// (through MacWilliams) its dual, whichever is smaller.
pub fn plain_exact_distribution(code: &ComponentCode) -> Vec<BigUint> {
    assert_eq!(code.variant(), Variant::Plain, "exact enumeration expects a cyclic code");
    let n = code.n();
    let k = code.k();
    if k <= n - k {
        let basis = shifted_basis(code.generator(), k, n);
        enumerate_weights(&basis, n).into_iter().map(BigUint::from).collect()
    } else {
        // The code generated by h(x) is the reversed dual; same weights.
        let h = code.parity_check_polynomial();
        let basis = shifted_basis(&h, n - k, n);
        let dual: Vec<BigUint> = enumerate_weights(&basis, n).into_iter().map(BigUint::from).collect();
        macwilliams(&dual, n - k).expect("dual enumeration yields an integral transform")
    }
}

/// MacWilliams transform: weight distribution of the dual of a linear code
/// of dimension `dim` with distribution `weights` (length `n + 1`).
pub fn macwilliams(weights: &[BigUint], dim: usize) -> Result<Vec<BigUint>> {
    let n = weights.len() - 1;
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, wi) in weights.iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        // Krawtchouk K_j(i): coefficients of (1 - z)^i (1 + z)^(n - i).
        let mut poly = vec![BigInt::zero(); n + 1];
        poly[0] = BigInt::one();
        let mut deg = 0;
        for step in 0..n {
            let minus = step < i;
            for j in (1..=deg + 1).rev() {
                let prev = poly[j - 1].clone();
                if minus {
                    poly[j] -= prev;
                } else {
                    poly[j] += prev;
                }
            }
            deg += 1;
        }
        let wi = BigInt::from(wi.clone());
        for (a, k) in acc.iter_mut().zip(&poly) {
            *a += &wi * k;
        }
    }
    let size = BigInt::one() << dim;
    acc.into_iter()
        .map(|a| {
            if (&a % &size) != BigInt::zero() || a < BigInt::zero() {
                return Err(Error::Config("MacWilliams transform is not integral".into()));
            }
            Ok((a / &size).to_biguint().expect("nonnegative"))
        })
        .collect()
}

/// Exact biweight counts of a small code by enumerating all ordered pairs.
/// With `position = Some((k, alpha, beta))`, only pairs with `c1[k] = alpha`
/// and `c2[k] = beta` are counted.
pub fn exact_biweight(code: &ComponentCode, position: Option<(usize, u8, u8)>) -> HashMap<[usize; 4], u64> {
    let cws = code.codewords();
    let mut out = HashMap::new();
    for c1 in &cws {
        for c2 in &cws {
            if let Some((k, a, b)) = position {
                if c1[k] != a || c2[k] != b {
                    continue;
                }
            }
            let mut key = [0usize; 4];
            for (&x, &y) in c1.iter().zip(c2) {
                key[match (x, y) {
                    (1, 1) => 0,
                    (1, 0) => 1,
                    (0, 1) => 2,
                    _ => 3,
                }] += 1;
            }
            *out.entry(key).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_u64(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn direct_hist(code: &ComponentCode) -> Vec<u64> {
        let mut h = vec![0u64; code.n() + 1];
        for c in code.codewords() {
            h[c.iter().filter(|&&b| b == 1).count()] += 1;
        }
        h
    }

    #[test]
    fn hamming_7_4() {
        let w = WeightTables::for_code(&ComponentCode::bch(3, 1).unwrap());
        assert_eq!(w.mode(), WeightMode::Exact);
        assert_eq!(w.counts(), &[1.0, 0.0, 0.0, 7.0, 7.0, 0.0, 0.0, 1.0]);
        let ev = w.even_weight();
        assert_eq!(ev.counts(), &[1.0, 0.0, 0.0, 0.0, 7.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dual_route_matches_direct_enumeration() {
        for (nu, t) in [(4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3)] {
            let code = ComponentCode::bch(nu, t).unwrap();
            let n = code.n();
            let via_dual = {
                let h = code.parity_check_polynomial();
                let dual = enumerate_weights(&shifted_basis(&h, n - code.k(), n), n);
                macwilliams(&dual.into_iter().map(BigUint::from).collect::<Vec<_>>(), n - code.k()).unwrap()
            };
            let direct = enumerate_weights(&shifted_basis(code.generator(), code.k(), n), n);
            assert_eq!(as_u64(&via_dual), direct, "nu={nu} t={t}");
            assert_eq!(direct.iter().sum::<u64>(), 1 << code.k());
        }
    }

    #[test]
    fn macwilliams_round_trip() {
        let code = ComponentCode::bch(6, 2).unwrap();
        let a = plain_exact_distribution(&code);
        let b = macwilliams(&a, code.k()).unwrap();
        let back = macwilliams(&b, code.n() - code.k()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn derived_variants_match_enumeration() {
        for variant in [Variant::EvenWeight, Variant::Shortened, Variant::ShortenedEven] {
            let code = ComponentCode::bch(4, 2).unwrap().derive(variant).unwrap();
            let w = WeightTables::for_code(&code);
            let expected: Vec<f64> = direct_hist(&code).into_iter().map(|x| x as f64).collect();
            assert_eq!(w.counts(), &expected[..], "{variant}");
            assert_eq!(w.n(), code.n());
            assert_eq!(w.counts().iter().sum::<f64>(), (1u64 << code.k()) as f64);
        }
    }

    #[test]
    fn minimum_distance_of_bch_family() {
        for (nu, t) in [(4, 2), (5, 3), (6, 3), (6, 4)] {
            let code = ComponentCode::bch(nu, t).unwrap();
            let w = WeightTables::for_code(&code);
            assert!(w.min_distance().unwrap() >= code.d_des());
        }
    }

    #[test]
    fn binomial_mode_for_long_code() {
        let w = WeightTables::binomial(511, 9, 3);
        let lf = LnFactorial::new(511);
        assert_eq!(w.ln_a(0), 0.0);
        assert_eq!(w.ln_a(511), 0.0);
        for b in [1usize, 6, 505, 510] {
            assert_eq!(w.a(b), 0.0);
        }
        for b in [7usize, 100, 255, 504] {
            let expected = lf.ln_binom(511, b as i64) - 27.0 * std::f64::consts::LN_2;
            assert!((w.ln_a(b as i64) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_position_matches_enumeration_on_cyclic_code() {
        let code = ComponentCode::bch(4, 2).unwrap();
        let w = WeightTables::for_code(&code);
        let cws = code.codewords();
        for k in [0usize, 5, 14] {
            for alpha in [0u8, 1] {
                for b in 0..=code.n() {
                    let count = cws
                        .iter()
                        .filter(|c| c[k] == alpha && c.iter().filter(|&&x| x == 1).count() == b)
                        .count() as f64;
                    assert!((w.fixed_position(alpha, b) - count).abs() < 1e-9);
                }
            }
        }
        assert_eq!(w.fixed_position(1, 0), 0.0);
    }

    #[test]
    fn biweight_identities() {
        let code = ComponentCode::bch(5, 2).unwrap();
        let w = WeightTables::for_code(&code);
        let n = code.n();
        for b1 in 0..=n {
            let b = w.biweight(b1, 0, 0, n - b1).unwrap();
            assert!((b - w.a(b1)).abs() <= 1e-9 * w.a(b1).max(1.0));
            let z = w.biweight(0, 0, b1, n - b1).unwrap();
            assert!((z - w.a(b1)).abs() <= 1e-9 * w.a(b1).max(1.0));
            let f = w.fixed_position_biweight(1, 1, [b1 as i64, 0, 0, (n - b1) as i64]).unwrap();
            assert!((f - w.fixed_position(1, b1)).abs() <= 1e-9 * w.a(b1).max(1.0));
        }
        assert!(matches!(w.biweight(3, 3, 3, 3), Err(Error::IndexSum { .. })));
    }

    #[test]
    fn fixed_position_biweight_partitions() {
        let code = ComponentCode::bch(4, 2).unwrap();
        let w = WeightTables::for_code(&code);
        for b in [[5i64, 3, 3, 4], [2, 6, 4, 3], [0, 5, 6, 4]] {
            let total: f64 = [(1, 1), (1, 0), (0, 1), (0, 0)]
                .iter()
                .map(|&(a, c)| w.fixed_position_biweight(a, c, b).unwrap())
                .sum();
            let full = w.ln_biweight(b).unwrap().exp();
            assert!((total - full).abs() <= 1e-9 * full.max(1.0));
        }
    }

    #[test]
    fn exact_fixed_position_biweight_on_cyclic_code() {
        let code = ComponentCode::bch(4, 2).unwrap();
        let full = exact_biweight(&code, None);
        assert_eq!(full.values().sum::<u64>(), 1 << 14);
        for (k, a, b) in [(0usize, 1u8, 1u8), (7, 1, 0), (3, 0, 1), (11, 0, 0)] {
            let part = exact_biweight(&code, Some((k, a, b)));
            let idx = match (a, b) {
                (1, 1) => 0,
                (1, 0) => 1,
                (0, 1) => 2,
                _ => 3,
            };
            for (key, &count) in &full {
                let scaled = count as f64 * key[idx] as f64 / 15.0;
                let got = *part.get(key).unwrap_or(&0) as f64;
                assert!((scaled - got).abs() < 1e-9, "{key:?}");
            }
        }
    }

    #[test]
    fn biweight_approximation_exact_on_trivial_branch() {
        let code = ComponentCode::bch(4, 2).unwrap();
        let w = WeightTables::for_code(&code);
        let exact = exact_biweight(&code, None);
        for (key, &count) in &exact {
            let k = key.map(|x| x as i64);
            if w.biweight_case(k) == BiweightCase::Direct {
                let approx = w.ln_biweight(k).unwrap().exp();
                assert!((approx - count as f64).abs() < 1e-9, "{key:?}");
            }
        }
    }
}
