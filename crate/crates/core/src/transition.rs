//! Decoder transition probabilities `T(alpha -> beta | D', E')` for EaED+ and
//! EaED, computed by configuration counting.
//!
//! Position `k` of the component word carries the symbol `alpha`; the other
//! `n - 1` positions hold `D'` ones and `E'` erasures. Only the four
//! off-diagonal transitions `0->1`, `?->1`, `1->0`, `?->0` are stored; the
//! diagonal follows from row completeness and `0->?`, `1->?` never occur.
//!
//! For EaED, the M4/M5 configurations are enumerated in lexicographic order
//! of the twelve bounded coefficients (a1, a2, a3, b1, b2, b3, c1, c2, c3,
//! g1, g2, g3), then the split `r` of the remaining erasures.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bch::{CodeDescriptor, ComponentCode};
use crate::distributions::{exact_biweight, WeightMode, WeightPolicy, WeightTables};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, LnFactorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decoder {
    /// Error-and-erasure decoding with a random fill.
    Eaed,
    /// Decoding restricted to the spheres `2 d + E < d_des`.
    EaedPlus,
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decoder::Eaed => "eaed",
            Decoder::EaedPlus => "eaed-plus",
        })
    }
}

impl FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eaed" => Ok(Decoder::Eaed),
            "eaed+" | "eaed-plus" | "eaedplus" | "eaed_plus" => Ok(Decoder::EaedPlus),
            other => Err(Error::Config(format!("unknown decoder '{other}' (expected eaed or eaed-plus)"))),
        }
    }
}

/// Ternary message symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    Erasure,
    One,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::Erasure, Symbol::One];

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::Erasure => '?',
            Symbol::One => '1',
        }
    }
}

/// Fixed-position biweight counts `ln B_k^{ab}(b11, b10, b01, b00)`, where the
/// configuration includes position `k`.
pub trait BiweightSource: Sync {
    fn ln_fixed(&self, a: u8, b: u8, config: [i64; 4]) -> f64;
    fn label(&self) -> String;
}

impl BiweightSource for WeightTables {
    #[inline]
    fn ln_fixed(&self, a: u8, b: u8, config: [i64; 4]) -> f64 {
        self.ln_fixed_position_biweight_unchecked(a, b, config)
    }

    fn label(&self) -> String {
        "approx".into()
    }
}

/// Exact biweight distribution of a small cyclic code, by pair enumeration.
#[derive(Debug, Clone)]
pub struct ExactBiweight {
    n: usize,
    ln_counts: HashMap<[usize; 4], f64>,
}

impl ExactBiweight {
    pub fn new(code: &ComponentCode) -> Self {
        let ln_counts = exact_biweight(code, None)
            .into_iter()
            .map(|(k, v)| (k, (v as f64).ln()))
            .collect();
        Self { n: code.n(), ln_counts }
    }
}

impl BiweightSource for ExactBiweight {
    fn ln_fixed(&self, a: u8, b: u8, config: [i64; 4]) -> f64 {
        if config.iter().any(|&x| x < 0) {
            return f64::NEG_INFINITY;
        }
        let idx = match (a, b) {
            (1, 1) => 0,
            (1, 0) => 1,
            (0, 1) => 2,
            _ => 3,
        };
        if config[idx] == 0 {
            return f64::NEG_INFINITY;
        }
        let key = config.map(|x| x as usize);
        match self.ln_counts.get(&key) {
            Some(l) => l + (config[idx] as f64).ln() - (self.n as f64).ln(),
            None => f64::NEG_INFINITY,
        }
    }

    fn label(&self) -> String {
        "exact".into()
    }
}

/// Which off-diagonal transition an array holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    ZeroToOne,
    ErasureToOne,
    OneToZero,
    ErasureToZero,
}

impl Slot {
    const ALL: [Slot; 4] = [Slot::ZeroToOne, Slot::ErasureToOne, Slot::OneToZero, Slot::ErasureToZero];

    fn symbols(self) -> (Symbol, Symbol) {
        match self {
            Slot::ZeroToOne => (Symbol::Zero, Symbol::One),
            Slot::ErasureToOne => (Symbol::Erasure, Symbol::One),
            Slot::OneToZero => (Symbol::One, Symbol::Zero),
            Slot::ErasureToZero => (Symbol::Erasure, Symbol::Zero),
        }
    }
}

/// Transition table for one component code and decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    decoder: Decoder,
    n: usize,
    d_des: usize,
    /// `[slot][dp * d_des + ep]`, slots ordered as `Slot::ALL`.
    values: [Vec<f64>; 4],
}

const CACHE_MAGIC: &[u8; 8] = b"EAEDTRT\x01";
const CACHE_VERSION: u32 = 1;

/// Tolerance for rounding noise when checking that probabilities lie in [0, 1].
const RANGE_SLACK: f64 = 1e-12;

impl TransitionTable {
    pub fn decoder(&self) -> Decoder {
        self.decoder
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_des(&self) -> usize {
        self.d_des
    }

    #[inline]
    fn off(&self, slot: usize, dp: usize, ep: usize) -> f64 {
        if ep >= self.d_des || dp + ep >= self.n {
            return 0.0;
        }
        self.values[slot][dp * self.d_des + ep]
    }

    /// `T(from -> to | D', E')`.
    pub fn get(&self, from: Symbol, to: Symbol, dp: usize, ep: usize) -> f64 {
        use Symbol::*;
        match (from, to) {
            (Zero, One) => self.off(0, dp, ep),
            (Erasure, One) => self.off(1, dp, ep),
            (One, Zero) => self.off(2, dp, ep),
            (Erasure, Zero) => self.off(3, dp, ep),
            (Zero, Erasure) | (One, Erasure) => 0.0,
            (Zero, Zero) => 1.0 - self.off(0, dp, ep),
            (One, One) => 1.0 - self.off(2, dp, ep),
            (Erasure, Erasure) => 1.0 - self.off(1, dp, ep) - self.off(3, dp, ep),
        }
    }

    /// The four off-diagonal entries `(0->1, ?->1, 1->0, ?->0)` at one cell.
    #[inline]
    pub fn off_diagonal(&self, dp: usize, ep: usize) -> [f64; 4] {
        [self.off(0, dp, ep), self.off(1, dp, ep), self.off(2, dp, ep), self.off(3, dp, ep)]
    }

    /// Every stored cell as `(from, to, D', E', probability)`, including the
    /// diagonal and the impossible transitions.
    pub fn entries(&self) -> Vec<(Symbol, Symbol, usize, usize, f64)> {
        let mut out = Vec::new();
        for dp in 0..self.n {
            for ep in 0..self.d_des.min(self.n - dp) {
                for from in Symbol::ALL {
                    for to in Symbol::ALL {
                        out.push((from, to, dp, ep, self.get(from, to, dp, ep)));
                    }
                }
            }
        }
        out
    }

    /// Builds the table for `decoder`, using the biweight approximation of
    /// `weights` for EaED.
    pub fn build(code: &ComponentCode, decoder: Decoder, weights: &WeightTables) -> Result<Self> {
        match decoder {
            Decoder::EaedPlus => Self::eaed_plus(code, weights),
            Decoder::Eaed => Self::eaed(code, weights, weights),
        }
    }

    fn assemble(
        code: &ComponentCode,
        decoder: Decoder,
        cell: impl Fn(Slot, usize, usize) -> f64 + Sync,
    ) -> Result<Self> {
        let n = code.n();
        let d_des = code.d_des();
        let rows: Vec<Vec<[f64; 4]>> = (0..n)
            .into_par_iter()
            .map(|dp| {
                (0..d_des)
                    .map(|ep| {
                        let mut v = [0.0; 4];
                        if dp + ep < n {
                            for (i, slot) in Slot::ALL.iter().enumerate() {
                                v[i] = cell(*slot, dp, ep);
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut values: [Vec<f64>; 4] = Default::default();
        for v in values.iter_mut() {
            *v = vec![0.0; n * d_des];
        }
        for (dp, row) in rows.iter().enumerate() {
            for (ep, cellv) in row.iter().enumerate() {
                for i in 0..4 {
                    values[i][dp * d_des + ep] = cellv[i];
                }
            }
        }
        let table = Self {
            decoder,
            n,
            d_des,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    /// Every probability (diagonal included) must be finite and in [0, 1].
    pub fn validate(&self) -> Result<()> {
        for dp in 0..self.n {
            for ep in 0..self.d_des.min(self.n - dp) {
                for from in Symbol::ALL {
                    for to in Symbol::ALL {
                        let v = self.get(from, to, dp, ep);
                        if !v.is_finite() || !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
                            return Err(Error::TableOutOfRange {
                                from: from.as_char(),
                                to: to.as_char(),
                                dp,
                                ep,
                                value: v,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// EaED+ transition probabilities.
    pub fn eaed_plus(code: &ComponentCode, weights: &WeightTables) -> Result<Self> {
        let n = code.n() as i64;
        let d_des = code.d_des() as i64;
        let lf = LnFactorial::new(code.n());
        Self::assemble(code, Decoder::EaedPlus, |slot, dp, ep| {
            let (alpha, beta) = slot.symbols();
            let (dp, ep) = (dp as i64, ep as i64);
            let a_erased = (alpha == Symbol::Erasure) as i64;
            if ep + a_erased >= d_des {
                return 0.0;
            }
            let beta_bit = (beta == Symbol::One) as u8;
            let delta_max = (d_des - ep - 1 - a_erased).div_euclid(2) - (1 - a_erased);
            let ln_omega = lf.ln_multinomial(n - 1, dp, ep);
            let mut sum = CompensatedSum::new();
            for delta in 0..=delta_max {
                for b10 in 0..=delta {
                    for b1q in 0..=ep {
                        let b1 = dp - delta + b1q + 2 * b10;
                        if b1 < 0 || b1 > n - 1 {
                            continue;
                        }
                        let la = weights.ln_fixed_position(beta_bit, b1 + beta_bit as i64);
                        if la == f64::NEG_INFINITY {
                            continue;
                        }
                        let theta = lf.ln_multinomial(b1, b1q, b10) + lf.ln_multinomial(n - 1 - b1, delta - b10, ep - b1q);
                        if theta == f64::NEG_INFINITY {
                            continue;
                        }
                        sum.add((la + theta - ln_omega).exp());
                    }
                }
            }
            sum.value()
        })
    }

    /// EaED transition probabilities with weight counts from `weights` and
    /// pair counts from `biweight`.
    pub fn eaed(code: &ComponentCode, weights: &WeightTables, biweight: &dyn BiweightSource) -> Result<Self> {
        let ctx = EaedContext::new(code, weights, biweight);
        Self::assemble(code, Decoder::Eaed, |slot, dp, ep| ctx.cell(slot, dp, ep))
    }

    /// Cache key: a digest of everything the table depends on.
    pub fn cache_key(descriptor: &CodeDescriptor, decoder: Decoder, weight_mode: WeightMode, biweight: &str) -> [u8; 32] {
        let text = format!("{descriptor}|{decoder}|{weight_mode:?}|{biweight}|v{CACHE_VERSION}");
        Sha256::digest(text.as_bytes()).into()
    }

    pub fn save(&self, path: &Path, key: &[u8; 32]) -> Result<()> {
        let mut buf = Vec::with_capacity(64 + 32 * self.values[0].len());
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(key);
        buf.push(match self.decoder {
            Decoder::Eaed => 0,
            Decoder::EaedPlus => 1,
        });
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        buf.extend_from_slice(&(self.d_des as u32).to_le_bytes());
        for v in &self.values {
            for x in v {
                buf.extend_from_slice(&x.to_le_bytes());
            }
        }
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(&buf)?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path, key: &[u8; 32]) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        let bad = |m: &str| Error::Cache(format!("{}: {m}", path.display()));
        if buf.len() < 8 + 4 + 32 + 1 + 8 || &buf[..8] != CACHE_MAGIC {
            return Err(bad("not a transition-table cache"));
        }
        let version = u32::from_le_bytes(buf[8..12].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(bad("unsupported cache version"));
        }
        if &buf[12..44] != key {
            return Err(bad("cache key mismatch"));
        }
        let decoder = match buf[44] {
            0 => Decoder::Eaed,
            1 => Decoder::EaedPlus,
            _ => return Err(bad("unknown decoder tag")),
        };
        let n = u32::from_le_bytes(buf[45..49].try_into().unwrap()) as usize;
        let d_des = u32::from_le_bytes(buf[49..53].try_into().unwrap()) as usize;
        let len = n * d_des;
        if buf.len() != 53 + 4 * len * 8 {
            return Err(bad("truncated cache file"));
        }
        let mut values: [Vec<f64>; 4] = Default::default();
        for (i, v) in values.iter_mut().enumerate() {
            let start = 53 + i * len * 8;
            *v = buf[start..start + len * 8]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
        }
        let table = Self {
            decoder,
            n,
            d_des,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    /// Loads the table from `cache_dir` when present and valid, otherwise
    /// builds it (with the biweight approximation) and stores it there.
    pub fn load_or_build(
        code: &ComponentCode,
        decoder: Decoder,
        policy: WeightPolicy,
        cache_dir: Option<&Path>,
    ) -> Result<Self> {
        let weights = WeightTables::for_code_with(code, policy);
        let key = Self::cache_key(&code.descriptor(), decoder, weights.mode(), "approx");
        let path = cache_dir.map(|d| cache_path(d, &code.descriptor(), decoder, &key));
        if let Some(p) = &path {
            if p.exists() {
                if let Ok(t) = Self::load(p, &key) {
                    return Ok(t);
                }
            }
        }
        let table = Self::build(code, decoder, &weights)?;
        if let Some(p) = &path {
            table.save(p, &key)?;
        }
        Ok(table)
    }
}

pub fn cache_path(dir: &Path, descriptor: &CodeDescriptor, decoder: Decoder, key: &[u8; 32]) -> PathBuf {
    let short: String = key[..6].iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{descriptor}-{decoder}-{short}.ttab"))
}

/// The twelve bounded configuration coefficients of a `(c1, c2, e2, e1)`
/// tuple; the letter names the `(c1, c2)` class and `e1 e2` is shown below.
#[derive(Debug, Clone, Copy)]
struct Bounded {
    // class 11: z00, z01, z10
    a: [i64; 3],
    // class 10: z00, z11, z01
    b: [i64; 3],
    // class 01: z11, z00, z10
    c: [i64; 3],
    // class 00: z11, z10, z01
    g: [i64; 3],
    ln_fact: f64,
    corr: f64,
}

impl Bounded {
    fn d1(&self) -> i64 {
        self.a[0] + self.a[1] + self.b[0] + self.b[2] + self.c[0] + self.c[2] + self.g[0] + self.g[1]
    }

    fn d2(&self) -> i64 {
        self.a[0] + self.a[2] + self.b[1] + self.b[2] + self.c[1] + self.c[2] + self.g[0] + self.g[2]
    }

    /// Ones common to both error words outside the free class-11 part.
    fn ones(&self) -> i64 {
        self.b[1] + self.c[0] + self.g[0]
    }

    fn erasures(&self) -> i64 {
        self.a[1] + self.a[2] + self.b[2] + self.c[2] + self.g[1] + self.g[2]
    }
}

struct EaedContext<'a> {
    n: i64,
    t: i64,
    d_des: i64,
    lf: LnFactorial,
    weights: &'a WeightTables,
    biweight: &'a dyn BiweightSource,
}

fn for_each_bounded(limit1: i64, limit2: i64, mut f: impl FnMut([i64; 12])) {
    if limit1 < 0 || limit2 < 0 {
        return;
    }
    // Cost of each variable in (d1, d2), same order as the flattened array.
    const COST: [(i64, i64); 12] = [
        (1, 1), (1, 0), (0, 1), // a
        (1, 0), (0, 1), (1, 1), // b
        (1, 0), (0, 1), (1, 1), // c
        (1, 1), (1, 0), (0, 1), // g
    ];
    fn rec(i: usize, d1: i64, d2: i64, l1: i64, l2: i64, cur: &mut [i64; 12], f: &mut dyn FnMut([i64; 12])) {
        if i == 12 {
            f(*cur);
            return;
        }
        let (c1, c2) = COST[i];
        let mut v = 0;
        loop {
            let (n1, n2) = (d1 + c1 * v, d2 + c2 * v);
            if n1 > l1 || n2 > l2 {
                break;
            }
            cur[i] = v;
            rec(i + 1, n1, n2, l1, l2, cur, f);
            v += 1;
        }
        cur[i] = 0;
    }
    let mut cur = [0i64; 12];
    rec(0, 0, 0, limit1, limit2, &mut cur, &mut f);
}

impl<'a> EaedContext<'a> {
    fn new(code: &ComponentCode, weights: &'a WeightTables, biweight: &'a dyn BiweightSource) -> Self {
        Self {
            n: code.n() as i64,
            t: code.t() as i64,
            d_des: code.d_des() as i64,
            lf: LnFactorial::new(code.n()),
            weights,
            biweight,
        }
    }

    fn cell(&self, slot: Slot, dp: usize, ep: usize) -> f64 {
        let (alpha, beta) = slot.symbols();
        let a_erased = (alpha == Symbol::Erasure) as i64;
        let (dp, ep) = (dp as i64, ep as i64);
        let e_total = ep + a_erased;
        if e_total >= self.d_des {
            return 0.0;
        }
        let beta_bit = (beta == Symbol::One) as u8;
        let pairs: &[(u8, u8)] = match alpha {
            Symbol::Zero => &[(0, 0)],
            Symbol::One => &[(1, 1)],
            Symbol::Erasure => &[(1, 0), (0, 1)],
        };
        let ln_omega_p =
            self.lf.ln_multinomial(self.n - 1, dp, ep) + e_total as f64 * std::f64::consts::LN_2;
        let alpha_bit = match alpha {
            Symbol::Zero => Some(0u8),
            Symbol::One => Some(1u8),
            Symbol::Erasure => None,
        };
        let mut total = CompensatedSum::new();
        for &(a1, a2) in pairs {
            let m3 = self.m3(a1, beta_bit, dp, ep, ln_omega_p);
            let m4 = self.m45(a1, a2, beta_bit, beta_bit, alpha_bit, false, dp, ep, ln_omega_p);
            let m5 = self.m45(a1, a2, beta_bit, 1 - beta_bit, alpha_bit, true, dp, ep, ln_omega_p);
            total.add(2.0 * m3);
            total.add(-m4);
            total.add(-2.0 * m5);
        }
        total.value()
    }

    /// `|M3| / |Omega_p|`: triples `(c, e1, e2)` with `e1` in the radius-t
    /// sphere of `c` (c in C_k^beta).
    fn m3(&self, a1: u8, beta: u8, dp: i64, ep: i64, ln_norm: f64) -> f64 {
        let lf = &self.lf;
        let n1 = self.n - 1;
        let budget = self.t - (a1 != beta) as i64;
        let mut sum = CompensatedSum::new();
        if budget < 0 {
            return 0.0;
        }
        // Coefficients b_{c e1 e2}: x = c = 1, y = c = 0.
        for x00 in 0..=budget {
            for x01 in 0..=(budget - x00) {
                for y11 in 0..=(budget - x00 - x01) {
                    for y10 in 0..=(budget - x00 - x01 - y11) {
                        let x11 = dp - y11;
                        let rest = ep - x01 - y10;
                        if x11 < 0 || rest < 0 {
                            continue;
                        }
                        for x10 in 0..=rest {
                            let y01 = rest - x10;
                            let b1 = x11 + x10 + x01 + x00;
                            let b0 = n1 - b1;
                            let y00 = b0 - y11 - y10 - y01;
                            if y00 < 0 {
                                continue;
                            }
                            let la = self.weights.ln_fixed_position(beta, b1 + beta as i64);
                            if la == f64::NEG_INFINITY {
                                continue;
                            }
                            let term = la
                                + lf.ln_multinomial_parts(b1, &[x11, x10, x01, x00])
                                + lf.ln_multinomial_parts(b0, &[y11, y10, y01, y00])
                                - ln_norm;
                            sum.add(term.exp());
                        }
                    }
                }
            }
        }
        sum.value()
    }

    /// `|M4| / |Omega_p|` (`beta2 = beta1`) or `|M5| / |Omega_p|`
    /// (`beta2 = !beta1`, with the distance preference and the tie weight).
    #[allow(clippy::too_many_arguments)]
    fn m45(
        &self,
        a1: u8,
        a2: u8,
        beta1: u8,
        beta2: u8,
        alpha: Option<u8>,
        m5: bool,
        dp: i64,
        ep: i64,
        ln_norm: f64,
    ) -> f64 {
        let lf = &self.lf;
        let n1 = self.n - 1;
        let l1 = self.t - (a1 != beta1) as i64;
        let l2 = self.t - (a2 != beta2) as i64;
        let ind_c1 = alpha.is_some_and(|a| a != beta1) as i64;
        let ind_c2 = alpha.is_some_and(|a| a != beta2) as i64;
        let mut sum = CompensatedSum::new();
        for_each_bounded(l1, l2, |v| {
            let bd = Bounded {
                a: [v[0], v[1], v[2]],
                b: [v[3], v[4], v[5]],
                c: [v[6], v[7], v[8]],
                g: [v[9], v[10], v[11]],
                ln_fact: v.iter().map(|&x| lf.ln_fact(x as usize)).sum(),
                corr: 1.0,
            };
            debug_assert!(bd.d1() <= l1 && bd.d2() <= l2);
            let mut corr = bd.corr;
            if m5 {
                // Distances outside the erasures of the ternary word.
                let dc1 = bd.a[0] + bd.b[0] + bd.c[0] + bd.g[0] + ind_c1;
                let dc2 = bd.a[0] + bd.b[1] + bd.c[1] + bd.g[0] + ind_c2;
                if dc2 > dc1 {
                    return;
                }
                if dc2 == dc1 {
                    corr = 0.5;
                }
            }
            let z11 = dp - bd.ones();
            let r_total = ep - bd.erasures();
            if z11 < 0 || r_total < 0 {
                return;
            }
            let s11 = z11 + bd.a.iter().sum::<i64>();
            let fixed10: i64 = bd.b.iter().sum();
            let fixed01: i64 = bd.c.iter().sum();
            let fixed00: i64 = bd.g.iter().sum();
            for r in 0..=r_total {
                let s10 = fixed10 + r;
                let s01 = fixed01 + (r_total - r);
                let s00 = n1 - s11 - s10 - s01;
                let z00 = s00 - fixed00;
                if z00 < 0 {
                    continue;
                }
                let mut cfg = [s11, s10, s01, s00];
                cfg[match (beta1, beta2) {
                    (1, 1) => 0,
                    (1, 0) => 1,
                    (0, 1) => 2,
                    _ => 3,
                }] += 1;
                let lb = self.biweight.ln_fixed(beta1, beta2, cfg);
                if lb == f64::NEG_INFINITY {
                    continue;
                }
                let ways = lf.ln_fact(s11 as usize)
                    + lf.ln_fact(s10 as usize)
                    + lf.ln_fact(s01 as usize)
                    + lf.ln_fact(s00 as usize)
                    - lf.ln_fact(z11 as usize)
                    - lf.ln_fact(r as usize)
                    - lf.ln_fact((r_total - r) as usize)
                    - lf.ln_fact(z00 as usize)
                    - bd.ln_fact;
                sum.add(corr * (lb + ways - ln_norm).exp());
            }
        });
        sum.value()
    }
}
