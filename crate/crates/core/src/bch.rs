//! Binary BCH component codes (plain, even-weight subcode, shortened) with a
//! bounded-distance decoder.
//!
//! Word bit `i` is the coefficient of `x^i`. Systematic encoding places the
//! message in the high-degree positions. Shortening deletes the parent
//! coordinate `x^(n-1)`, which is a message position, so a shortened word of
//! length `n - 1` is the parent word with that coordinate forced to zero.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::Gf2mField;

/// Largest supported correction radius.
pub const MAX_T: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Plain,
    EvenWeight,
    Shortened,
    ShortenedEven,
}

impl Variant {
    pub fn is_even(self) -> bool {
        matches!(self, Variant::EvenWeight | Variant::ShortenedEven)
    }

    pub fn is_shortened(self) -> bool {
        matches!(self, Variant::Shortened | Variant::ShortenedEven)
    }

    fn from_flags(even: bool, shortened: bool) -> Self {
        match (even, shortened) {
            (false, false) => Variant::Plain,
            (true, false) => Variant::EvenWeight,
            (false, true) => Variant::Shortened,
            (true, true) => Variant::ShortenedEven,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::EvenWeight => "even",
            Variant::Shortened => "shortened",
            Variant::ShortenedEven => "shortened-even",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" | "bch" => Ok(Variant::Plain),
            "even" | "even-weight" | "ev" => Ok(Variant::EvenWeight),
            "shortened" | "short" | "sh" => Ok(Variant::Shortened),
            "shortened-even" | "short-even" | "even-shortened" | "sh-ev" => {
                Ok(Variant::ShortenedEven)
            }
            other => Err(Error::InvalidVariant(format!("unknown code variant '{other}'"))),
        }
    }
}

/// Human-readable identity of a component code: extension degree, radius and
/// variant. Parses from strings such as `nu9t3`, `nu6 t4 shortened` or
/// `nu=9,t=3,variant=even`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub nu: u32,
    pub t: usize,
    #[serde(default = "default_variant")]
    pub variant: Variant,
}

fn default_variant() -> Variant {
    Variant::Plain
}

impl CodeDescriptor {
    pub fn new(nu: u32, t: usize, variant: Variant) -> Self {
        Self { nu, t, variant }
    }

    pub fn build(&self) -> Result<ComponentCode> {
        ComponentCode::bch(self.nu, self.t)?.derive(self.variant)
    }
}

impl fmt::Display for CodeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu{}t{}", self.nu, self.t)?;
        if self.variant != Variant::Plain {
            write!(f, "-{}", self.variant)?;
        }
        Ok(())
    }
}

impl FromStr for CodeDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse code descriptor '{s}'"));
        let mut nu = None;
        let mut t = None;
        let mut variant = Variant::Plain;
        let lowered = s.to_ascii_lowercase();
        for raw in lowered.split(|c: char| c.is_whitespace() || c == ',' || c == ';') {
            let tok = raw.trim();
            if tok.is_empty() {
                continue;
            }
            if let Some(v) = tok.strip_prefix("variant=") {
                variant = v.parse()?;
                continue;
            }
            // nu9t3, nu9t3-even, nu=9, t=3, nu9, t3
            let (head, tail) = match tok.find('-') {
                Some(i) if tok.starts_with("nu") || tok.starts_with('t') => (&tok[..i], Some(&tok[i + 1..])),
                _ => (tok, None),
            };
            if let Some(rest) = head.strip_prefix("nu") {
                let rest = rest.trim_start_matches('=');
                match rest.find('t') {
                    Some(i) => {
                        nu = Some(rest[..i].parse().map_err(|_| bad())?);
                        t = Some(rest[i + 1..].trim_start_matches('=').parse().map_err(|_| bad())?);
                    }
                    None => nu = Some(rest.parse().map_err(|_| bad())?),
                }
            } else if let Some(rest) = head.strip_prefix('t') {
                t = Some(rest.trim_start_matches('=').parse().map_err(|_| bad())?);
            } else {
                variant = head.parse()?;
            }
            if let Some(v) = tail {
                variant = v.parse()?;
            }
        }
        Ok(Self {
            nu: nu.ok_or_else(bad)?,
            t: t.ok_or_else(bad)?,
            variant,
        })
    }
}

/// A BCH-family component code with its bounded-distance decoder.
#[derive(Debug, Clone)]
pub struct ComponentCode {
    field: Arc<Gf2mField>,
    descriptor: CodeDescriptor,
    n: usize,
    k: usize,
    t: usize,
    d_des: usize,
    parent_n: usize,
    /// Generator of the cyclic (unshortened) code, including `(x + 1)` for the
    /// even-weight subcode.
    generator: Vec<u8>,
}

/// Error positions found by the decoder (at most `MAX_T`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorPositions {
    pos: [u32; MAX_T],
    len: u8,
}

impl ErrorPositions {
    pub fn as_slice(&self) -> &[u32] {
        &self.pos[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

fn poly_mul_gf2(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= y;
        }
    }
    out
}

/// Remainder of `num` modulo the monic `den` over GF(2).
fn poly_rem_gf2(num: &mut [u8], den: &[u8]) {
    let dd = den.len() - 1;
    for i in (dd..num.len()).rev() {
        if num[i] != 0 {
            for (j, &c) in den.iter().enumerate() {
                num[i - dd + j] ^= c;
            }
        }
    }
}

impl ComponentCode {
    /// Narrow-sense primitive `(2^nu - 1, k, t)` BCH code.
    pub fn bch(nu: u32, t: usize) -> Result<Self> {
        let field = Gf2mField::new(nu)?;
        let n = field.order();
        if t == 0 || t > MAX_T || 2 * t > n {
            return Err(Error::InvalidRadius { nu, t });
        }
        let mut used = vec![false; n];
        let mut generator = vec![1u8];
        for i in (1..2 * t).step_by(2) {
            if used[i] {
                continue;
            }
            for j in field.cyclotomic_coset(i) {
                used[j] = true;
            }
            generator = poly_mul_gf2(&generator, &field.minimal_polynomial(i));
        }
        // Even powers alpha^(2j) share cosets with alpha^j, so roots 1..2t are covered.
        let deg = generator.len() - 1;
        if deg >= n {
            return Err(Error::InvalidRadius { nu, t });
        }
        Ok(Self {
            field: Arc::new(field),
            descriptor: CodeDescriptor::new(nu, t, Variant::Plain),
            n,
            k: n - deg,
            t,
            d_des: 2 * t + 1,
            parent_n: n,
            generator,
        })
    }

    /// Derives the even-weight subcode and/or the once-shortened code.
    /// Flags already present are kept; shortening twice is rejected.
    pub fn derive(&self, target: Variant) -> Result<Self> {
        let cur = self.descriptor.variant;
        if cur.is_shortened() && target.is_shortened() {
            return Err(Error::InvalidVariant(
                "double shortening is not supported (only a single shortened coordinate)".into(),
            ));
        }
        let make_even = target.is_even() && !cur.is_even();
        let make_short = target.is_shortened();
        let mut out = self.clone();
        if make_even {
            if out.k <= 1 {
                return Err(Error::InvalidVariant("even-weight subcode would be empty".into()));
            }
            out.generator = poly_mul_gf2(&out.generator, &[1, 1]);
            out.k -= 1;
            out.d_des = 2 * out.t + 2;
        }
        if make_short {
            if out.k <= 1 {
                return Err(Error::InvalidVariant("shortened code would be empty".into()));
            }
            out.n -= 1;
            out.k -= 1;
        }
        out.descriptor.variant = Variant::from_flags(cur.is_even() || make_even, cur.is_shortened() || make_short);
        Ok(out)
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        self.descriptor
    }

    pub fn variant(&self) -> Variant {
        self.descriptor.variant
    }

    pub fn field(&self) -> &Gf2mField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d_des(&self) -> usize {
        self.d_des
    }

    /// Length of the cyclic code this one is derived from (`2^nu - 1`).
    pub fn parent_n(&self) -> usize {
        self.parent_n
    }

    /// Generator polynomial of the cyclic parent (low to high coefficients).
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    /// Dimension of the cyclic parent (before shortening).
    pub fn parent_k(&self) -> usize {
        self.parent_n + 1 - self.generator.len()
    }

    /// `h(x) = (x^n - 1) / g(x)` of the cyclic parent.
    pub fn parity_check_polynomial(&self) -> Vec<u8> {
        let n = self.parent_n;
        let g = &self.generator;
        let dg = g.len() - 1;
        let mut rem = vec![0u8; n + 1];
        rem[0] = 1;
        rem[n] = 1;
        let mut q = vec![0u8; n - dg + 1];
        for i in (dg..=n).rev() {
            if rem[i] != 0 {
                q[i - dg] = 1;
                for (j, &c) in g.iter().enumerate() {
                    rem[i - dg + j] ^= c;
                }
            }
        }
        debug_assert!(rem.iter().all(|&c| c == 0));
        q
    }

    /// Systematic encoder: message bits end up in the high-degree positions.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        let np = self.parent_n;
        let r = self.generator.len() - 1;
        let mut word = vec![0u8; np];
        word[r..r + self.k].copy_from_slice(message);
        let mut rem = word.clone();
        poly_rem_gf2(&mut rem, &self.generator);
        word[..r].copy_from_slice(&rem[..r]);
        word.truncate(self.n);
        Ok(word)
    }

    /// Odd syndromes `S_1, S_3, ..., S_(2t-1)` of a binary word.
    fn odd_syndromes(&self, y: &[u8], out: &mut [u16; MAX_T]) {
        let order = self.field.order();
        out[..self.t].fill(0);
        for (i, &b) in y.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (s, j) in out[..self.t].iter_mut().zip((1..2 * self.t).step_by(2)) {
                *s ^= self.field.alpha_pow(((i * j) % order) as i64);
            }
        }
    }

    /// Returns true iff `y` is a codeword.
    pub fn is_codeword(&self, y: &[u8]) -> bool {
        if y.len() != self.n {
            return false;
        }
        let mut s = [0u16; MAX_T];
        self.odd_syndromes(y, &mut s);
        if s[..self.t].iter().any(|&x| x != 0) {
            return false;
        }
        if self.descriptor.variant.is_even() {
            return y.iter().filter(|&&b| b != 0).count() % 2 == 0;
        }
        true
    }

    /// Bounded-distance decoding: the error positions that move `y` to the
    /// unique codeword within Hamming distance `t`, or `None` (FAIL).
    pub fn locate_errors(&self, y: &[u8]) -> Option<ErrorPositions> {
        debug_assert_eq!(y.len(), self.n);
        let f = &*self.field;
        let t = self.t;
        let mut odd = [0u16; MAX_T];
        self.odd_syndromes(y, &mut odd);
        // Full syndrome sequence S_1..S_2t; S_2j = S_j^2 over GF(2^m).
        let mut syn = [0u16; 2 * MAX_T];
        for j in 1..=2 * t {
            syn[j - 1] = if j % 2 == 1 {
                odd[(j - 1) / 2]
            } else {
                let h = syn[j / 2 - 1];
                f.mul(h, h)
            };
        }
        let weight_parity = y.iter().filter(|&&b| b != 0).count() % 2;
        if syn[..2 * t].iter().all(|&s| s == 0) {
            if self.descriptor.variant.is_even() && weight_parity == 1 {
                return None;
            }
            return Some(ErrorPositions {
                pos: [0; MAX_T],
                len: 0,
            });
        }

        // Berlekamp-Massey.
        let mut c = [0u16; 2 * MAX_T + 1];
        let mut b = [0u16; 2 * MAX_T + 1];
        c[0] = 1;
        b[0] = 1;
        let mut l = 0usize;
        let mut m = 1usize;
        let mut bb: u16 = 1;
        for idx in 0..2 * t {
            let mut d = syn[idx];
            for i in 1..=l {
                d ^= f.mul(c[i], syn[idx - i]);
            }
            if d == 0 {
                m += 1;
                continue;
            }
            let coef = f.div(d, bb);
            if 2 * l <= idx {
                let prev = c;
                for i in 0..(2 * MAX_T + 1 - m) {
                    c[i + m] ^= f.mul(coef, b[i]);
                }
                l = idx + 1 - l;
                b = prev;
                bb = d;
                m = 1;
            } else {
                for i in 0..(2 * MAX_T + 1 - m) {
                    c[i + m] ^= f.mul(coef, b[i]);
                }
                m += 1;
            }
        }
        if l > t || l == 0 || c[l] == 0 {
            return None;
        }

        // Chien search over the parent's coordinates.
        let order = f.order();
        let mut log_c = [0usize; MAX_T + 1];
        for j in 1..=l {
            log_c[j] = if c[j] == 0 { usize::MAX } else { f.log(c[j]) };
        }
        let mut found = ErrorPositions {
            pos: [0; MAX_T],
            len: 0,
        };
        for i in 0..self.parent_n {
            let mut s: u16 = 1;
            for j in 1..=l {
                if log_c[j] != usize::MAX {
                    // c_j * alpha^(-i j)
                    let e = (log_c[j] + order - (i * j) % order) % order;
                    s ^= f.alpha_pow(e as i64);
                }
            }
            if s == 0 {
                if i >= self.n {
                    // Error on the shortened (always-zero) coordinate.
                    return None;
                }
                found.pos[found.len as usize] = i as u32;
                found.len += 1;
                if found.len as usize == l {
                    break;
                }
            }
        }
        if found.len as usize != l {
            return None;
        }
        // The located pattern must reproduce every syndrome.
        for (jj, &s) in odd[..t].iter().enumerate() {
            let j = 2 * jj + 1;
            let mut acc = 0u16;
            for &p in found.as_slice() {
                acc ^= f.alpha_pow(((p as usize * j) % order) as i64);
            }
            if acc != s {
                return None;
            }
        }
        if self.descriptor.variant.is_even() && (weight_parity + l) % 2 == 1 {
            return None;
        }
        Some(found)
    }

    /// Decodes in place; returns false (leaving `y` untouched) on FAIL.
    pub fn bdd_decode_in_place(&self, y: &mut [u8]) -> bool {
        match self.locate_errors(y) {
            Some(errs) => {
                for &p in errs.as_slice() {
                    y[p as usize] ^= 1;
                }
                true
            }
            None => false,
        }
    }

    /// Bounded-distance decoder: `Some(c)` iff `d_H(y, c) <= t` for a codeword `c`.
    pub fn bdd_decode(&self, y: &[u8]) -> Result<Option<Vec<u8>>> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let mut w = y.to_vec();
        Ok(self.bdd_decode_in_place(&mut w).then_some(w))
    }

    /// All codewords, in Gray-code order of a generator basis. Intended for
    /// small codes (tests, exact tables); panics when `k > 24`.
    pub fn codewords(&self) -> Vec<Vec<u8>> {
        assert!(self.k <= 24, "refusing to enumerate 2^{} codewords", self.k);
        let basis: Vec<Vec<u8>> = (0..self.k)
            .map(|i| {
                let mut m = vec![0u8; self.k];
                m[i] = 1;
                self.encode(&m).expect("message length")
            })
            .collect();
        let mut word = vec![0u8; self.n];
        let mut out = Vec::with_capacity(1 << self.k);
        out.push(word.clone());
        for g in 1u64..(1u64 << self.k) {
            let bit = g.trailing_zeros() as usize;
            for (w, b) in word.iter_mut().zip(&basis[bit]) {
                *w ^= b;
            }
            out.push(word.clone());
        }
        out
    }
}

/// Hamming distance of two binary words.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn paper_parameter_sets() {
        for (nu, t, n, k) in [(9, 3, 511, 484), (6, 3, 63, 45), (6, 4, 63, 39), (4, 2, 15, 7), (3, 1, 7, 4)] {
            let c = ComponentCode::bch(nu, t).unwrap();
            assert_eq!((c.n(), c.k(), c.t(), c.d_des()), (n, k, t, 2 * t + 1), "nu={nu} t={t}");
        }
    }

    #[test]
    fn derived_variants() {
        let c = ComponentCode::bch(9, 3).unwrap().derive(Variant::EvenWeight).unwrap();
        assert_eq!((c.n(), c.k(), c.t(), c.d_des()), (511, 483, 3, 8));
        let s = ComponentCode::bch(6, 3).unwrap().derive(Variant::Shortened).unwrap();
        assert_eq!((s.n(), s.k(), s.t(), s.d_des()), (62, 44, 3, 7));
        let se = ComponentCode::bch(6, 3)
            .unwrap()
            .derive(Variant::EvenWeight)
            .unwrap()
            .derive(Variant::Shortened)
            .unwrap();
        assert_eq!((se.n(), se.k(), se.t(), se.d_des()), (62, 43, 3, 8));
        assert_eq!(se.variant(), Variant::ShortenedEven);
        assert!(matches!(s.derive(Variant::Shortened), Err(Error::InvalidVariant(_))));
    }

    #[test]
    fn radius_out_of_range() {
        assert!(matches!(ComponentCode::bch(3, 4), Err(Error::InvalidRadius { .. })));
        assert!(matches!(ComponentCode::bch(6, 0), Err(Error::InvalidRadius { .. })));
        assert!(matches!(ComponentCode::bch(20, 2), Err(Error::UnsupportedField(20))));
    }

    #[test]
    fn descriptor_parsing() {
        let d: CodeDescriptor = "nu9t3".parse().unwrap();
        assert_eq!(d, CodeDescriptor::new(9, 3, Variant::Plain));
        let d: CodeDescriptor = "nu4 t2".parse().unwrap();
        assert_eq!(d, CodeDescriptor::new(4, 2, Variant::Plain));
        let d: CodeDescriptor = "nu6t4-shortened".parse().unwrap();
        assert_eq!(d.variant, Variant::Shortened);
        let d: CodeDescriptor = "nu=6, t=3, variant=shortened-even".parse().unwrap();
        assert_eq!(d, CodeDescriptor::new(6, 3, Variant::ShortenedEven));
        assert_eq!(d.to_string().parse::<CodeDescriptor>().unwrap(), d);
        assert!("t3".parse::<CodeDescriptor>().is_err());
    }

    #[test]
    fn encoder_is_linear_and_systematic() {
        let c = ComponentCode::bch(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(c.encode(&[0; 7]).unwrap(), vec![0; 15]);
        for _ in 0..50 {
            let m1: Vec<u8> = (0..7).map(|_| rng.random_range(0..2)).collect();
            let m2: Vec<u8> = (0..7).map(|_| rng.random_range(0..2)).collect();
            let sum: Vec<u8> = m1.iter().zip(&m2).map(|(a, b)| a ^ b).collect();
            let c1 = c.encode(&m1).unwrap();
            let c2 = c.encode(&m2).unwrap();
            let c12: Vec<u8> = c1.iter().zip(&c2).map(|(a, b)| a ^ b).collect();
            assert_eq!(c.encode(&sum).unwrap(), c12);
            assert!(c.is_codeword(&c1));
            assert_eq!(&c1[8..], &m1[..]);
        }
        assert!(matches!(c.encode(&[0; 6]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn even_and_shortened_codewords() {
        let base = ComponentCode::bch(4, 2).unwrap();
        let ev = base.derive(Variant::EvenWeight).unwrap();
        for w in ev.codewords() {
            assert_eq!(w.iter().filter(|&&b| b == 1).count() % 2, 0);
            assert!(base.is_codeword(&w));
        }
        let sh = base.derive(Variant::Shortened).unwrap();
        for w in sh.codewords() {
            let mut parent = w.clone();
            parent.push(0);
            assert!(base.is_codeword(&parent));
        }
    }

    /// Brute-force sphere decoding over every word of length 15.
    #[test]
    fn bdd_matches_exhaustive_sphere_search_15_7_2() {
        let c = ComponentCode::bch(4, 2).unwrap();
        let cws = c.codewords();
        for y in 0u32..(1 << 15) {
            let word: Vec<u8> = (0..15).map(|i| ((y >> i) & 1) as u8).collect();
            let mut near = cws.iter().filter(|cw| hamming_distance(cw, &word) <= 2);
            let expected = near.next().cloned();
            assert!(near.next().is_none(), "spheres overlap");
            assert_eq!(c.bdd_decode(&word).unwrap(), expected, "word {y:#x}");
        }
    }

    #[test]
    fn bdd_even_and_shortened_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (t, variant) in [2, 3]
            .into_iter()
            .flat_map(|t| [Variant::EvenWeight, Variant::Shortened, Variant::ShortenedEven].map(|v| (t, v)))
        {
            let c = ComponentCode::bch(4, t).unwrap().derive(variant).unwrap();
            let cws = c.codewords();
            for _ in 0..3000 {
                let base = &cws[rng.random_range(0..cws.len())];
                let mut word = base.clone();
                for _ in 0..rng.random_range(0..5) {
                    let p = rng.random_range(0..c.n());
                    word[p] ^= 1;
                }
                let expected = cws.iter().find(|cw| hamming_distance(cw, &word) <= c.t()).cloned();
                let got = c.bdd_decode(&word).unwrap();
                assert_eq!(got, expected, "{variant}");
                if let Some(g) = got {
                    if variant.is_even() {
                        assert_eq!(g.iter().filter(|&&b| b == 1).count() % 2, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn shortened_decode_equals_parent_with_zero_prefix() {
        let parent = ComponentCode::bch(6, 3).unwrap();
        let sh = parent.derive(Variant::Shortened).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5000 {
            let y: Vec<u8> = (0..62).map(|_| (rng.random::<f64>() < 0.05) as u8).collect();
            let mut p = y.clone();
            p.push(0);
            let via_parent = parent
                .bdd_decode(&p)
                .unwrap()
                .filter(|w| w[62] == 0)
                .map(|mut w| {
                    w.truncate(62);
                    w
                });
            assert_eq!(sh.bdd_decode(&y).unwrap(), via_parent);
        }
    }

    #[test]
    fn corrects_up_to_t_errors_on_long_code() {
        let c = ComponentCode::bch(9, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m: Vec<u8> = (0..c.k()).map(|_| rng.random_range(0..2)).collect();
            let cw = c.encode(&m).unwrap();
            let mut y = cw.clone();
            let ne = rng.random_range(0..=3);
            let mut flipped = Vec::new();
            while flipped.len() < ne {
                let p = rng.random_range(0..c.n());
                if !flipped.contains(&p) {
                    flipped.push(p);
                    y[p] ^= 1;
                }
            }
            assert_eq!(c.bdd_decode(&y).unwrap(), Some(cw));
        }
    }
}
