//! Error-and-erasure component decoding over the ternary alphabet `{0, ?, 1}`.
//!
//! Symbols are stored as `u8`: `0`, `1`, and [`ERASURE`] for `?`.

use rand::Rng;

use crate::bch::ComponentCode;

/// The erasure symbol `?`.
pub const ERASURE: u8 = 2;

/// Number of erased symbols `E(y)`.
pub fn erasure_count(y: &[u8]) -> usize {
    y.iter().filter(|&&s| s == ERASURE).count()
}

/// Hamming distance on the non-erased positions of `y`.
pub fn distance_outside_erasures(y: &[u8], c: &[u8]) -> usize {
    y.iter().zip(c).filter(|&(&s, &b)| s != ERASURE && s != b).count()
}

/// Renders a ternary word as a string over `0`, `1`, `?`.
pub fn format_word(y: &[u8]) -> String {
    y.iter()
        .map(|&s| match s {
            0 => '0',
            1 => '1',
            _ => '?',
        })
        .collect()
}

/// Parses a string over `0`, `1`, `?` into a ternary word.
pub fn parse_word(s: &str) -> Option<Vec<u8>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Some(0),
            '1' => Some(1),
            '?' => Some(ERASURE),
            _ => None,
        })
        .collect()
}

/// EaED outcome for one fixed fill vector `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Both BDD attempts failed, or `E(y) >= d_des`: the input is passed on.
    Unchanged,
    /// A single codeword is selected.
    Codeword(Vec<u8>),
    /// Two distinct codewords at equal distance outside the erasures; the
    /// decoder picks one of them uniformly at random.
    Tie(Vec<u8>, Vec<u8>),
}

fn fill(y: &[u8], fill_bits: &[u8], complement: bool) -> Vec<u8> {
    let mut bits = fill_bits.iter();
    y.iter()
        .map(|&s| {
            if s == ERASURE {
                bits.next().expect("fill vector shorter than erasure count") ^ complement as u8
            } else {
                s
            }
        })
        .collect()
}

/// Deterministic part of EaED for the fill `p` (one bit per erasure, in
/// position order) and its complement.
pub fn eaed_resolve(code: &ComponentCode, y: &[u8], p: &[u8]) -> Resolution {
    debug_assert_eq!(y.len(), code.n());
    let e = erasure_count(y);
    if e >= code.d_des() {
        return Resolution::Unchanged;
    }
    let mut w1 = fill(y, p, false);
    let ok1 = code.bdd_decode_in_place(&mut w1);
    if e == 0 {
        return if ok1 { Resolution::Codeword(w1) } else { Resolution::Unchanged };
    }
    let mut w2 = fill(y, p, true);
    let ok2 = code.bdd_decode_in_place(&mut w2);
    match (ok1, ok2) {
        (false, false) => Resolution::Unchanged,
        (true, false) => Resolution::Codeword(w1),
        (false, true) => Resolution::Codeword(w2),
        (true, true) => {
            if w1 == w2 {
                return Resolution::Codeword(w1);
            }
            let d1 = distance_outside_erasures(y, &w1);
            let d2 = distance_outside_erasures(y, &w2);
            match d1.cmp(&d2) {
                std::cmp::Ordering::Less => Resolution::Codeword(w1),
                std::cmp::Ordering::Greater => Resolution::Codeword(w2),
                std::cmp::Ordering::Equal => Resolution::Tie(w1, w2),
            }
        }
    }
}

/// EaED: fills the erasures with a uniformly random vector `p` and with its
/// complement, decodes both and keeps the better result. Returns `y` itself
/// when decoding fails. No randomness is consumed when `E(y) = 0` or
/// `E(y) >= d_des`.
pub fn eaed_decode<R: Rng + ?Sized>(code: &ComponentCode, y: &[u8], rng: &mut R) -> Vec<u8> {
    let e = erasure_count(y);
    let p: Vec<u8> = if e == 0 || e >= code.d_des() {
        Vec::new()
    } else {
        (0..e).map(|_| rng.random::<bool>() as u8).collect()
    };
    match eaed_resolve(code, y, &p) {
        Resolution::Unchanged => y.to_vec(),
        Resolution::Codeword(c) => c,
        Resolution::Tie(c1, c2) => {
            if rng.random::<bool>() {
                c2
            } else {
                c1
            }
        }
    }
}

/// EaED+: returns the codeword `c` with `2 d(y, c) + E(y) < d_des`, where
/// `d` counts disagreements outside the erasures, and `y` otherwise.
///
/// Deterministic. If such a `c` exists, BDD of one of the two fills with all
/// zeros or all ones reaches it, because one of them adds at most `E/2` errors.
pub fn eaed_plus_decode(code: &ComponentCode, y: &[u8]) -> Vec<u8> {
    eaed_plus_codeword(code, y).unwrap_or_else(|| y.to_vec())
}

/// The codeword selected by EaED+, if any.
pub fn eaed_plus_codeword(code: &ComponentCode, y: &[u8]) -> Option<Vec<u8>> {
    let e = erasure_count(y);
    if e >= code.d_des() {
        return None;
    }
    let in_sphere = |c: &[u8]| 2 * distance_outside_erasures(y, c) + e < code.d_des();
    for fill_bit in [0u8, 1] {
        let mut w: Vec<u8> = y.iter().map(|&s| if s == ERASURE { fill_bit } else { s }).collect();
        if code.bdd_decode_in_place(&mut w) && in_sphere(&w) {
            return Some(w);
        }
        if e == 0 {
            break;
        }
    }
    None
}

/// EaED+ through its wrapped definition: run EaED and accept its output only
/// when it lies in the sphere `2 d(y, c) + E(y) < d_des`.
pub fn eaed_plus_wrapped<R: Rng + ?Sized>(code: &ComponentCode, y: &[u8], rng: &mut R) -> Vec<u8> {
    let out = eaed_decode(code, y, rng);
    let e = erasure_count(y);
    if erasure_count(&out) == 0 && 2 * distance_outside_erasures(y, &out) + e < code.d_des() {
        out
    } else {
        y.to_vec()
    }
}
