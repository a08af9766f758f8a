//! Exhaustive oracles for short component codes (n <= 16) and a plain
//! iterative BDD reference decoder, shared by the integration and acceptance
//! tests.
#![allow(dead_code)]

use eaed_core::channel::simulate_symbol;
use eaed_core::montecarlo::frame_rng;
use eaed_core::{ChannelParams, ComponentCode, Decoder, Symbol};
use rand::Rng;

/// A short code with a lookup table of the real BDD decoder over all words.
pub struct SmallCode {
    pub n: usize,
    pub d_des: usize,
    pub codewords: Vec<u32>,
    /// `decode[w]` is the BDD output for the binary word `w`, or `None`.
    pub decode: Vec<Option<u32>>,
}

fn to_word(mask: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

fn to_mask(word: &[u8]) -> u32 {
    word.iter().enumerate().fold(0, |m, (i, &b)| m | ((b as u32) << i))
}

impl SmallCode {
    pub fn new(code: &ComponentCode) -> Self {
        let n = code.n();
        assert!(n <= 16);
        let decode = (0u32..(1 << n))
            .map(|m| code.bdd_decode(&to_word(m, n)).unwrap().map(|c| to_mask(&c)))
            .collect();
        Self {
            n,
            d_des: code.d_des(),
            codewords: code.codewords().iter().map(|c| to_mask(c)).collect(),
            decode,
        }
    }
}

/// Tally of decoder outputs at position 0 for one `(alpha, D', E')` cell.
#[derive(Default, Clone, Copy)]
struct Tally {
    to_zero: f64,
    to_one: f64,
    total: f64,
}

/// Exhaustive transition table: `[D'][E'] -> [0->1, ?->1, 1->0, ?->0]`,
/// with position `k = 0`, for `E' < d_des`.
pub fn enumerate_table(code: &SmallCode, decoder: Decoder) -> Vec<Vec<[f64; 4]>> {
    let n = code.n;
    let nbar = n - 1;
    let mut out = vec![vec![[0.0f64; 4]; code.d_des]; n];
    for (slot, (alpha, beta)) in [
        (Symbol::Zero, Symbol::One),
        (Symbol::Erasure, Symbol::One),
        (Symbol::One, Symbol::Zero),
        (Symbol::Erasure, Symbol::Zero),
    ]
    .into_iter()
    .enumerate()
    {
        let mut tallies = vec![vec![Tally::default(); code.d_des]; n];
        // Ternary patterns on positions 1..n: digit 0 -> 0, 1 -> 1, 2 -> ?.
        let total_patterns = 3u64.pow(nbar as u32);
        for idx in 0..total_patterns {
            let mut x = idx;
            let mut ones = 0u32;
            let mut erased = 0u32;
            for pos in 1..n {
                match x % 3 {
                    1 => ones |= 1 << pos,
                    2 => erased |= 1 << pos,
                    _ => {}
                }
                x /= 3;
            }
            let dp = ones.count_ones() as usize;
            let ep = erased.count_ones() as usize;
            if ep >= code.d_des {
                continue;
            }
            match alpha {
                Symbol::One => ones |= 1,
                Symbol::Erasure => erased |= 1,
                Symbol::Zero => {}
            }
            let e = erased.count_ones() as usize;
            let tally = &mut tallies[dp][ep];
            let weight = (1u64 << e) as f64;
            tally.total += weight;
            if e >= code.d_des {
                continue;
            }
            let positions: Vec<u32> = (0..n as u32).filter(|p| (erased >> p) & 1 == 1).collect();
            match decoder {
                Decoder::EaedPlus => {
                    let hit = code
                        .codewords
                        .iter()
                        .find(|&&c| 2 * ((c ^ ones) & !erased).count_ones() as usize + e < code.d_des);
                    if let Some(&c) = hit {
                        if c & 1 == 1 {
                            tally.to_one += weight;
                        } else {
                            tally.to_zero += weight;
                        }
                    }
                }
                Decoder::Eaed => {
                    for f in 0u32..(1 << e) {
                        let mut fill = 0u32;
                        for (i, &p) in positions.iter().enumerate() {
                            if (f >> i) & 1 == 1 {
                                fill |= 1 << p;
                            }
                        }
                        let y1 = ones | fill;
                        let y2 = ones | (erased & !fill);
                        let r1 = code.decode[y1 as usize];
                        let r2 = if e == 0 { None } else { code.decode[y2 as usize] };
                        let dist = |c: u32| ((c ^ ones) & !erased).count_ones();
                        let (w0, w1): (f64, f64) = match (r1, r2) {
                            (None, None) => (0.0, 0.0),
                            (Some(c), None) | (None, Some(c)) => bit_weights(c),
                            (Some(c1), Some(c2)) => {
                                if c1 == c2 || dist(c1) < dist(c2) {
                                    bit_weights(c1)
                                } else if dist(c2) < dist(c1) {
                                    bit_weights(c2)
                                } else {
                                    let (a0, a1) = bit_weights(c1);
                                    let (b0, b1) = bit_weights(c2);
                                    (0.5 * (a0 + b0), 0.5 * (a1 + b1))
                                }
                            }
                        };
                        tally.to_zero += w0;
                        tally.to_one += w1;
                    }
                }
            }
        }
        for dp in 0..n {
            for ep in 0..code.d_des {
                let t = tallies[dp][ep];
                if t.total == 0.0 {
                    continue;
                }
                let v = if beta == Symbol::One { t.to_one } else { t.to_zero };
                // A successful decode keeping the input symbol is not a transition.
                out[dp][ep][slot] = if beta == Symbol::One && alpha == Symbol::One
                    || beta == Symbol::Zero && alpha == Symbol::Zero
                {
                    0.0
                } else {
                    v / t.total
                };
            }
        }
    }
    out
}

fn bit_weights(c: u32) -> (f64, f64) {
    if c & 1 == 1 {
        (0.0, 1.0)
    } else {
        (1.0, 0.0)
    }
}

/// Largest absolute deviation between a table and the exhaustive oracle.
pub fn max_table_deviation(table: &eaed_core::TransitionTable, oracle: &[Vec<[f64; 4]>]) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for (dp, row) in oracle.iter().enumerate() {
        for (ep, cell) in row.iter().enumerate() {
            if dp + ep >= table.n() {
                continue;
            }
            let got = table.off_diagonal(dp, ep);
            for i in 0..4 {
                let dev = (got[i] - cell[i]).abs();
                if dev > worst.0 {
                    worst = (dev, format!("slot {i} at D'={dp} E'={ep}: table {} oracle {}", got[i], cell[i]));
                }
            }
        }
    }
    worst
}

/// Extrinsic hard-decision iterative BDD of the all-zero product codeword at
/// `T = 0` with flooding updates: rows and columns are decoded at once, each
/// from the other's previous output. Every output bit is decoded from the
/// line with its own incoming message replaced by the channel bit; a decoding
/// failure returns that channel bit. Final bits pick the row or the column
/// message with one `u32` per bit, drawn after the channel.
pub fn plain_iterative_bdd(code: &ComponentCode, seed: u64, frame: u64, channel: ChannelParams, iterations: usize) -> Vec<u8> {
    assert_eq!(channel.threshold, 0.0);
    let n = code.n();
    let mut rng = frame_rng(seed, frame);
    let rx: Vec<Vec<u8>> = (0..n)
        .map(|_| (0..n).map(|_| simulate_symbol(channel, 0, &mut rng)).collect())
        .collect();
    let bdd = |w: &[u8]| code.bdd_decode(w).unwrap();
    let extrinsic = |line: &[u8], chan: &[u8], out: &mut [u8]| {
        let whole = bdd(line);
        for k in 0..n {
            let dec = if line[k] == chan[k] {
                whole.clone()
            } else {
                let mut w = line.to_vec();
                w[k] = chan[k];
                bdd(&w)
            };
            out[k] = dec.map_or(chan[k], |c| c[k]);
        }
    };
    let column = |m: &[Vec<u8>], j: usize| m.iter().map(|r| r[j]).collect::<Vec<u8>>();
    let mut to_row = rx.clone();
    let mut to_col = rx.clone();
    let mut row_out = rx.clone();
    let mut col_out = rx.clone();
    let mut o = vec![0u8; n];
    for it in 0..iterations {
        let before = (row_out.clone(), col_out.clone());
        for i in 0..n {
            extrinsic(&to_row[i], &rx[i], &mut row_out[i]);
        }
        for j in 0..n {
            extrinsic(&column(&to_col, j), &column(&rx, j), &mut o);
            for k in 0..n {
                col_out[k][j] = o[k];
            }
        }
        to_row = col_out.clone();
        to_col = row_out.clone();
        if it > 0 && before == (row_out.clone(), col_out.clone()) {
            break;
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let u: u32 = rng.random();
            out.push(if u & 1 == 0 { row_out[i][j] } else { col_out[i][j] });
        }
    }
    out
}
