//! Monte-Carlo simulation of product codes under iterative message passing
//! with error-and-erasure component decoding.
//!
//! Array position `(r, c)` is stored at `r * n + c`. Every frame draws from
//! its own ChaCha8 stream in a fixed order: message bits (encoded mode only),
//! channel noise in row-major order, component-decoder fills, then one `u32`
//! per bit for the final decision.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bch::ComponentCode;
use crate::channel::{simulate_symbol, ChannelParams};
use crate::error::{Error, Result};
use crate::numeric::wilson_interval;
use crate::ternary::{eaed_decode, eaed_plus_decode, ERASURE};
use crate::transition::Decoder;

/// How a check node builds the word handed to the component decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Extrinsic: position `k` is replaced by its channel value.
    Emp,
    /// Intrinsic: the incoming messages are decoded as they are.
    Imp,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Emp => "emp",
            Schedule::Imp => "imp",
        })
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "emp" => Ok(Schedule::Emp),
            "imp" => Ok(Schedule::Imp),
            other => Err(Error::Config(format!("unknown schedule `{other}`"))),
        }
    }
}

/// Order of the row and column updates within one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateOrder {
    /// Rows, then columns fed by the fresh row outputs.
    Alternating,
    /// Rows and columns at once, each fed by the other's previous output.
    /// This is the message-passing schedule that DE models.
    Flooding,
}

impl fmt::Display for UpdateOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateOrder::Alternating => "alternating",
            UpdateOrder::Flooding => "flooding",
        })
    }
}

impl FromStr for UpdateOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alternating" => Ok(UpdateOrder::Alternating),
            "flooding" => Ok(UpdateOrder::Flooding),
            other => Err(Error::Config(format!("unknown update order `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionRule {
    /// Pick one of the two incoming messages at random; `?` becomes a random bit.
    Random,
    /// Agreeing or single unerased messages win; only ties are random.
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transmission {
    AllZero,
    /// Random messages, encoded and transmitted.
    Encoded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub decoder: Decoder,
    pub schedule: Schedule,
    pub order: UpdateOrder,
    pub iterations: usize,
    pub decision: DecisionRule,
    pub transmission: Transmission,
    pub seed: u64,
    pub target_ber: f64,
    pub confidence: f64,
    /// Per-probe budget in transmitted bits.
    pub max_bits: u64,
    /// Per-probe frame cap; `None` leaves only the bit budget.
    pub max_frames: Option<u64>,
    /// Frames are simulated in batches of about this many bits; the stopping
    /// rule is checked between batches.
    pub batch_bits: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            decoder: Decoder::Eaed,
            schedule: Schedule::Emp,
            order: UpdateOrder::Flooding,
            iterations: 20,
            decision: DecisionRule::Random,
            transmission: Transmission::AllZero,
            seed: 0,
            target_ber: 1e-4,
            confidence: 0.95,
            max_bits: 1_000_000_000,
            max_frames: None,
            batch_bits: 1 << 20,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.target_ber > 0.0 && self.target_ber < 1.0) {
            return Err(Error::Config(format!("target BER {} not in (0, 1)", self.target_ber)));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!("confidence {} not in (0, 1)", self.confidence)));
        }
        if self.max_bits == 0 || self.batch_bits == 0 || self.max_frames == Some(0) {
            return Err(Error::Config("simulation budgets must be positive".into()));
        }
        Ok(())
    }
}

/// Result of one decoded frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutcome {
    pub decided: Vec<u8>,
    pub bit_errors: u64,
    /// Expected bit errors of the random decision rule after each iteration.
    pub expected_errors: Vec<f64>,
}

/// Iterative decoder for the `n x n` product code of one component code.
pub struct ProductDecoder<'a> {
    code: &'a ComponentCode,
    decoder: Decoder,
    schedule: Schedule,
    order: UpdateOrder,
    iterations: usize,
    decision: DecisionRule,
}

impl<'a> ProductDecoder<'a> {
    pub fn new(code: &'a ComponentCode, cfg: &SimConfig) -> Self {
        Self {
            code,
            decoder: cfg.decoder,
            schedule: cfg.schedule,
            order: cfg.order,
            iterations: cfg.iterations,
            decision: cfg.decision,
        }
    }

    fn component<R: Rng + ?Sized>(&self, y: &[u8], rng: &mut R) -> Vec<u8> {
        match self.decoder {
            Decoder::Eaed => eaed_decode(self.code, y, rng),
            Decoder::EaedPlus => eaed_plus_decode(self.code, y),
        }
    }

    /// Check-node update of one line: `v` incoming messages, `r` channel values.
    fn line_update<R: Rng + ?Sized>(&self, v: &[u8], r: &[u8], out: &mut [u8], rng: &mut R) {
        let base = self.component(v, rng);
        match self.schedule {
            Schedule::Imp => out.copy_from_slice(&base),
            Schedule::Emp => {
                let mut w = v.to_vec();
                for k in 0..v.len() {
                    if v[k] == r[k] {
                        out[k] = base[k];
                    } else {
                        w[k] = r[k];
                        out[k] = self.component(&w, rng)[k];
                        w[k] = v[k];
                    }
                }
            }
        }
    }

    /// Updates every row (`rows = true`) or column check node.
    fn half_update<R: Rng + ?Sized>(&self, msgs: &[u8], channel: &[u8], out: &mut [u8], rows: bool, rng: &mut R) {
        let n = self.code.n();
        let mut v = vec![0u8; n];
        let mut r = vec![0u8; n];
        let mut o = vec![0u8; n];
        for j in 0..n {
            for k in 0..n {
                let idx = if rows { j * n + k } else { k * n + j };
                v[k] = msgs[idx];
                r[k] = channel[idx];
            }
            self.line_update(&v, &r, &mut o, rng);
            for k in 0..n {
                let idx = if rows { j * n + k } else { k * n + j };
                out[idx] = o[k];
            }
        }
    }

    fn is_product_codeword(&self, a: &[u8]) -> bool {
        let n = self.code.n();
        if a.contains(&ERASURE) {
            return false;
        }
        let mut col = vec![0u8; n];
        (0..n).all(|r| self.code.is_codeword(&a[r * n..(r + 1) * n]))
            && (0..n).all(|c| {
                for (r, b) in col.iter_mut().enumerate() {
                    *b = a[r * n + c];
                }
                self.code.is_codeword(&col)
            })
    }

    /// Decodes the received ternary array; `truth` is the transmitted array.
    /// Decoding stops early once both message planes hold the same product
    /// codeword, which is a fixed point of the iteration.
    pub fn decode<R: Rng + ?Sized>(&self, received: &[u8], truth: &[u8], rng: &mut R) -> FrameOutcome {
        let n = self.code.n();
        assert_eq!(received.len(), n * n);
        let mut to_row = received.to_vec();
        let mut to_col = received.to_vec();
        let mut row_out = vec![0u8; n * n];
        let mut col_out = vec![0u8; n * n];
        let mut expected_errors = Vec::with_capacity(self.iterations);
        for _ in 0..self.iterations {
            match self.order {
                UpdateOrder::Alternating => {
                    self.half_update(&to_row, received, &mut row_out, true, rng);
                    to_col.copy_from_slice(&row_out);
                    self.half_update(&to_col, received, &mut col_out, false, rng);
                    to_row.copy_from_slice(&col_out);
                }
                UpdateOrder::Flooding => {
                    self.half_update(&to_row, received, &mut row_out, true, rng);
                    self.half_update(&to_col, received, &mut col_out, false, rng);
                    to_col.copy_from_slice(&row_out);
                    to_row.copy_from_slice(&col_out);
                }
            }
            let e: f64 = (0..n * n)
                .map(|i| 0.5 * (symbol_error(row_out[i], truth[i]) + symbol_error(col_out[i], truth[i])))
                .sum();
            expected_errors.push(e);
            if row_out == col_out && self.is_product_codeword(&row_out) {
                // Every later update reproduces this array: a flipped or erased
                // channel symbol lies at distance 1 from the line codeword.
                expected_errors.resize(self.iterations, e);
                break;
            }
        }
        let decided: Vec<u8> = (0..n * n)
            .map(|i| final_decision(row_out[i], col_out[i], self.decision, rng.random::<u32>()))
            .collect();
        let bit_errors = decided.iter().zip(truth).filter(|(a, b)| a != b).count() as u64;
        FrameOutcome {
            decided,
            bit_errors,
            expected_errors,
        }
    }
}

fn symbol_error(s: u8, truth: u8) -> f64 {
    if s == ERASURE {
        0.5
    } else if s != truth {
        1.0
    } else {
        0.0
    }
}

/// Final bit from the row message `a` and column message `b`. Bit 0 of `u`
/// selects the message, bit 1 is the random value for erasures and ties.
pub fn final_decision(a: u8, b: u8, rule: DecisionRule, u: u32) -> u8 {
    let coin = ((u >> 1) & 1) as u8;
    match rule {
        DecisionRule::Random => {
            let pick = if u & 1 == 0 { a } else { b };
            if pick == ERASURE {
                coin
            } else {
                pick
            }
        }
        DecisionRule::Practical => match (a, b) {
            (ERASURE, ERASURE) => coin,
            (ERASURE, x) | (x, ERASURE) => x,
            (x, y) if x == y => x,
            _ => {
                if u & 1 == 0 {
                    a
                } else {
                    b
                }
            }
        },
    }
}

/// The frame's random stream.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Encodes a `k x k` message array (row-major) into an `n x n` product codeword.
pub fn encode_product(code: &ComponentCode, message: &[u8]) -> Result<Vec<u8>> {
    let (n, k) = (code.n(), code.k());
    if message.len() != k * k {
        return Err(Error::LengthMismatch {
            expected: k * k,
            got: message.len(),
        });
    }
    let rows: Vec<Vec<u8>> = message.chunks(k).map(|m| code.encode(m)).collect::<Result<_>>()?;
    let mut out = vec![0u8; n * n];
    for c in 0..n {
        let col: Vec<u8> = rows.iter().map(|row| row[c]).collect();
        for (r, b) in code.encode(&col)?.into_iter().enumerate() {
            out[r * n + c] = b;
        }
    }
    Ok(out)
}

/// Transmits one frame and returns `(truth, received)`.
pub fn transmit<R: Rng + ?Sized>(
    code: &ComponentCode,
    transmission: Transmission,
    channel: ChannelParams,
    rng: &mut R,
) -> (Vec<u8>, Vec<u8>) {
    let n = code.n();
    let truth = match transmission {
        Transmission::AllZero => vec![0u8; n * n],
        Transmission::Encoded => {
            let k = code.k();
            let msg: Vec<u8> = (0..k * k).map(|_| rng.random::<bool>() as u8).collect();
            encode_product(code, &msg).expect("message length matches")
        }
    };
    let received = truth.iter().map(|&b| simulate_symbol(channel, b, rng)).collect();
    (truth, received)
}

/// Simulates frame number `frame` of the stream defined by `cfg.seed`.
pub fn simulate_frame(code: &ComponentCode, cfg: &SimConfig, channel: ChannelParams, frame: u64) -> FrameOutcome {
    let mut rng = frame_rng(cfg.seed, frame);
    let (truth, received) = transmit(code, cfg.transmission, channel, &mut rng);
    ProductDecoder::new(code, cfg).decode(&received, &truth, &mut rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The confidence interval lies above the target.
    Above,
    /// The confidence interval lies below the target.
    Below,
    /// The budget ran out before the interval excluded the target.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerEstimate {
    pub esn0_db: f64,
    pub t: f64,
    pub iterations: usize,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub verdict: Verdict,
    /// Mean expected BER after each iteration.
    pub expected_trace: Vec<f64>,
}

/// Simulates batches of frames until the confidence interval excludes
/// `cfg.target_ber` or the budget is spent.
pub fn estimate_ber(code: &ComponentCode, cfg: &SimConfig, esn0_db: f64, t: f64) -> Result<BerEstimate> {
    cfg.validate()?;
    let channel = ChannelParams::from_db(esn0_db, t);
    let n2 = (code.n() * code.n()) as u64;
    let batch = (cfg.batch_bits / n2).max(1);
    let max_frames = cfg.max_frames.unwrap_or(u64::MAX);
    let (mut frames, mut errors) = (0u64, 0u64);
    let mut trace = vec![0.0f64; cfg.iterations];
    let verdict = loop {
        let left = (cfg.max_bits.saturating_sub(frames * n2)).div_ceil(n2).max(1);
        let count = batch.min(max_frames - frames).min(left);
        let results: Vec<(u64, Vec<f64>)> = (frames..frames + count)
            .into_par_iter()
            .map(|f| {
                let o = simulate_frame(code, cfg, channel, f);
                (o.bit_errors, o.expected_errors)
            })
            .collect();
        for (e, tr) in results {
            errors += e;
            for (acc, x) in trace.iter_mut().zip(tr) {
                *acc += x;
            }
        }
        frames += count;
        let (lo, hi) = wilson_interval(errors, frames * n2, cfg.confidence);
        if hi < cfg.target_ber {
            break Verdict::Below;
        }
        if lo > cfg.target_ber {
            break Verdict::Above;
        }
        if frames >= max_frames || frames * n2 >= cfg.max_bits {
            break Verdict::Undecided;
        }
    };
    let bits = frames * n2;
    let (ci_lo, ci_hi) = wilson_interval(errors, bits, cfg.confidence);
    Ok(BerEstimate {
        esn0_db,
        t,
        iterations: cfg.iterations,
        frames,
        bits,
        bit_errors: errors,
        ber: errors as f64 / bits as f64,
        ci_lo,
        ci_hi,
        verdict,
        expected_trace: trace.into_iter().map(|x| x / bits as f64).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimThreshold {
    pub t: f64,
    /// Midpoint of the final search interval.
    pub esn0_db: f64,
    pub interval_lo_db: f64,
    pub interval_hi_db: f64,
    /// Set when a probe could not separate the BER from the target.
    pub budget_exhausted: bool,
    pub probes: Vec<BerEstimate>,
}

/// Bisection on `E_s/N_0` for the crossing of the BER curve with the target.
/// An end of `[lo_db, hi_db]` on the wrong side shifts the bracket by its
/// width, at most `max_shifts` times. A probe that cannot separate the BER
/// from the target ends the search with `budget_exhausted` set.
pub fn simulated_threshold(
    code: &ComponentCode,
    cfg: &SimConfig,
    t: f64,
    lo_db: f64,
    hi_db: f64,
    width_db: f64,
    max_shifts: usize,
) -> Result<SimThreshold> {
    if !(lo_db < hi_db) || !(width_db > 0.0) {
        return Err(Error::Bracket {
            lo_db,
            hi_db,
            reason: "empty bracket or non-positive width".into(),
        });
    }
    let span = hi_db - lo_db;
    let mut probes = Vec::new();
    let (mut lo, mut hi) = (lo_db, hi_db);
    let (mut lo_known, mut hi_known) = (false, false);
    let mut shifts = 0;
    let mut budget_exhausted = false;
    while !(lo_known && hi_known) {
        let at = if lo_known { hi } else { lo };
        let p = estimate_ber(code, cfg, at, t)?;
        let v = p.verdict;
        probes.push(p);
        match (lo_known, v) {
            (_, Verdict::Undecided) => {
                budget_exhausted = true;
                break;
            }
            (false, Verdict::Above) => lo_known = true,
            (true, Verdict::Below) => hi_known = true,
            (false, Verdict::Below) => {
                hi = lo;
                hi_known = true;
                lo -= span;
                shifts += 1;
            }
            (true, Verdict::Above) => {
                lo = hi;
                hi += span;
                shifts += 1;
            }
        }
        if shifts > max_shifts {
            return Err(Error::Bracket {
                lo_db,
                hi_db,
                reason: format!("BER target not crossed after {max_shifts} bracket shifts"),
            });
        }
    }
    while !budget_exhausted && hi - lo > width_db {
        let mid = 0.5 * (lo + hi);
        let p = estimate_ber(code, cfg, mid, t)?;
        let v = p.verdict;
        probes.push(p);
        match v {
            Verdict::Above => lo = mid,
            Verdict::Below => hi = mid,
            Verdict::Undecided => budget_exhausted = true,
        }
    }
    Ok(SimThreshold {
        t,
        esn0_db: 0.5 * (lo + hi),
        interval_lo_db: lo,
        interval_hi_db: hi,
        budget_exhausted,
        probes,
    })
}
