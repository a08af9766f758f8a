//! BI-AWGN channel with a three-level quantizer.
//!
//! The bit `b` is sent as `(-1)^b` with noise variance `1 / (2 E_s/N_0)`.
//! Outputs above `+T` map to `0`, below `-T` to `1`, and the closed interval
//! `[-T, +T]` to `?`. With `T = 0` the interval is empty and `0.0` maps to `0`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::numeric::golden_section_min;
use crate::ternary::ERASURE;

/// Gaussian tail `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Linear `E_s/N_0`.
    pub es_n0: f64,
    /// Erasure threshold `T >= 0`.
    pub threshold: f64,
}

impl ChannelParams {
    pub fn new(es_n0: f64, threshold: f64) -> Self {
        debug_assert!(es_n0 > 0.0 && threshold >= 0.0);
        Self { es_n0, threshold }
    }

    pub fn from_db(es_n0_db: f64, threshold: f64) -> Self {
        Self::new(crate::numeric::db_to_linear(es_n0_db), threshold)
    }

    pub fn sigma(&self) -> f64 {
        (2.0 * self.es_n0).sqrt().recip()
    }
}

/// Error, erasure and correct probabilities of the quantized channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelTriple {
    pub delta: f64,
    pub epsilon: f64,
    pub correct: f64,
}

pub fn transition_probs(p: ChannelParams) -> ChannelTriple {
    let a = (2.0 * p.es_n0).sqrt();
    let delta = q_function(a * (p.threshold + 1.0));
    let epsilon = if p.threshold == 0.0 {
        0.0
    } else {
        // P(-T <= r <= T | 0) = Q(a(1-T)) - Q(a(1+T)); as a difference of
        // erfc values this stays accurate when both tails are small.
        q_function(a * (1.0 - p.threshold)) - delta
    };
    ChannelTriple {
        delta,
        epsilon,
        correct: 1.0 - delta - epsilon,
    }
}

fn xlog2(x: f64, ratio: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * ratio.log2()
    }
}

/// Capacity in bits per channel use.
pub fn capacity(p: ChannelParams) -> f64 {
    let ChannelTriple {
        delta,
        epsilon,
        correct,
    } = transition_probs(p);
    let keep = 1.0 - epsilon;
    if keep <= 0.0 {
        return 0.0;
    }
    xlog2(correct, 2.0 * correct / keep) + xlog2(delta, 2.0 * delta / keep)
}

/// Capacity-maximizing threshold, by golden-section search on `[0, 1]` to
/// `|dT| < 1e-6`. Returns `(T*, C(T*))`.
pub fn capacity_optimal_threshold(es_n0: f64) -> (f64, f64) {
    let (t, neg_c) = golden_section_min(|t| -capacity(ChannelParams::new(es_n0, t)), 0.0, 1.0, 1e-6);
    let c0 = capacity(ChannelParams::new(es_n0, 0.0));
    if c0 >= -neg_c {
        (0.0, c0)
    } else {
        (t, -neg_c)
    }
}

/// Transmits `bit` and returns the quantized ternary symbol.
pub fn simulate_symbol<R: Rng + ?Sized>(p: ChannelParams, bit: u8, rng: &mut R) -> u8 {
    let noise: f64 = rng.sample(StandardNormal);
    let r = if bit == 0 { 1.0 } else { -1.0 } + p.sigma() * noise;
    quantize(r, p.threshold)
}

#[inline]
pub fn quantize(r: f64, threshold: f64) -> u8 {
    if threshold == 0.0 {
        return (r < 0.0) as u8;
    }
    if r > threshold {
        0
    } else if r < -threshold {
        1
    } else {
        ERASURE
    }
}
