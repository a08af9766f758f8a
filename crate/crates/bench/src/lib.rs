//! Benchmark inputs shared by the criterion targets in `benches/`.

use eaed_core::{ComponentCode, ERASURE};

/// All-zero word of `code` with errors at `errors` and erasures at `erasures`.
pub fn noisy_zero_word(code: &ComponentCode, errors: &[usize], erasures: &[usize]) -> Vec<u8> {
    let mut y = vec![0u8; code.n()];
    for &i in errors {
        y[i] = 1;
    }
    for &i in erasures {
        y[i] = ERASURE;
    }
    y
}
