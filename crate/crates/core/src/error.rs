use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no primitive polynomial configured for GF(2^{0}) (supported: 2..=16)")]
    UnsupportedField(u32),

    #[error("t = {t} is not supported for nu = {nu}: need 1 <= t and 2t - 1 < 2^nu - 1 with k > 0")]
    InvalidRadius { nu: u32, t: usize },

    #[error("{0}")]
    InvalidVariant(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("configuration indices ({b11}, {b10}, {b01}, {b00}) do not sum to n = {n}")]
    IndexSum {
        b11: usize,
        b10: usize,
        b01: usize,
        b00: usize,
        n: usize,
    },

    #[error("transition probability out of range at ({from}->{to} | D'={dp}, E'={ep}): {value}")]
    TableOutOfRange {
        from: char,
        to: char,
        dp: usize,
        ep: usize,
        value: f64,
    },

    #[error("threshold bracket [{lo_db}, {hi_db}] dB does not contain the threshold: {reason}")]
    Bracket {
        lo_db: f64,
        hi_db: f64,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("transition-table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
