//! Error-and-erasure decoding of product and staircase codes with BCH
//! component codes: component decoders, the ternary-output channel, density
//! evolution for GLDPC and spatially coupled ensembles, and a Monte-Carlo
//! simulator for message-passing decoding.

pub mod bch;
pub mod channel;
pub mod de;
pub mod distributions;
pub mod error;
pub mod gf2m;
pub mod montecarlo;
pub mod numeric;
pub mod ternary;
pub mod transition;

pub use bch::{hamming_distance, CodeDescriptor, ComponentCode, ErrorPositions, Variant};
pub use error::{Error, Result};
pub use gf2m::Gf2mField;
pub use ternary::{eaed_decode, eaed_plus_decode, eaed_resolve, Resolution, ERASURE};
pub use channel::{capacity, transition_probs, ChannelParams, ChannelTriple};
pub use distributions::{WeightMode, WeightPolicy, WeightTables};
pub use transition::{Decoder, Symbol, TransitionTable};
pub use de::{DeConfig, DeState, Ensemble};
pub use montecarlo::{Schedule, SimConfig};
