//! Classical low-discrepancy generators.
//!
//! All generators are stateless maps from a raw index to a point. Raw
//! index 0 is the origin for the digital constructions; a burn-in of `B`
//! means the first emitted point is raw index `B`.

mod owen;
mod radical;
mod sequence;
mod sobol;

pub use owen::{owen_scramble, owen_scramble_u32};
pub use radical::{first_primes, halton_point, radical_inverse, Halton};
pub use sequence::{generate, Sequence, SequenceKind, SequenceSpec};
pub use sobol::{gray_code, sobol_point, DirectionEntry, DirectionTable, SobolGenerator, SOBOL_BITS};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeqError {
    #[error("dimension {requested} exceeds the direction table (max supported dimension {max})")]
    DimensionTooLarge { requested: usize, max: usize },
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("{kind} sequences only support dimension {supported}, got {requested}")]
    UnsupportedDim {
        kind: &'static str,
        supported: usize,
        requested: usize,
    },
    #[error("index {index} is beyond the {bits}-bit range of the Sobol' generator")]
    IndexOutOfRange { index: u64, bits: u32 },
    #[error("{kind} sequences {requirement}")]
    Seed {
        kind: &'static str,
        requirement: &'static str,
    },
    #[error("neural sequences need a trained model")]
    MissingModel,
    #[error("model generates {model} dimensions, sequence asks for {requested}")]
    ModelDim { model: usize, requested: usize },
    #[error("at least one point must be requested")]
    Empty,
    #[error("direction table line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
