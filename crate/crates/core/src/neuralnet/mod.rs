//! The index → point network: sinusoidal index encoding, a ReLU MLP with a
//! sigmoid output layer, reverse-mode gradients and Adam.

mod adam;
mod encoding;
mod mlp;

pub use adam::AdamState;
pub use encoding::EncodingConfig;
pub use mlp::{ForwardCache, Layer, MlpGrads, MlpModel, ModelMeta};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NnError {
    #[error("encoding needs at least one band and a positive normalizing length")]
    Encoding,
    #[error("layer {layer}: expected {expected} values, found {found}")]
    LayerShape {
        layer: usize,
        expected: usize,
        found: usize,
    },
    #[error("network needs at least one layer")]
    NoLayers,
    #[error("upstream gradient has {found} values, expected {expected}")]
    UpstreamShape { expected: usize, found: usize },
    #[error("non-finite gradient in layer {layer}")]
    NonFiniteGradient { layer: usize },
    #[error("optimizer state does not match the model")]
    StateMismatch,
}
