//! Core algorithms for low-discrepancy sequences.
//!
//! This crate is `no_std` (it needs `alloc`) and performs no IO. It covers:
//!
//! * [`seq`]: van der Corput, Halton, Sobol' and Owen-scrambled Sobol'
//!   generators, plus a counter-based uniform baseline. Every generator is
//!   a pure function of `(spec, index)`.
//! * [`discrepancy`]: closed-form L2 kernel discrepancies for six kernel
//!   families, an O(dN²) evaluator over all prefixes, the prefix-weighted
//!   training loss and its analytic gradient.
//! * [`neuralnet`]: the index → point network (sinusoidal index encoding,
//!   ReLU MLP, sigmoid output), reverse-mode gradients and Adam.
//! * [`trainer`]: MSE pretraining against a classical sequence followed by
//!   fine-tuning on the prefix discrepancy loss.
//! * [`bench`]: Borehole and basket-option integrands, QMC error studies
//!   and Saltelli sensitivity analysis.
//! * [`rrt`]: an RRT planner driven by a sample sequence and a planar
//!   kinematic chain in a semi-circular tunnel.
//!
//! File formats, threading and the command line live in the `neurolds`
//! companion crate.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bench;
pub mod discrepancy;
pub mod hash;
pub mod neuralnet;
pub mod points;
pub mod rrt;
pub mod seq;
pub mod trainer;

pub use discrepancy::{KernelFamily, KernelSpec, PrefixScheme, PrefixWeights};
pub use neuralnet::{EncodingConfig, MlpModel};
pub use points::PointBuffer;
pub use seq::{DirectionTable, Sequence, SequenceKind, SequenceSpec};
pub use trainer::TrainConfig;
