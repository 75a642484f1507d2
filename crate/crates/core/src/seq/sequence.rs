use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::owen::owen_scramble_u32;
use super::radical::{radical_inverse, Halton};
use super::sobol::{fraction, DirectionTable, SobolGenerator};
use super::SeqError;
use crate::hash::uniform_coordinate;
use crate::neuralnet::MlpModel;
use crate::points::PointBuffer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    VanDerCorput,
    Halton,
    Sobol,
    ScrambledSobol,
    Uniform,
    Neural,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 6] = [
        SequenceKind::VanDerCorput,
        SequenceKind::Halton,
        SequenceKind::Sobol,
        SequenceKind::ScrambledSobol,
        SequenceKind::Uniform,
        SequenceKind::Neural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::VanDerCorput => "vdc",
            SequenceKind::Halton => "halton",
            SequenceKind::Sobol => "sobol",
            SequenceKind::ScrambledSobol => "sobol-scrambled",
            SequenceKind::Uniform => "uniform",
            SequenceKind::Neural => "neural",
        }
    }

    /// Whether the kind consumes a seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, SequenceKind::ScrambledSobol | SequenceKind::Uniform)
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SequenceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| alloc::format!("unknown sequence kind `{s}`"))
    }
}

/// Description of a sequence: which generator, its dimension, burn-in and
/// randomization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub dim: usize,
    pub burn_in: u64,
    /// Present iff `kind` is randomized.
    pub seed: Option<u64>,
    /// Location of the trained model for `Neural`; resolved by the caller.
    pub model_path: Option<String>,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, dim: usize) -> Self {
        SequenceSpec {
            kind,
            dim,
            burn_in: 0,
            seed: kind.is_randomized().then_some(0),
            model_path: None,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<(), SeqError> {
        if self.dim == 0 {
            return Err(SeqError::ZeroDim);
        }
        if self.kind == SequenceKind::VanDerCorput && self.dim != 1 {
            return Err(SeqError::UnsupportedDim {
                kind: "vdc",
                supported: 1,
                requested: self.dim,
            });
        }
        match (self.kind.is_randomized(), self.seed.is_some()) {
            (true, false) => Err(SeqError::Seed {
                kind: self.kind.name(),
                requirement: "require a seed",
            }),
            (false, true) => Err(SeqError::Seed {
                kind: self.kind.name(),
                requirement: "are deterministic and take no seed",
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
enum Source {
    VanDerCorput,
    Halton(Halton),
    Sobol(SobolGenerator),
    Scrambled(SobolGenerator, u64),
    Uniform(u64),
    Neural(Arc<MlpModel>),
}

/// A ready-to-evaluate sequence built from a [`SequenceSpec`].
///
/// Row `k` of the output is raw index `burn_in + k`. For neural sequences
/// raw index `r` is the model's 1-based index `r + 1`.
#[derive(Debug, Clone)]
pub struct Sequence {
    spec: SequenceSpec,
    source: Source,
}

impl Sequence {
    /// Builds any non-neural sequence using the embedded direction table.
    pub fn new(spec: &SequenceSpec) -> Result<Self, SeqError> {
        Self::with_table(spec, &DirectionTable::embedded())
    }

    pub fn with_table(spec: &SequenceSpec, table: &DirectionTable) -> Result<Self, SeqError> {
        spec.validate()?;
        let source = match spec.kind {
            SequenceKind::VanDerCorput => Source::VanDerCorput,
            SequenceKind::Halton => Source::Halton(Halton::new(spec.dim)),
            SequenceKind::Sobol => Source::Sobol(SobolGenerator::new(spec.dim, table)?),
            SequenceKind::ScrambledSobol => {
                Source::Scrambled(SobolGenerator::new(spec.dim, table)?, spec.seed.expect("validated"))
            }
            SequenceKind::Uniform => Source::Uniform(spec.seed.expect("validated")),
            SequenceKind::Neural => return Err(SeqError::MissingModel),
        };
        Ok(Sequence {
            spec: spec.clone(),
            source,
        })
    }

    /// Builds a neural sequence backed by `model`.
    pub fn neural(spec: &SequenceSpec, model: Arc<MlpModel>) -> Result<Self, SeqError> {
        spec.validate()?;
        if spec.kind != SequenceKind::Neural {
            return Self::new(spec);
        }
        if model.output_dim() != spec.dim {
            return Err(SeqError::ModelDim {
                model: model.output_dim(),
                requested: spec.dim,
            });
        }
        Ok(Sequence {
            spec: spec.clone(),
            source: Source::Neural(model),
        })
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Writes row `k` (raw index `burn_in + k`) into `out`.
    pub fn point_into(&self, k: u64, out: &mut [f64]) -> Result<(), SeqError> {
        let raw = self.spec.burn_in + k;
        match &self.source {
            Source::VanDerCorput => out[0] = radical_inverse(raw, 2),
            Source::Halton(h) => h.point_into(raw, out),
            Source::Sobol(g) => g.point_into(raw, out)?,
            Source::Scrambled(g, seed) => {
                let mut bits = vec![0u32; out.len()];
                g.point_bits(raw, &mut bits)?;
                for (j, (x, b)) in out.iter_mut().zip(bits).enumerate() {
                    *x = fraction(owen_scramble_u32(b, j, *seed));
                }
            }
            Source::Uniform(seed) => {
                for (j, x) in out.iter_mut().enumerate() {
                    *x = uniform_coordinate(*seed, raw, j);
                }
            }
            Source::Neural(model) => {
                let pts = model.forward(&[raw + 1]);
                out.copy_from_slice(pts.row(0));
            }
        }
        Ok(())
    }

    /// Rows `start .. start + n`.
    pub fn generate_range(&self, start: u64, n: usize) -> Result<PointBuffer, SeqError> {
        if let Source::Neural(model) = &self.source {
            let base = self.spec.burn_in + start + 1;
            let indices: Vec<u64> = (0..n as u64).map(|k| base + k).collect();
            return Ok(model.forward(&indices));
        }
        let dim = self.spec.dim;
        let mut coords = vec![0.0; n * dim];
        for (k, row) in coords.chunks_exact_mut(dim).enumerate() {
            self.point_into(start + k as u64, row)?;
        }
        Ok(PointBuffer::from_flat(n, dim, coords).expect("generators emit points in [0, 1]"))
    }

    /// The first `n` rows.
    pub fn generate(&self, n: usize) -> Result<PointBuffer, SeqError> {
        if n == 0 {
            return Err(SeqError::Empty);
        }
        self.generate_range(0, n)
    }
}

/// Convenience wrapper: build the sequence with the embedded table and
/// emit its first `n` points.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<PointBuffer, SeqError> {
    Sequence::new(spec)?.generate(n)
}
