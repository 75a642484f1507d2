use alloc::string::String;
use alloc::vec::Vec;

use super::{rrt_plan, ChainEnv, ChainGeometry, RrtConfig, RrtError};
use crate::hash::{hash3, split_seed, unit_f64};
use crate::points::PointBuffer;
use crate::seq::{SeqError, Sequence, SequenceKind, SequenceSpec};

/// Passage widths swept by default, widest first.
pub const DEFAULT_WIDTHS: [f64; 7] = [0.64, 0.60, 0.56, 0.52, 0.48, 0.44, 0.40];

/// A labelled family of precomputed sample sequences; repetition `r` uses
/// `sequences[r % len]`.
#[derive(Debug, Clone)]
pub struct RrtSource {
    pub label: String,
    pub sequences: Vec<PointBuffer>,
}

/// `count` sequences of length `len` for a classical or randomized spec.
/// Deterministic kinds yield a single sequence; randomized kinds use seeds
/// `split_seed(seed, k)`.
pub fn precompute_sources(spec: &SequenceSpec, count: usize, len: usize) -> Result<Vec<PointBuffer>, SeqError> {
    if spec.kind == SequenceKind::Neural {
        return Err(SeqError::MissingModel);
    }
    match spec.seed {
        Some(seed) if spec.kind.is_randomized() => (0..count.max(1) as u64)
            .map(|k| Sequence::new(&spec.clone().with_seed(split_seed(seed, k)))?.generate(len))
            .collect(),
        _ => Ok(alloc::vec![Sequence::new(spec)?.generate(len)?]),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCell {
    pub source: String,
    pub width: f64,
    pub successes: usize,
    pub reps: usize,
}

impl SuccessCell {
    pub fn percent(&self) -> f64 {
        100.0 * self.successes as f64 / self.reps as f64
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuccessTable {
    pub cells: Vec<SuccessCell>,
}

/// Tunnel rotation of repetition `rep`, shared by every width and source.
pub fn rep_rotation(env_seed: u64, rep: usize) -> f64 {
    2.0 * core::f64::consts::PI * unit_f64(hash3(env_seed, rep as u64, 0x7475_6e6e_656c))
}

/// One planning attempt: environment of repetition `rep` at `width`.
pub fn plan_rep(
    geometry: &ChainGeometry,
    width: f64,
    rep: usize,
    env_seed: u64,
    cfg: &RrtConfig,
    samples: &PointBuffer,
) -> Result<bool, RrtError> {
    let env = ChainEnv::new(*geometry, width, rep_rotation(env_seed, rep))?;
    let mut src = samples;
    Ok(rrt_plan(&env, cfg, &mut src)?.success())
}

/// Success percentage for every `(source, width)` pair over `reps`
/// randomized tunnel placements.
pub fn success_rate(
    geometry: &ChainGeometry,
    widths: &[f64],
    reps: usize,
    sources: &[RrtSource],
    cfg: &RrtConfig,
    env_seed: u64,
) -> Result<SuccessTable, RrtError> {
    if reps == 0 {
        return Err(RrtError::Config("reps must be at least 1"));
    }
    if sources.iter().any(|s| s.sequences.is_empty()) {
        return Err(RrtError::Config("every source needs at least one sequence"));
    }
    let mut table = SuccessTable::default();
    for src in sources {
        for &width in widths {
            let mut successes = 0;
            for rep in 0..reps {
                let seq = &src.sequences[rep % src.sequences.len()];
                successes += plan_rep(geometry, width, rep, env_seed, cfg, seq)? as usize;
            }
            table.cells.push(SuccessCell {
                source: src.label.clone(),
                width,
                successes,
                reps,
            });
        }
    }
    Ok(table)
}
