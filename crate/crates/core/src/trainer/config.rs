use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::TrainError;
use crate::discrepancy::{KernelFamily, PrefixScheme};
use crate::seq::SequenceKind;

/// Everything that determines a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub n_points: usize,
    /// Hidden width `H`.
    pub hidden: usize,
    /// Number of affine layers `L`.
    pub layers: usize,
    /// Encoding bands `K`.
    pub bands: usize,
    pub pretrain_lr: f64,
    pub pretrain_epochs: usize,
    pub finetune_lr: f64,
    pub finetune_epochs: usize,
    /// Final learning rate as a fraction of the initial one.
    pub final_lr_ratio: f64,
    /// Fine-tuning epochs over which the learning rate ramps up linearly.
    pub warmup_epochs: usize,
    pub loss: KernelFamily,
    pub gamma: Option<Vec<f64>>,
    pub prefix: PrefixScheme,
    /// Pretraining target: `sobol` or `halton`.
    pub reference: SequenceKind,
    pub burn_in: u64,
    pub seed: u64,
}

const KEYS: [&str; 17] = [
    "dim",
    "n_points",
    "hidden",
    "layers",
    "bands",
    "pretrain_lr",
    "pretrain_epochs",
    "finetune_lr",
    "finetune_epochs",
    "final_lr_ratio",
    "warmup_epochs",
    "loss",
    "gamma",
    "prefix",
    "reference",
    "burn_in",
    "seed",
];

impl TrainConfig {
    /// Tuned defaults for `loss`: architecture, learning rates and decay
    /// ratio, 2000 + 2000 epochs with a 100-epoch fine-tuning warmup,
    /// Sobol' reference with burn-in 128.
    ///
    /// The `ext`, `per` and `asd` families have no tuned values and use
    /// those of `sym`.
    pub fn for_loss(loss: KernelFamily, dim: usize, n_points: usize) -> Self {
        let (hidden, layers, bands, pretrain_lr, finetune_lr, final_lr_ratio) = match loss {
            KernelFamily::Star => (512, 5, 64, 1.38e-3, 3.52e-4, 4.39e-2),
            KernelFamily::Ctr => (768, 7, 32, 2.85e-3, 4.14e-3, 1.14e-1),
            KernelFamily::Sym | KernelFamily::Ext | KernelFamily::Per | KernelFamily::Asd => {
                (768, 7, 64, 2.61e-3, 5.04e-3, 3.02e-2)
            }
        };
        TrainConfig {
            dim,
            n_points,
            hidden,
            layers,
            bands,
            pretrain_lr,
            pretrain_epochs: 2000,
            finetune_lr,
            finetune_epochs: 2000,
            final_lr_ratio,
            warmup_epochs: 100,
            loss,
            gamma: None,
            prefix: PrefixScheme::Uniform,
            reference: SequenceKind::Sobol,
            burn_in: 128,
            seed: 0,
        }
    }

    /// Checks the fields the training loops rely on. Learning rates may be
    /// zero here; [`validate`](Self::validate) requires them positive.
    pub fn validate_shape(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::Config(m.to_string()));
        if self.dim == 0 || self.hidden == 0 || self.layers == 0 || self.bands == 0 {
            return bad("dim, hidden, layers and bands must be positive");
        }
        if self.n_points < 2 {
            return bad("n_points must be at least 2");
        }
        if !matches!(self.reference, SequenceKind::Sobol | SequenceKind::Halton) {
            return bad("reference must be sobol or halton");
        }
        if !(self.final_lr_ratio > 0.0 && self.final_lr_ratio <= 1.0) {
            return bad("final_lr_ratio must lie in (0, 1]");
        }
        if !(self.pretrain_lr >= 0.0 && self.finetune_lr >= 0.0)
            || !self.pretrain_lr.is_finite()
            || !self.finetune_lr.is_finite()
        {
            return bad("learning rates must be finite and nonnegative");
        }
        if let Some(g) = &self.gamma {
            if g.len() != self.dim {
                return Err(TrainError::Config(format!(
                    "gamma has {} entries, dim is {}",
                    g.len(),
                    self.dim
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        self.validate_shape()?;
        if !(self.pretrain_lr > 0.0 && self.finetune_lr > 0.0) {
            return Err(TrainError::Config("learning rates must be positive".to_string()));
        }
        if self.finetune_epochs == 0 {
            return Err(TrainError::Config("finetune_epochs must be at least 1".to_string()));
        }
        Ok(())
    }

    /// Every field as `(key, value)` text, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter().map(|&k| (k, self.get(k).expect("known key"))).collect()
    }

    pub fn keys() -> &'static [&'static str] {
        &KEYS
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "dim" => self.dim.to_string(),
            "n_points" => self.n_points.to_string(),
            "hidden" => self.hidden.to_string(),
            "layers" => self.layers.to_string(),
            "bands" => self.bands.to_string(),
            "pretrain_lr" => format!("{:e}", self.pretrain_lr),
            "pretrain_epochs" => self.pretrain_epochs.to_string(),
            "finetune_lr" => format!("{:e}", self.finetune_lr),
            "finetune_epochs" => self.finetune_epochs.to_string(),
            "final_lr_ratio" => format!("{:e}", self.final_lr_ratio),
            "warmup_epochs" => self.warmup_epochs.to_string(),
            "loss" => self.loss.name().to_string(),
            "gamma" => match &self.gamma {
                None => "none".to_string(),
                Some(g) => g.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(","),
            },
            "prefix" => match &self.prefix {
                PrefixScheme::Custom(w) => w.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(","),
                other => other.name().to_string(),
            },
            "reference" => self.reference.name().to_string(),
            "burn_in" => self.burn_in.to_string(),
            "seed" => self.seed.to_string(),
            _ => return None,
        })
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        fn num<T: core::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("{key}: cannot parse `{v}`"))
        }
        match key {
            "dim" => self.dim = num(key, value)?,
            "n_points" => self.n_points = num(key, value)?,
            "hidden" => self.hidden = num(key, value)?,
            "layers" => self.layers = num(key, value)?,
            "bands" => self.bands = num(key, value)?,
            "pretrain_lr" => self.pretrain_lr = num(key, value)?,
            "pretrain_epochs" => self.pretrain_epochs = num(key, value)?,
            "finetune_lr" => self.finetune_lr = num(key, value)?,
            "finetune_epochs" => self.finetune_epochs = num(key, value)?,
            "final_lr_ratio" => self.final_lr_ratio = num(key, value)?,
            "warmup_epochs" => self.warmup_epochs = num(key, value)?,
            "loss" => self.loss = value.parse()?,
            "gamma" => {
                self.gamma = if value == "none" {
                    None
                } else {
                    Some(value.split(',').map(|t| num(key, t.trim())).collect::<Result<_, _>>()?)
                }
            }
            "prefix" => self.prefix = value.parse()?,
            "reference" => self.reference = value.parse()?,
            "burn_in" => self.burn_in = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            _ => return Err(format!("unknown training key `{key}`")),
        }
        Ok(())
    }
}
