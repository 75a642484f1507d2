use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{TrainConfig, TrainError};
use crate::discrepancy::{prefix_loss_and_grad, DiscError, KernelSpec, PrefixWeights};
use crate::hash::split_seed;
use crate::neuralnet::{AdamState, EncodingConfig, MlpModel};
use crate::points::PointBuffer;
use crate::seq::{Sequence, SequenceSpec};

/// Fine-tuning aborts once every point fits in a box of smaller volume.
pub const COLLAPSE_VOLUME: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Pretrain,
    Finetune,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Pretrain => "pretrain",
            Stage::Finetune => "finetune",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRecord {
    pub stage: Stage,
    pub epoch: usize,
    pub loss: f64,
    pub lr: f64,
    pub seconds: f64,
}

/// Per-epoch records plus warnings raised along the way.
///
/// Epoch `e < T` records the loss before the `e`-th update; epoch `T` is
/// the loss after the last update.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub records: Vec<LogRecord>,
    pub warnings: Vec<String>,
}

impl TrainLog {
    pub fn stage(&self, stage: Stage) -> impl Iterator<Item = &LogRecord> + '_ {
        self.records.iter().filter(move |r| r.stage == stage)
    }

    pub fn last_loss(&self, stage: Stage) -> Option<f64> {
        self.stage(stage).last().map(|r| r.loss)
    }

    fn extend(&mut self, other: TrainLog) {
        self.records.extend(other.records);
        self.warnings.extend(other.warnings);
    }
}

/// Elapsed-time source for the log. `no_std` builds use [`NoClock`].
pub trait Clock {
    fn seconds(&self) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn seconds(&self) -> f64 {
        0.0
    }
}

/// Computes the prefix loss and its gradient with respect to the points.
pub trait LossEvaluator {
    fn loss_and_grad(
        &self,
        spec: &KernelSpec,
        weights: &PrefixWeights,
        points: &PointBuffer,
    ) -> Result<(f64, Vec<f64>), DiscError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialEvaluator;

impl LossEvaluator for SequentialEvaluator {
    fn loss_and_grad(
        &self,
        spec: &KernelSpec,
        weights: &PrefixWeights,
        points: &PointBuffer,
    ) -> Result<(f64, Vec<f64>), DiscError> {
        prefix_loss_and_grad(spec, weights, points)
    }
}

/// Model, log and the loss of the returned model.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: MlpModel,
    pub log: TrainLog,
    pub loss: f64,
}

/// Cosine decay from `base` at epoch 0 to `base · ratio` at epoch
/// `total − 1`.
pub fn cosine_lr(base: f64, ratio: f64, epoch: usize, total: usize) -> f64 {
    if total <= 1 {
        return base;
    }
    let t = epoch.min(total - 1) as f64 / (total - 1) as f64;
    let floor = base * ratio;
    floor + (base - floor) * 0.5 * (1.0 + libm::cos(core::f64::consts::PI * t))
}

/// Linear ramp `min(1, (epoch + 1) / warmup)`; 1 when `warmup == 0`.
pub fn warmup_factor(warmup: usize, epoch: usize) -> f64 {
    if warmup == 0 {
        1.0
    } else {
        ((epoch + 1) as f64 / warmup as f64).min(1.0)
    }
}

/// Training driver with pluggable timing and loss evaluation.
pub struct Trainer<'a> {
    pub clock: &'a dyn Clock,
    pub evaluator: &'a dyn LossEvaluator,
}

impl fmt::Debug for Trainer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trainer").finish_non_exhaustive()
    }
}

impl Default for Trainer<'static> {
    fn default() -> Self {
        Trainer {
            clock: &NoClock,
            evaluator: &SequentialEvaluator,
        }
    }
}

fn indices(n: usize) -> Vec<u64> {
    (1..=n as u64).collect()
}

fn stage_notes(cfg: &TrainConfig) -> Vec<(String, String)> {
    cfg.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl Trainer<'_> {
    /// Freshly initialised network for `cfg`.
    pub fn init_model(&self, cfg: &TrainConfig) -> Result<MlpModel, TrainError> {
        cfg.validate_shape()?;
        let enc = EncodingConfig::new(cfg.bands, cfg.n_points as u64)?;
        let mut model = MlpModel::init(enc, cfg.hidden, cfg.layers, cfg.dim, split_seed(cfg.seed, 0))?;
        model.meta.seed = cfg.seed;
        model.meta.burn_in = cfg.burn_in;
        Ok(model)
    }

    /// Pretraining targets: reference rows at raw indices
    /// `burn_in .. burn_in + N`.
    pub fn targets(&self, cfg: &TrainConfig) -> Result<PointBuffer, TrainError> {
        let spec = SequenceSpec::new(cfg.reference, cfg.dim).with_burn_in(cfg.burn_in);
        Ok(Sequence::new(&spec)?.generate(cfg.n_points)?)
    }

    fn check_model(cfg: &TrainConfig, model: &MlpModel) -> Result<(), TrainError> {
        if model.output_dim() != cfg.dim || model.encoding().n_norm() != cfg.n_points as u64 {
            return Err(TrainError::Config(format!(
                "model (d = {}, N = {}) does not match the configuration (d = {}, N = {})",
                model.output_dim(),
                model.encoding().n_norm(),
                cfg.dim,
                cfg.n_points
            )));
        }
        Ok(())
    }

    /// Minimises `(1/N) Σ ‖f(i) − q_i‖²`. Returns the best checkpoint.
    pub fn pretrain(&self, cfg: &TrainConfig, mut model: MlpModel) -> Result<TrainOutcome, TrainError> {
        cfg.validate_shape()?;
        Self::check_model(cfg, &model)?;
        let targets = self.targets(cfg)?;
        let idx = indices(cfg.n_points);
        let n = cfg.n_points as f64;
        let mut adam = AdamState::new(&model);
        let mut log = TrainLog::default();
        let mut best: Option<(f64, MlpModel)> = None;
        let epochs = cfg.pretrain_epochs;

        for epoch in 0..=epochs {
            let cache = model.forward_cached(&idx);
            let diff: Vec<f64> = cache
                .output()
                .coords()
                .iter()
                .zip(targets.coords())
                .map(|(x, q)| x - q)
                .collect();
            let mse = diff.iter().map(|e| e * e).sum::<f64>() / n;
            let lr = cosine_lr(cfg.pretrain_lr, cfg.final_lr_ratio, epoch, epochs);
            if !mse.is_finite() {
                return Err(diverged(
                    Stage::Pretrain,
                    epoch,
                    "non-finite loss".to_string(),
                    best,
                    model,
                    log,
                ));
            }
            log.records.push(LogRecord {
                stage: Stage::Pretrain,
                epoch,
                loss: mse,
                lr,
                seconds: self.clock.seconds(),
            });
            if best.as_ref().map_or(true, |(b, _)| mse < *b) {
                best = Some((mse, model.clone()));
            }
            if epoch == epochs {
                break;
            }
            let upstream: Vec<f64> = diff.iter().map(|e| 2.0 * e / n).collect();
            let grads = model.backward(&cache, &upstream)?;
            if let Err(e) = adam.step(&mut model, &grads, lr) {
                return Err(diverged(Stage::Pretrain, epoch, e.to_string(), best, model, log));
            }
        }
        let (loss, mut model) = best.expect("at least one epoch is evaluated");
        model.meta.burn_in = cfg.burn_in;
        model.meta.seed = cfg.seed;
        Ok(TrainOutcome { model, log, loss })
    }

    /// Full-batch Adam on the prefix loss: linear warmup, then cosine decay.
    /// Returns the best checkpoint.
    pub fn finetune(&self, cfg: &TrainConfig, mut model: MlpModel) -> Result<TrainOutcome, TrainError> {
        cfg.validate_shape()?;
        Self::check_model(cfg, &model)?;
        let spec = match &cfg.gamma {
            Some(g) => KernelSpec::weighted(cfg.loss, g.clone())?,
            None => KernelSpec::new(cfg.loss),
        };
        let weights = PrefixWeights::from_scheme(&cfg.prefix, cfg.n_points)?;
        let idx = indices(cfg.n_points);
        let mut adam = AdamState::new(&model);
        let mut log = TrainLog::default();
        let mut best: Option<(f64, MlpModel)> = None;
        let epochs = cfg.finetune_epochs;

        for epoch in 0..=epochs {
            let cache = model.forward_cached(&idx);
            let volume = cache.output().bounding_box_volume();
            if volume < COLLAPSE_VOLUME {
                return Err(TrainError::Collapsed { epoch, volume, log });
            }
            let lr =
                cosine_lr(cfg.finetune_lr, cfg.final_lr_ratio, epoch, epochs) * warmup_factor(cfg.warmup_epochs, epoch);
            let (loss, grad) = match self.evaluator.loss_and_grad(&spec, &weights, cache.output()) {
                Ok(v) if v.0.is_finite() => v,
                Ok(_) => {
                    return Err(diverged(
                        Stage::Finetune,
                        epoch,
                        "non-finite loss".to_string(),
                        best,
                        model,
                        log,
                    ))
                }
                Err(e) => return Err(diverged(Stage::Finetune, epoch, e.to_string(), best, model, log)),
            };
            log.records.push(LogRecord {
                stage: Stage::Finetune,
                epoch,
                loss,
                lr,
                seconds: self.clock.seconds(),
            });
            if best.as_ref().map_or(true, |(b, _)| loss < *b) {
                best = Some((loss, model.clone()));
            }
            if epoch == epochs {
                break;
            }
            let grads = model.backward(&cache, &grad)?;
            if let Err(e) = adam.step(&mut model, &grads, lr) {
                return Err(diverged(Stage::Finetune, epoch, e.to_string(), best, model, log));
            }
        }
        let (loss, mut model) = best.expect("at least one epoch is evaluated");
        model.meta.loss = Some(cfg.loss);
        model.meta.burn_in = cfg.burn_in;
        model.meta.seed = cfg.seed;
        model.meta.notes = stage_notes(cfg);
        Ok(TrainOutcome { model, log, loss })
    }

    /// Initialise, pretrain, then fine-tune.
    pub fn train_full(&self, cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
        cfg.validate()?;
        let model = self.init_model(cfg)?;
        let mut log = TrainLog::default();
        let model = if cfg.pretrain_epochs == 0 {
            log.warnings.push(
                "pretraining disabled: fine-tuning from a random initialisation is unsupported and tends to collapse \
                 the points into a corner"
                    .to_string(),
            );
            model
        } else {
            let pre = self.pretrain(cfg, model)?;
            log.extend(pre.log);
            pre.model
        };
        match self.finetune(cfg, model) {
            Ok(mut out) => {
                log.extend(core::mem::take(&mut out.log));
                out.log = log;
                Ok(out)
            }
            Err(TrainError::Collapsed { epoch, volume, log: fl }) => {
                log.extend(fl);
                Err(TrainError::Collapsed { epoch, volume, log })
            }
            Err(TrainError::Diverged {
                stage,
                epoch,
                reason,
                checkpoint,
                log: fl,
            }) => {
                log.extend(fl);
                Err(TrainError::Diverged {
                    stage,
                    epoch,
                    reason,
                    checkpoint,
                    log,
                })
            }
            Err(e) => Err(e),
        }
    }
}

fn diverged(
    stage: Stage,
    epoch: usize,
    reason: String,
    best: Option<(f64, MlpModel)>,
    current: MlpModel,
    log: TrainLog,
) -> TrainError {
    TrainError::Diverged {
        stage,
        epoch,
        reason,
        checkpoint: Box::new(best.map_or(current, |(_, m)| m)),
        log,
    }
}

/// [`Trainer::pretrain`] from a fresh initialisation, single-threaded.
pub fn pretrain(cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    let t = Trainer::default();
    let model = t.init_model(cfg)?;
    t.pretrain(cfg, model)
}

/// [`Trainer::finetune`], single-threaded.
pub fn finetune(model: MlpModel, cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    Trainer::default().finetune(cfg, model)
}

/// [`Trainer::train_full`], single-threaded.
pub fn train_full(cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    Trainer::default().train_full(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::{prefix_loss, KernelFamily};

    fn small(loss: KernelFamily) -> TrainConfig {
        let mut c = TrainConfig::for_loss(loss, 2, 32);
        c.hidden = 16;
        c.layers = 3;
        c.bands = 4;
        c.pretrain_epochs = 60;
        c.finetune_epochs = 40;
        c.seed = 11;
        c
    }

    #[test]
    fn cosine_endpoints() {
        assert_eq!(cosine_lr(1.0, 0.1, 0, 10), 1.0);
        assert!((cosine_lr(1.0, 0.1, 9, 10) - 0.1).abs() < 1e-15);
        assert!((cosine_lr(1.0, 0.1, 50, 10) - 0.1).abs() < 1e-15);
        let mid = cosine_lr(2.0, 0.5, 5, 11);
        assert!((mid - 1.5).abs() < 1e-12);
        assert_eq!(warmup_factor(0, 0), 1.0);
        assert_eq!(warmup_factor(4, 0), 0.25);
        assert_eq!(warmup_factor(4, 3), 1.0);
        assert_eq!(warmup_factor(4, 100), 1.0);
    }

    #[test]
    fn zero_pretrain_epochs_returns_initialisation() {
        let mut cfg = small(KernelFamily::Sym);
        cfg.pretrain_epochs = 0;
        let t = Trainer::default();
        let init = t.init_model(&cfg).unwrap();
        let out = t.pretrain(&cfg, init.clone()).unwrap();
        assert_eq!(out.model.layers(), init.layers());
        assert_eq!(out.log.records.len(), 1);
    }

    #[test]
    fn pretraining_reduces_error_and_is_deterministic() {
        let mut cfg = small(KernelFamily::Sym);
        cfg.pretrain_epochs = 400;
        let a = pretrain(&cfg).unwrap();
        let b = pretrain(&cfg).unwrap();
        assert_eq!(a.model, b.model);
        let first = a.log.records[0].loss;
        assert!(a.loss < 0.25 * first, "{} vs {first}", a.loss);
    }

    #[test]
    fn zero_rate_finetune_keeps_model() {
        let mut cfg = small(KernelFamily::Star);
        cfg.finetune_lr = 0.0;
        let t = Trainer::default();
        let init = t.init_model(&cfg).unwrap();
        let out = t.finetune(&cfg, init.clone()).unwrap();
        assert_eq!(out.model.layers(), init.layers());
        let losses: Vec<f64> = out.log.stage(Stage::Finetune).map(|r| r.loss).collect();
        assert!(losses.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn finetune_checkpoint_contract() {
        let cfg = small(KernelFamily::Sym);
        let out = train_full(&cfg).unwrap();
        let fine: Vec<&LogRecord> = out.log.stage(Stage::Finetune).collect();
        assert_eq!(fine.len(), cfg.finetune_epochs + 1);
        assert!(fine.iter().all(|r| out.loss <= r.loss));
        assert!(out.loss <= fine[0].loss);
        let pts = out.model.forward(&indices(cfg.n_points));
        let spec = KernelSpec::new(cfg.loss);
        let w = PrefixWeights::uniform(cfg.n_points);
        let again = prefix_loss(&spec, &w, &pts).unwrap();
        assert!((again - out.loss).abs() <= 1e-12 * out.loss);
        assert_eq!(out.model.meta.loss, Some(KernelFamily::Sym));
        assert!(out.log.warnings.is_empty());
        assert_eq!(out.log.stage(Stage::Pretrain).count(), cfg.pretrain_epochs + 1);
    }

    #[test]
    fn direct_finetune_is_flagged() {
        let mut cfg = small(KernelFamily::Sym);
        cfg.pretrain_epochs = 0;
        cfg.finetune_epochs = 3;
        match train_full(&cfg) {
            Ok(out) => assert_eq!(out.log.warnings.len(), 1),
            Err(TrainError::Collapsed { log, .. }) => assert_eq!(log.warnings.len(), 1),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn collapse_is_detected() {
        let cfg = small(KernelFamily::Sym);
        let mut model = Trainer::default().init_model(&cfg).unwrap();
        for l in model.layers_mut() {
            l.weights.iter_mut().for_each(|w| *w = 0.0);
        }
        match finetune(model, &cfg) {
            Err(TrainError::Collapsed { epoch: 0, volume, .. }) => assert_eq!(volume, 0.0),
            other => panic!("expected collapse, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_model_rejected() {
        let cfg = small(KernelFamily::Sym);
        let mut other = cfg.clone();
        other.dim = 3;
        let model = Trainer::default().init_model(&other).unwrap();
        assert!(matches!(finetune(model, &cfg), Err(TrainError::Config(_))));
    }

    struct Failing;
    impl LossEvaluator for Failing {
        fn loss_and_grad(
            &self,
            _: &KernelSpec,
            _: &PrefixWeights,
            p: &PointBuffer,
        ) -> Result<(f64, Vec<f64>), DiscError> {
            Ok((f64::NAN, alloc::vec![0.0; p.coords().len()]))
        }
    }

    #[test]
    fn divergence_returns_checkpoint() {
        let cfg = small(KernelFamily::Sym);
        let t = Trainer {
            clock: &NoClock,
            evaluator: &Failing,
        };
        let model = t.init_model(&cfg).unwrap();
        match t.finetune(&cfg, model.clone()) {
            Err(TrainError::Diverged {
                stage,
                epoch,
                checkpoint,
                ..
            }) => {
                assert_eq!((stage, epoch), (Stage::Finetune, 0));
                assert_eq!(checkpoint.layers(), model.layers());
            }
            other => panic!("{other:?}"),
        }
    }
}
