//! Two-stage training: MSE regression onto a classical reference sequence,
//! then fine-tuning on the prefix discrepancy loss.

mod config;
mod run;

pub use config::TrainConfig;
pub use run::{
    cosine_lr, finetune, pretrain, train_full, warmup_factor, Clock, LogRecord, LossEvaluator, NoClock,
    SequentialEvaluator, Stage, TrainLog, TrainOutcome, Trainer, COLLAPSE_VOLUME,
};

use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

use crate::discrepancy::DiscError;
use crate::neuralnet::{MlpModel, NnError};
use crate::seq::SeqError;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Sequence(#[from] SeqError),
    #[error(transparent)]
    Discrepancy(#[from] DiscError),
    #[error(transparent)]
    Network(#[from] NnError),
    #[error("{stage} diverged at epoch {epoch}: {reason}")]
    Diverged {
        stage: Stage,
        epoch: usize,
        reason: String,
        /// Best model seen before the failure.
        checkpoint: Box<MlpModel>,
        log: TrainLog,
    },
    #[error("points collapsed at fine-tuning epoch {epoch}: bounding box volume {volume:e}")]
    Collapsed { epoch: usize, volume: f64, log: TrainLog },
}
