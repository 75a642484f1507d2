//! File formats: point sets (CSV and binary), model files with a text
//! sidecar, training configurations, training logs and Sobol' direction
//! tables.

mod config;
mod log;
mod model;
mod points;

pub use config::{parse_train_config, read_train_config, write_train_config};
pub use log::{write_log, write_log_to};
pub use model::{load_model, read_model_from, save_model, sidecar_path, write_model_to, MODEL_MAGIC, MODEL_VERSION};
pub use points::{
    read_points, read_points_binary, read_points_csv, write_points, write_points_binary, write_points_csv, PointFormat,
    POINTS_MAGIC, POINTS_VERSION,
};

use std::path::Path;

use neurolds_core::seq::DirectionTable;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Reads a direction-number file in the standard
/// `d s a m_i` column layout, keeping dimensions up to `max_dim`.
pub fn read_direction_table(path: &Path, max_dim: Option<usize>) -> Result<DirectionTable, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    DirectionTable::parse(&text, max_dim).map_err(|e| IoError::Format(format!("{}: {e}", path.display())))
}
