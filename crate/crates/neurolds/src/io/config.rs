use std::path::Path;

use neurolds_core::trainer::TrainConfig;

use super::IoError;

/// Applies `key: value` lines on top of `base`. Blank lines and lines
/// starting with `#` are ignored; every key must name a [`TrainConfig`]
/// field.
pub fn parse_train_config(text: &str, mut base: TrainConfig) -> Result<TrainConfig, IoError> {
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once(':')
            .ok_or_else(|| IoError::Format(format!("line {}: expected `key: value`", n + 1)))?;
        base.set(k.trim(), v)
            .map_err(|e| IoError::Format(format!("line {}: {e}", n + 1)))?;
    }
    Ok(base)
}

pub fn read_train_config(path: &Path, base: TrainConfig) -> Result<TrainConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_train_config(&text, base)
}

/// Every field, one `key: value` line each.
pub fn write_train_config(cfg: &TrainConfig) -> String {
    cfg.entries().into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}
