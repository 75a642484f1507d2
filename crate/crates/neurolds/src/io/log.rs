use std::io::Write;
use std::path::Path;

use neurolds_core::trainer::TrainLog;

use super::IoError;

/// CSV with header `stage,epoch,loss,lr,seconds`.
pub fn write_log_to<W: Write>(w: W, log: &TrainLog) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["stage", "epoch", "loss", "lr", "seconds"])?;
    for r in &log.records {
        out.write_record([
            r.stage.name().to_string(),
            r.epoch.to_string(),
            format!("{:.16e}", r.loss),
            format!("{:.16e}", r.lr),
            format!("{:.3}", r.seconds),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_log(path: &Path, log: &TrainLog) -> Result<(), IoError> {
    let file = std::fs::File::create(path).map_err(|e| IoError::file(path, e))?;
    write_log_to(std::io::BufWriter::new(file), log)
}
