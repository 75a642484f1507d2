use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use neurolds_core::PointBuffer;

use super::IoError;

/// Magic bytes opening a binary point file.
pub const POINTS_MAGIC: [u8; 4] = *b"LDSP";
pub const POINTS_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    /// Header `x1,…,xd`, one point per row, 17 significant digits.
    Csv,
    /// 16-byte header (magic, version, n, d as little-endian u32) followed
    /// by `n·d` little-endian f64 in row-major order.
    Binary,
}

impl PointFormat {
    /// `.bin` means binary, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => PointFormat::Binary,
            _ => PointFormat::Csv,
        }
    }
}

pub fn write_points_csv<W: Write>(w: W, points: &PointBuffer) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record((1..=points.dim()).map(|j| format!("x{j}")))?;
    for row in points.rows() {
        out.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_points_csv<R: Read>(r: R) -> Result<PointBuffer, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut coords = Vec::new();
    let mut dim = None;
    let mut n = 0;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if line == 0 => continue,
            Err(_) => return Err(IoError::Format(format!("line {}: non-numeric value", line + 1))),
        };
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(IoError::Format(format!(
                    "line {}: expected {d} columns, found {}",
                    line + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        coords.extend(row);
        n += 1;
    }
    let dim = dim.ok_or_else(|| IoError::Format("no points in file".into()))?;
    PointBuffer::from_flat(n, dim, coords).map_err(|e| IoError::Format(e.to_string()))
}

pub fn write_points_binary<W: Write>(mut w: W, points: &PointBuffer) -> Result<(), IoError> {
    let to_u32 = |v: usize| u32::try_from(v).map_err(|_| IoError::Format("point count exceeds u32".into()));
    w.write_all(&POINTS_MAGIC)?;
    w.write_all(&POINTS_VERSION.to_le_bytes())?;
    w.write_all(&to_u32(points.n_points())?.to_le_bytes())?;
    w.write_all(&to_u32(points.dim())?.to_le_bytes())?;
    for v in points.coords() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_binary<R: Read>(mut r: R) -> Result<PointBuffer, IoError> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if header[..4] != POINTS_MAGIC {
        return Err(IoError::Format("not a binary point file".into()));
    }
    let word = |k: usize| u32::from_le_bytes(header[4 * k..4 * k + 4].try_into().unwrap());
    if word(1) != POINTS_VERSION {
        return Err(IoError::Format(format!("unsupported point file version {}", word(1))));
    }
    let (n, d) = (word(2) as usize, word(3) as usize);
    let mut bytes = vec![0u8; n * d * 8];
    r.read_exact(&mut bytes)?;
    let coords = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    PointBuffer::from_flat(n, d, coords).map_err(|e| IoError::Format(e.to_string()))
}

pub fn write_points(path: &Path, points: &PointBuffer) -> Result<(), IoError> {
    let file = BufWriter::new(File::create(path).map_err(|e| IoError::file(path, e))?);
    match PointFormat::from_path(path) {
        PointFormat::Csv => write_points_csv(file, points),
        PointFormat::Binary => write_points_binary(file, points),
    }
}

pub fn read_points(path: &Path) -> Result<PointBuffer, IoError> {
    let file = BufReader::new(File::open(path).map_err(|e| IoError::file(path, e))?);
    match PointFormat::from_path(path) {
        PointFormat::Csv => read_points_csv(file),
        PointFormat::Binary => read_points_binary(file),
    }
}
