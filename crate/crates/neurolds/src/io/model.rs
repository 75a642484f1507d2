use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use neurolds_core::neuralnet::{EncodingConfig, Layer, MlpModel, ModelMeta};
use neurolds_core::KernelFamily;

use super::IoError;

/// Magic bytes opening a model file.
pub const MODEL_MAGIC: [u8; 8] = *b"NLDSMODL";
pub const MODEL_VERSION: u32 = 1;

const NO_LOSS: u32 = u32::MAX;

/// `model.bin` → `model.bin.meta`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Binary layout, all little-endian:
///
/// ```text
/// magic[8] version:u32 K:u32 N_norm:u64 d:u32 L:u32 H:u32 loss:u32
/// burn_in:u64 seed:u64
/// per layer: inputs:u32 outputs:u32 weights:f64[outputs·inputs] bias:f64[outputs]
/// ```
///
/// `loss` is the kernel family code, or `0xffffffff` for an untrained model.
pub fn write_model_to<W: Write>(mut w: W, model: &MlpModel) -> Result<(), IoError> {
    let enc = model.encoding();
    let u32_of = |v: usize| u32::try_from(v).map_err(|_| IoError::Format("model dimension exceeds u32".into()));
    w.write_all(&MODEL_MAGIC)?;
    w.write_all(&MODEL_VERSION.to_le_bytes())?;
    w.write_all(&u32_of(enc.bands())?.to_le_bytes())?;
    w.write_all(&enc.n_norm().to_le_bytes())?;
    w.write_all(&u32_of(model.output_dim())?.to_le_bytes())?;
    w.write_all(&u32_of(model.n_layers())?.to_le_bytes())?;
    w.write_all(&u32_of(model.hidden_width())?.to_le_bytes())?;
    let loss = model.meta.loss.map_or(NO_LOSS, |f| u32::from(f.code()));
    w.write_all(&loss.to_le_bytes())?;
    w.write_all(&model.meta.burn_in.to_le_bytes())?;
    w.write_all(&model.meta.seed.to_le_bytes())?;
    for layer in model.layers() {
        w.write_all(&u32_of(layer.inputs)?.to_le_bytes())?;
        w.write_all(&u32_of(layer.outputs)?.to_le_bytes())?;
        for v in layer.weights.iter().chain(&layer.bias) {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

struct Cursor<R> {
    inner: R,
}

impl<R: Read> Cursor<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N], IoError> {
        let mut b = [0u8; N];
        self.inner
            .read_exact(&mut b)
            .map_err(|_| IoError::Format("model file is truncated".into()))?;
        Ok(b)
    }
    fn u32(&mut self) -> Result<u32, IoError> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64, IoError> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, IoError> {
        (0..n).map(|_| Ok(f64::from_le_bytes(self.bytes()?))).collect()
    }
}

/// Reads the binary part of a model; metadata notes are left empty.
pub fn read_model_from<R: Read>(r: R) -> Result<MlpModel, IoError> {
    let mut c = Cursor { inner: r };
    if c.bytes::<8>()? != MODEL_MAGIC {
        return Err(IoError::Format("not a model file".into()));
    }
    let version = c.u32()?;
    if version != MODEL_VERSION {
        return Err(IoError::Format(format!("unsupported model version {version}")));
    }
    let bands = c.u32()? as usize;
    let n_norm = c.u64()?;
    let dim = c.u32()? as usize;
    let n_layers = c.u32()? as usize;
    let hidden = c.u32()? as usize;
    let loss = match c.u32()? {
        NO_LOSS => None,
        code => Some(
            u8::try_from(code)
                .ok()
                .and_then(KernelFamily::from_code)
                .ok_or_else(|| IoError::Format(format!("unknown loss code {code}")))?,
        ),
    };
    let burn_in = c.u64()?;
    let seed = c.u64()?;
    let encoding = EncodingConfig::new(bands, n_norm).map_err(|e| IoError::Format(e.to_string()))?;
    let expected = MlpModel::layer_dims_for(&encoding, hidden, n_layers, dim);
    let mut layers = Vec::with_capacity(n_layers);
    for l in 0..n_layers {
        let inputs = c.u32()? as usize;
        let outputs = c.u32()? as usize;
        if inputs != expected[l] || outputs != expected[l + 1] {
            return Err(IoError::Format(format!(
                "layer {l} is {inputs}→{outputs}, header implies {}→{}",
                expected[l],
                expected[l + 1]
            )));
        }
        let weights = c.f64s(inputs * outputs)?;
        let bias = c.f64s(outputs)?;
        layers.push(Layer {
            inputs,
            outputs,
            weights,
            bias,
        });
    }
    let meta = ModelMeta {
        loss,
        burn_in,
        seed,
        notes: Vec::new(),
    };
    MlpModel::from_parts(encoding, layers, meta).map_err(|e| IoError::Format(e.to_string()))
}

fn sidecar_text(model: &MlpModel) -> String {
    let enc = model.encoding();
    let mut s = String::new();
    let mut kv = |k: &str, v: String| s.push_str(&format!("{k}: {v}\n"));
    kv("format_version", MODEL_VERSION.to_string());
    kv("bands", enc.bands().to_string());
    kv("n_norm", enc.n_norm().to_string());
    kv("index_base", "1".into());
    kv("dim", model.output_dim().to_string());
    kv("layers", model.n_layers().to_string());
    kv("hidden", model.hidden_width().to_string());
    kv(
        "layer_dims",
        model
            .layer_dims()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    kv("parameters", model.param_count().to_string());
    kv("loss", model.meta.loss.map_or("none".into(), |f| f.name().to_string()));
    kv("burn_in", model.meta.burn_in.to_string());
    kv("seed", model.meta.seed.to_string());
    for (k, v) in &model.meta.notes {
        kv(&format!("train.{k}"), v.clone());
    }
    s
}

/// Writes `path` (binary) and `path.meta` (human-readable `key: value`).
pub fn save_model(path: &Path, model: &MlpModel) -> Result<(), IoError> {
    let file = BufWriter::new(File::create(path).map_err(|e| IoError::file(path, e))?);
    write_model_to(file, model)?;
    let side = sidecar_path(path);
    std::fs::write(&side, sidecar_text(model)).map_err(|e| IoError::file(&side, e))?;
    Ok(())
}

/// Reads a model and, if present, the `train.*` notes of its sidecar.
pub fn load_model(path: &Path) -> Result<MlpModel, IoError> {
    let file = BufReader::new(File::open(path).map_err(|e| IoError::file(path, e))?);
    let mut model = read_model_from(file)?;
    if let Ok(text) = std::fs::read_to_string(sidecar_path(path)) {
        model.meta.notes = text
            .lines()
            .filter_map(|l| l.split_once(':'))
            .filter_map(|(k, v)| {
                k.trim()
                    .strip_prefix("train.")
                    .map(|k| (k.to_string(), v.trim().to_string()))
            })
            .collect();
    }
    Ok(model)
}
