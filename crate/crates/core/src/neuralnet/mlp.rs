use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EncodingConfig, NnError};
use crate::discrepancy::KernelFamily;
use crate::points::PointBuffer;

/// Largest double below one; sigmoid outputs are clamped into the open
/// unit interval.
const OUT_MAX: f64 = 1.0 - f64::EPSILON / 2.0;
const OUT_MIN: f64 = f64::MIN_POSITIVE;

/// One affine layer `z = W a + b` with `W` stored row-major
/// (`outputs × inputs`).
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Layer {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    fn check(&self, layer: usize) -> Result<(), NnError> {
        if self.weights.len() != self.inputs * self.outputs {
            return Err(NnError::LayerShape {
                layer,
                expected: self.inputs * self.outputs,
                found: self.weights.len(),
            });
        }
        if self.bias.len() != self.outputs {
            return Err(NnError::LayerShape {
                layer,
                expected: self.outputs,
                found: self.bias.len(),
            });
        }
        Ok(())
    }

    /// `out[n] = W a[n] + b` for every row of the batch.
    fn apply(&self, input: &[f64], out: &mut [f64]) {
        for (a, z) in input.chunks_exact(self.inputs).zip(out.chunks_exact_mut(self.outputs)) {
            for (o, zo) in z.iter_mut().enumerate() {
                let w = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                let mut s = self.bias[o];
                for (wi, ai) in w.iter().zip(a) {
                    s += wi * ai;
                }
                *zo = s;
            }
        }
    }
}

/// Bookkeeping stored next to the parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelMeta {
    /// Discrepancy family of the fine-tuning loss, if trained.
    pub loss: Option<KernelFamily>,
    /// Burn-in of the pretraining reference.
    pub burn_in: u64,
    pub seed: u64,
    /// Free-form `key: value` records (stage configurations and the like).
    pub notes: Vec<(String, String)>,
}

/// Sinusoidal encoding followed by `L` affine layers: ReLU between layers,
/// sigmoid after the last.
///
/// The model consumes sequence-local indices starting at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    encoding: EncodingConfig,
    layers: Vec<Layer>,
    pub meta: ModelMeta,
}

/// Gradient with the same shape as the model's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub layers: Vec<Layer>,
}

impl MlpGrads {
    pub fn zeros_like(model: &MlpModel) -> Self {
        MlpGrads {
            layers: model.layers.iter().map(|l| Layer::zeros(l.inputs, l.outputs)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
    }

    pub fn scale(&mut self, c: f64) {
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|v| *v *= c);
        }
    }
}

/// Activations kept by [`MlpModel::forward_cached`] for the backward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    batch: usize,
    /// `acts[l]` is the input of layer `l` (the encoding for `l = 0`).
    acts: Vec<Vec<f64>>,
    output: PointBuffer,
}

impl ForwardCache {
    pub fn output(&self) -> &PointBuffer {
        &self.output
    }

    pub fn into_output(self) -> PointBuffer {
        self.output
    }

    pub fn batch(&self) -> usize {
        self.batch
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    let s = if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    };
    s.clamp(OUT_MIN, OUT_MAX)
}

impl MlpModel {
    /// Layer widths `[1+2K, H, …, H, d]` with `n_layers` affine layers.
    pub fn layer_dims_for(encoding: &EncodingConfig, hidden: usize, n_layers: usize, dim: usize) -> Vec<usize> {
        let mut dims = vec![encoding.width()];
        dims.extend(core::iter::repeat(hidden).take(n_layers.saturating_sub(1)));
        dims.push(dim);
        dims
    }

    /// Glorot-uniform weights `±√(6/(fan_in+fan_out))` drawn from ChaCha8
    /// seeded with `seed`; zero biases.
    pub fn init(
        encoding: EncodingConfig,
        hidden: usize,
        n_layers: usize,
        dim: usize,
        seed: u64,
    ) -> Result<Self, NnError> {
        if n_layers == 0 {
            return Err(NnError::NoLayers);
        }
        let dims = Self::layer_dims_for(&encoding, hidden, n_layers, dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = dims
            .windows(2)
            .map(|w| {
                let limit = libm::sqrt(6.0 / (w[0] + w[1]) as f64);
                let mut layer = Layer::zeros(w[0], w[1]);
                for v in &mut layer.weights {
                    *v = rng.random_range(-limit..limit);
                }
                layer
            })
            .collect();
        Ok(MlpModel {
            encoding,
            layers,
            meta: ModelMeta {
                seed,
                ..ModelMeta::default()
            },
        })
    }

    /// All-zero parameters (every output is `0.5`).
    pub fn zeros(encoding: EncodingConfig, hidden: usize, n_layers: usize, dim: usize) -> Result<Self, NnError> {
        if n_layers == 0 {
            return Err(NnError::NoLayers);
        }
        let dims = Self::layer_dims_for(&encoding, hidden, n_layers, dim);
        let layers = dims.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect();
        Ok(MlpModel {
            encoding,
            layers,
            meta: ModelMeta::default(),
        })
    }

    /// Assembles a model from explicit layers, checking that widths chain.
    pub fn from_parts(encoding: EncodingConfig, layers: Vec<Layer>, meta: ModelMeta) -> Result<Self, NnError> {
        if layers.is_empty() {
            return Err(NnError::NoLayers);
        }
        let mut width = encoding.width();
        for (i, l) in layers.iter().enumerate() {
            if l.inputs != width {
                return Err(NnError::LayerShape {
                    layer: i,
                    expected: width,
                    found: l.inputs,
                });
            }
            l.check(i)?;
            width = l.outputs;
        }
        Ok(MlpModel { encoding, layers, meta })
    }

    pub fn encoding(&self) -> &EncodingConfig {
        &self.encoding
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.encoding.width()];
        dims.extend(self.layers.iter().map(|l| l.outputs));
        dims
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Hidden width `H`; equals the output width for a single-layer model.
    pub fn hidden_width(&self) -> usize {
        self.layers[0].outputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.outputs)
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// True if any index lies beyond the training length `N_norm`.
    pub fn is_extrapolating(&self, indices: &[u64]) -> bool {
        indices.iter().any(|&i| i > self.encoding.n_norm())
    }

    pub fn forward(&self, indices: &[u64]) -> PointBuffer {
        self.forward_cached(indices).into_output()
    }

    pub fn forward_cached(&self, indices: &[u64]) -> ForwardCache {
        let batch = indices.len();
        let width = self.encoding.width();
        let mut input = vec![0.0; batch * width];
        for (&i, row) in indices.iter().zip(input.chunks_exact_mut(width)) {
            self.encoding.encode_into(i, row);
        }
        let mut acts = Vec::with_capacity(self.layers.len());
        let last = self.layers.len() - 1;
        let mut out = Vec::new();
        for (li, layer) in self.layers.iter().enumerate() {
            let mut z = vec![0.0; batch * layer.outputs];
            layer.apply(&input, &mut z);
            if li == last {
                z.iter_mut().for_each(|v| *v = sigmoid(*v));
            } else {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(core::mem::replace(&mut input, z));
            if li == last {
                out = core::mem::take(&mut input);
            }
        }
        let output = PointBuffer::from_flat(batch, self.output_dim(), out).expect("sigmoid output lies in (0,1)");
        ForwardCache { batch, acts, output }
    }

    /// Reverse-mode gradient of a scalar loss given `upstream = ∂loss/∂X`
    /// (row-major `batch × d`).
    pub fn backward(&self, cache: &ForwardCache, upstream: &[f64]) -> Result<MlpGrads, NnError> {
        let d = self.output_dim();
        if upstream.len() != cache.batch * d || cache.acts.len() != self.layers.len() {
            return Err(NnError::UpstreamShape {
                expected: cache.batch * d,
                found: upstream.len(),
            });
        }
        let mut grads = MlpGrads::zeros_like(self);
        let mut delta: Vec<f64> = upstream
            .iter()
            .zip(cache.output.coords())
            .map(|(g, s)| g * s * (1.0 - s))
            .collect();
        for li in (0..self.layers.len()).rev() {
            let layer = &self.layers[li];
            let a = &cache.acts[li];
            let g = &mut grads.layers[li];
            for (dz, an) in delta.chunks_exact(layer.outputs).zip(a.chunks_exact(layer.inputs)) {
                for (o, &dzo) in dz.iter().enumerate() {
                    if dzo == 0.0 {
                        continue;
                    }
                    g.bias[o] += dzo;
                    let gw = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (gwi, ai) in gw.iter_mut().zip(an) {
                        *gwi += dzo * ai;
                    }
                }
            }
            if li == 0 {
                break;
            }
            let mut next = vec![0.0; cache.batch * layer.inputs];
            for ((dz, da), an) in delta
                .chunks_exact(layer.outputs)
                .zip(next.chunks_exact_mut(layer.inputs))
                .zip(a.chunks_exact(layer.inputs))
            {
                for (o, &dzo) in dz.iter().enumerate() {
                    if dzo == 0.0 {
                        continue;
                    }
                    let w = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (dai, wi) in da.iter_mut().zip(w) {
                        *dai += dzo * wi;
                    }
                }
                // ReLU: the input of this layer is the previous layer's
                // output, positive exactly where the pre-activation was.
                for (dai, ai) in da.iter_mut().zip(an) {
                    if *ai <= 0.0 {
                        *dai = 0.0;
                    }
                }
            }
            delta = next;
        }
        Ok(grads)
    }
}
