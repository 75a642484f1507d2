use super::{Layer, MlpGrads, MlpModel, NnError};

/// Bias-corrected Adam over every model parameter.
#[derive(Debug, Clone)]
pub struct AdamState {
    first: MlpGrads,
    second: MlpGrads,
    step: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(model: &MlpModel) -> Self {
        AdamState {
            first: MlpGrads::zeros_like(model),
            second: MlpGrads::zeros_like(model),
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One update `θ ← θ − lr · m̂ / (√v̂ + ε)`.
    ///
    /// Gradients are checked before anything is modified, so on error both
    /// the model and the state are untouched.
    pub fn step(&mut self, model: &mut MlpModel, grads: &MlpGrads, lr: f64) -> Result<(), NnError> {
        if grads.layers.len() != model.n_layers() || self.first.layers.len() != model.n_layers() {
            return Err(NnError::StateMismatch);
        }
        for (i, (g, l)) in grads.layers.iter().zip(model.layers()).enumerate() {
            if g.weights.len() != l.weights.len() || g.bias.len() != l.bias.len() {
                return Err(NnError::StateMismatch);
            }
            if g.weights.iter().chain(&g.bias).any(|v| !v.is_finite()) {
                return Err(NnError::NonFiniteGradient { layer: i });
            }
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - libm::pow(self.beta1, t as f64);
        let c2 = 1.0 - libm::pow(self.beta2, t as f64);
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for (((p, g), m), v) in p.iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut()) {
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                let mh = *m / c1;
                let vh = *v / c2;
                *p -= lr * mh / (libm::sqrt(vh) + eps);
            }
        };
        for (((layer, g), m), v) in model
            .layers_mut()
            .iter_mut()
            .zip(&grads.layers)
            .zip(&mut self.first.layers)
            .zip(&mut self.second.layers)
        {
            let Layer { weights, bias, .. } = layer;
            update(weights, &g.weights, &mut m.weights, &mut v.weights);
            update(bias, &g.bias, &mut m.bias, &mut v.bias);
        }
        Ok(())
    }
}
