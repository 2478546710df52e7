//! Dense multilayer perceptron with ReLU hidden layers and a linear head.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::NnError;

/// One affine layer. `weights` is row-major with `out_dim` rows of `in_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Dense {
    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Self {
            in_dim,
            out_dim,
            weights: vec![0.0; in_dim * out_dim],
            biases: vec![0.0; out_dim],
        }
    }

    fn affine(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.biases.iter().enumerate().map(|(r, b)| {
            let row = &self.weights[r * self.in_dim..(r + 1) * self.in_dim];
            b + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()
        }));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub layers: Vec<Dense>,
}

/// Inputs and pre-activations of every layer from one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerCache {
    pub inputs: Vec<Vec<f64>>,
    pub pre_activations: Vec<Vec<f64>>,
}

/// Gradients shaped like [`MlpParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Grads {
    pub layers: Vec<Dense>,
}

impl Grads {
    pub fn zeros_like(params: &MlpParams) -> Self {
        Self {
            layers: params
                .layers
                .iter()
                .map(|l| Dense::zeros(l.in_dim, l.out_dim))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Grads) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weights.iter_mut().zip(&b.weights).for_each(|(x, y)| *x += y);
            a.biases.iter_mut().zip(&b.biases).for_each(|(x, y)| *x += y);
        }
    }

    pub fn scale(&mut self, k: f64) {
        for l in &mut self.layers {
            l.weights.iter_mut().for_each(|x| *x *= k);
            l.biases.iter_mut().for_each(|x| *x *= k);
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }

    pub fn shape_matches(&self, params: &MlpParams) -> bool {
        self.layers.len() == params.layers.len()
            && self.layers.iter().zip(&params.layers).all(|(g, p)| {
                g.in_dim == p.in_dim
                    && g.out_dim == p.out_dim
                    && g.weights.len() == p.weights.len()
                    && g.biases.len() == p.biases.len()
            })
    }
}

impl MlpParams {
    /// Glorot-uniform weights, zero biases.
    pub fn init(layer_dims: &[usize], seed: u64) -> Result<Self, NnError> {
        if layer_dims.len() < 2 {
            return Err(NnError::BadDims(layer_dims.to_vec()));
        }
        if layer_dims.contains(&0) {
            return Err(NnError::BadDims(layer_dims.to_vec()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = layer_dims
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let mut layer = Dense::zeros(fan_in, fan_out);
                for v in &mut layer.weights {
                    *v = rng.gen_range(-limit..limit);
                }
                layer
            })
            .collect();
        Ok(Self { layers })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.out_dim)
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        std::iter::once(self.input_dim())
            .chain(self.layers.iter().map(|l| l.out_dim))
            .collect()
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
    }

    /// Mutable access to the `i`-th scalar in the same order as [`MlpParams::values`].
    pub fn value_mut(&mut self, mut i: usize) -> &mut f64 {
        for l in &mut self.layers {
            if i < l.weights.len() {
                return &mut l.weights[i];
            }
            i -= l.weights.len();
            if i < l.biases.len() {
                return &mut l.biases[i];
            }
            i -= l.biases.len();
        }
        panic!("parameter index out of range");
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }

    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, LayerCache), NnError> {
        if x.len() != self.input_dim() {
            return Err(NnError::DimMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let n = self.layers.len();
        let mut cache = LayerCache {
            inputs: Vec::with_capacity(n),
            pre_activations: Vec::with_capacity(n),
        };
        let mut act = x.to_vec();
        for (k, layer) in self.layers.iter().enumerate() {
            let mut z = Vec::with_capacity(layer.out_dim);
            layer.affine(&act, &mut z);
            let next = if k + 1 < n {
                z.iter().map(|&v| v.max(0.0)).collect()
            } else {
                z.clone()
            };
            cache.inputs.push(act);
            cache.pre_activations.push(z);
            act = next;
        }
        Ok((act, cache))
    }

    /// Output only.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>, NnError> {
        if x.len() != self.input_dim() {
            return Err(NnError::DimMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let n = self.layers.len();
        let mut act = x.to_vec();
        let mut z = Vec::new();
        for (k, layer) in self.layers.iter().enumerate() {
            layer.affine(&act, &mut z);
            if k + 1 < n {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            std::mem::swap(&mut act, &mut z);
        }
        Ok(act)
    }

    /// Gradient of `output · grad_output` w.r.t. every parameter.
    /// The ReLU derivative at exactly zero is taken as zero.
    pub fn backward(&self, cache: &LayerCache, grad_output: &[f64]) -> Result<Grads, NnError> {
        let mut grads = Grads::zeros_like(self);
        self.backward_into(cache, grad_output, &mut grads)?;
        Ok(grads)
    }

    /// Like [`MlpParams::backward`] but accumulates into `grads`.
    pub fn backward_into(&self, cache: &LayerCache, grad_output: &[f64], grads: &mut Grads) -> Result<(), NnError> {
        let n = self.layers.len();
        if cache.inputs.len() != n
            || cache.pre_activations.len() != n
            || grad_output.len() != self.output_dim()
            || !grads.shape_matches(self)
        {
            return Err(NnError::ShapeMismatch);
        }
        let mut delta = grad_output.to_vec();
        for k in (0..n).rev() {
            let layer = &self.layers[k];
            let input = &cache.inputs[k];
            if input.len() != layer.in_dim || cache.pre_activations[k].len() != layer.out_dim {
                return Err(NnError::ShapeMismatch);
            }
            let g = &mut grads.layers[k];
            for (r, &d) in delta.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                g.biases[r] += d;
                let row = &mut g.weights[r * layer.in_dim..(r + 1) * layer.in_dim];
                row.iter_mut().zip(input).for_each(|(w, x)| *w += d * x);
            }
            if k == 0 {
                break;
            }
            let prev_pre = &cache.pre_activations[k - 1];
            let mut next = vec![0.0; layer.in_dim];
            for (r, &d) in delta.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                let row = &layer.weights[r * layer.in_dim..(r + 1) * layer.in_dim];
                next.iter_mut().zip(row).for_each(|(acc, w)| *acc += d * w);
            }
            for (v, &z) in next.iter_mut().zip(prev_pre) {
                if z <= 0.0 {
                    *v = 0.0;
                }
            }
            delta = next;
        }
        Ok(())
    }
}
