use serde::{Deserialize, Serialize};

use super::mlp::{Dense, Grads, MlpParams};
use super::NnError;

/// First and second moment estimates for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub first_moment: Vec<Dense>,
    pub second_moment: Vec<Dense>,
    pub t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(params: &MlpParams) -> Self {
        let zeros: Vec<Dense> = params
            .layers
            .iter()
            .map(|l| Dense::zeros(l.in_dim, l.out_dim))
            .collect();
        Self {
            first_moment: zeros.clone(),
            second_moment: zeros,
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

fn update_slice(p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64], k: &AdamCoeffs) {
    for i in 0..p.len() {
        m[i] = k.beta1 * m[i] + (1.0 - k.beta1) * g[i];
        v[i] = k.beta2 * v[i] + (1.0 - k.beta2) * g[i] * g[i];
        let m_hat = m[i] / k.bias1;
        let v_hat = v[i] / k.bias2;
        p[i] -= k.lr * m_hat / (v_hat.sqrt() + k.eps);
    }
}

struct AdamCoeffs {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    bias1: f64,
    bias2: f64,
}

/// One bias-corrected Adam descent step on `params` along `grads`.
pub fn adam_step(params: &mut MlpParams, grads: &Grads, state: &mut AdamState, lr: f64) -> Result<(), NnError> {
    if !grads.shape_matches(params) || state.first_moment.len() != params.layers.len() {
        return Err(NnError::ShapeMismatch);
    }
    if !grads.is_finite() {
        return Err(NnError::NonFinite("gradient"));
    }
    state.t += 1;
    let t = state.t as i32;
    let k = AdamCoeffs {
        lr,
        beta1: state.beta1,
        beta2: state.beta2,
        eps: state.eps,
        bias1: 1.0 - state.beta1.powi(t),
        bias2: 1.0 - state.beta2.powi(t),
    };
    for (((p, g), m), v) in params
        .layers
        .iter_mut()
        .zip(&grads.layers)
        .zip(&mut state.first_moment)
        .zip(&mut state.second_moment)
    {
        update_slice(&mut p.weights, &g.weights, &mut m.weights, &mut v.weights, &k);
        update_slice(&mut p.biases, &g.biases, &mut m.biases, &mut v.biases, &k);
    }
    Ok(())
}
