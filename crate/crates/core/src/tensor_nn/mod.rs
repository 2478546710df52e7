//! Minimal dense network engine: forward pass, reverse-mode gradients,
//! Adam, and masked categorical distributions. Double precision throughout.

mod adam;
pub mod checkpoint;
mod dist;
mod mlp;

use thiserror::Error;

pub use adam::{adam_step, AdamState};
pub use dist::{masked_log_softmax, masked_softmax, sample_categorical};
pub use mlp::{Dense, Grads, LayerCache, MlpParams};

#[derive(Debug, Error, PartialEq)]
pub enum NnError {
    #[error("layer dims {0:?} must have at least two entries, all >= 1")]
    BadDims(Vec<usize>),
    #[error("input has length {got}, expected {expected}")]
    DimMismatch { expected: usize, got: usize },
    #[error("shape mismatch between parameters, cache and gradients")]
    ShapeMismatch,
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("action mask has no legal entry")]
    EmptyMask,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
