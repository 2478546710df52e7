//! Text checkpoint of an [`MlpParams`].
//!
//! ```text
//! acd-mlp v1
//! layers 3
//! layer 0 64 19
//! w <64*19 values, row-major>
//! b <64 values>
//! ...
//! ```
//!
//! Values use the shortest decimal form that parses back to the same `f64`,
//! so a write/read round trip is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use super::mlp::{Dense, MlpParams};
use super::NnError;

const HEADER: &str = "acd-mlp v1";

pub fn to_text(params: &MlpParams) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "layers {}", params.layers.len()).unwrap();
    for (k, l) in params.layers.iter().enumerate() {
        writeln!(out, "layer {k} {} {}", l.out_dim, l.in_dim).unwrap();
        write_values(&mut out, 'w', &l.weights);
        write_values(&mut out, 'b', &l.biases);
    }
    out
}

fn write_values(out: &mut String, tag: char, values: &[f64]) {
    out.push(tag);
    for v in values {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
}

fn bad(msg: impl Into<String>) -> NnError {
    NnError::Checkpoint(msg.into())
}

pub fn from_text(text: &str) -> Result<MlpParams, NnError> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(bad("missing or unsupported version header"));
    }
    let count: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("layers "))
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| bad("expected `layers <n>`"))?;
    let mut layers = Vec::with_capacity(count);
    for k in 0..count {
        let head: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("truncated checkpoint"))?
            .split_whitespace()
            .collect();
        let dims = match head.as_slice() {
            ["layer", idx, out, inp] if idx.parse::<usize>().ok() == Some(k) => {
                out.parse::<usize>().ok().zip(inp.parse::<usize>().ok())
            }
            _ => None,
        };
        let (out_dim, in_dim) = dims.ok_or_else(|| bad(format!("bad header for layer {k}")))?;
        let weights = read_values(lines.next(), 'w', out_dim * in_dim)?;
        let biases = read_values(lines.next(), 'b', out_dim)?;
        layers.push(Dense {
            in_dim,
            out_dim,
            weights,
            biases,
        });
    }
    if layers.windows(2).any(|w| w[0].out_dim != w[1].in_dim) || layers.is_empty() {
        return Err(bad("layer shapes do not chain"));
    }
    Ok(MlpParams { layers })
}

fn read_values(line: Option<&str>, tag: char, n: usize) -> Result<Vec<f64>, NnError> {
    let line = line.ok_or_else(|| bad("truncated checkpoint"))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag.encode_utf8(&mut [0; 4])) {
        return Err(bad(format!("expected `{tag}` row")));
    }
    let values = parts
        .map(|s| s.parse::<f64>().map_err(|e| bad(format!("{s}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != n {
        return Err(bad(format!("`{tag}` row has {} values, expected {n}", values.len())));
    }
    Ok(values)
}

pub fn save(params: &MlpParams, path: &Path) -> Result<(), NnError> {
    std::fs::write(path, to_text(params)).map_err(|e| bad(e.to_string()))
}

pub fn load(path: &Path) -> Result<MlpParams, NnError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    from_text(&text)
}
