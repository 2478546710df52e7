use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub algorithm: String,
    pub run: usize,
    pub episode: usize,
    #[serde(rename = "return")]
    pub shared_return: f64,
}

/// Per-episode shared returns of every (algorithm, run).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsTable {
    pub rows: Vec<MetricRow>,
}

impl MetricsTable {
    pub fn push_run(&mut self, algorithm: &str, run: usize, returns: &[f64]) {
        self.rows
            .extend(returns.iter().enumerate().map(|(episode, &r)| MetricRow {
                algorithm: algorithm.to_string(),
                run,
                episode,
                shared_return: r,
            }));
    }

    pub fn extend(&mut self, other: MetricsTable) {
        self.rows.extend(other.rows);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Algorithm names in order of first appearance.
    pub fn algorithms(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.algorithm) {
                out.push(r.algorithm.clone());
            }
        }
        out
    }

    pub fn rows_for<'a>(&'a self, algorithm: &'a str) -> impl Iterator<Item = &'a MetricRow> + 'a {
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }

    /// Arithmetic mean over runs of each episode's return.
    pub fn mean_per_episode(&self, algorithm: &str) -> Vec<f64> {
        let mut sums: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for r in self.rows_for(algorithm) {
            if r.episode >= sums.len() {
                sums.resize(r.episode + 1, 0.0);
                counts.resize(r.episode + 1, 0);
            }
            sums[r.episode] += r.shared_return;
            counts[r.episode] += 1;
        }
        sums.iter()
            .zip(&counts)
            .map(|(s, &c)| if c == 0 { f64::NAN } else { s / c as f64 })
            .collect()
    }

    /// Mean of the run-averaged returns over the last `window` episodes.
    pub fn final_mean(&self, algorithm: &str, window: usize) -> f64 {
        let means = self.mean_per_episode(algorithm);
        let tail = &means[means.len().saturating_sub(window)..];
        tail.iter().sum::<f64>() / tail.len() as f64
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        let io = |e: csv::Error| HarnessError::Csv {
            path: path.to_path_buf(),
            source: e,
        };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        if self.rows.is_empty() {
            w.write_record(["algorithm", "run", "episode", "return"]).map_err(io)?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(io)?;
        }
        w.flush().map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn read_csv(path: &Path) -> Result<Self, HarnessError> {
        let io = |e: csv::Error| HarnessError::Csv {
            path: path.to_path_buf(),
            source: e,
        };
        let mut r = csv::Reader::from_path(path).map_err(io)?;
        let rows = r.deserialize().collect::<Result<Vec<MetricRow>, _>>().map_err(io)?;
        Ok(Self { rows })
    }
}

/// Writes `table` to `path` with header `algorithm,run,episode,return`.
pub fn write_metrics_csv(table: &MetricsTable, path: &Path) -> Result<(), HarnessError> {
    table.write_csv(path)
}
