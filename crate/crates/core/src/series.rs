use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{strict_local_maxima, PEAK_NOISE_FLOOR};

/// A scalar quantity sampled on a grid of times (or another scan variable).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeSeries {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite value at grid point {}",
                grid[i]
            )));
        }
        Ok(Self {
            label: label.into(),
            grid,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Indices of strict local maxima above the noise floor.
    pub fn local_maxima(&self) -> Vec<usize> {
        strict_local_maxima(&self.values, PEAK_NOISE_FLOOR)
    }

    /// Pointwise `values[i] / grid[i]`.
    pub fn divided_by_grid(&self, label: impl Into<String>) -> Result<Self> {
        if let Some(&t) = self.grid.iter().find(|&&t| t == 0.0) {
            return Err(Error::InvalidParameter(format!("cannot divide by grid point {t}")));
        }
        let values = self.values.iter().zip(&self.grid).map(|(v, t)| v / t).collect();
        Self::new(label, self.grid.clone(), values)
    }
}
