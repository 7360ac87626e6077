use std::fmt;

use crate::error::{Error, Result};

/// Observable kind plus the parameters it was computed with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesLabel {
    pub kind: String,
    pub params: Vec<(String, String)>,
}

impl SeriesLabel {
    pub fn new(kind: impl Into<String>) -> Self {
        SeriesLabel {
            kind: kind.into(),
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// An observable sampled on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<V = f64> {
    grid: Vec<f64>,
    values: Vec<V>,
    label: SeriesLabel,
}

impl<V> TimeSeries<V> {
    pub fn new(grid: Vec<f64>, values: Vec<V>, label: SeriesLabel) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::GridMismatch(
                "grid is not strictly increasing".into(),
            ));
        }
        Ok(TimeSeries {
            grid,
            values,
            label,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn label(&self) -> &SeriesLabel {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &V)> {
        self.grid.iter().copied().zip(&self.values)
    }
}
