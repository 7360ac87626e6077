//! Series comparison, the coherent-state reference trace and an exact
//! small-instance oracle for the field moments.

use crate::dynamics::{map_grid, Evolution};
use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;
use crate::series::{SeriesLabel, TimeSeries};
use crate::states::{coherent_amplitudes, default_coherent_cutoff, Parity};

mod oracle;

pub use oracle::{oracle_amplitudes, oracle_moment, ORACLE_MAX_M};

/// Grid points closer than this are considered identical.
pub const GRID_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub sup_norm: f64,
    pub rms: f64,
    pub pearson: f64,
    pub grid_size: usize,
    pub labels: (SeriesLabel, SeriesLabel),
}

/// Pearson correlation of the raw values. Degenerate (constant) inputs give
/// 1 when both series coincide and 0 otherwise.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.iter().copied().collect::<NeumaierSum>().value() / n;
    let mean_b = b.iter().copied().collect::<NeumaierSum>().value() / n;
    let (mut sab, mut saa, mut sbb) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab.add(dx * dy);
        saa.add(dx * dx);
        sbb.add(dy * dy);
    }
    let (saa, sbb) = (saa.value(), sbb.value());
    if saa == 0.0 || sbb == 0.0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    (sab.value() / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)
}

pub fn compare_series(a: &TimeSeries, b: &TimeSeries) -> Result<ComparisonReport> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} points",
            a.len(),
            b.len()
        )));
    }
    if let Some((i, (x, y))) = a
        .grid()
        .iter()
        .zip(b.grid())
        .enumerate()
        .find(|(_, (x, y))| (*x - *y).abs() > GRID_TOLERANCE)
    {
        return Err(Error::GridMismatch(format!("point {i}: T = {x} vs {y}")));
    }
    if a.is_empty() {
        return Err(Error::GridMismatch("empty series".into()));
    }
    let mut sup = 0.0f64;
    let mut sq = NeumaierSum::new();
    for (x, y) in a.values().iter().zip(b.values()) {
        let d = (x - y).abs();
        sup = sup.max(d);
        sq.add(d * d);
    }
    let rms = (sq.value() / a.len() as f64).sqrt().min(sup);
    Ok(ComparisonReport {
        sup_norm: sup,
        rms,
        pearson: pearson(a.values(), b.values()),
        grid_size: a.len(),
        labels: (a.label().clone(), b.label().clone()),
    })
}

/// Inversion trace for the coherent state `|alpha>` at the default cutoff.
pub fn coherent_inversion_baseline(alpha: f64, k: usize, grid: &[f64]) -> Result<TimeSeries> {
    let state = coherent_amplitudes(
        alpha,
        Parity::None,
        default_coherent_cutoff(alpha, Parity::None)?,
    )?;
    let evo = Evolution::new(&state, k)?;
    let values = map_grid(grid, 1, |t| Ok(evo.inversion(t)))?;
    TimeSeries::new(
        grid.to_vec(),
        values,
        SeriesLabel::new("inversion")
            .with("k", k)
            .with("state", state.spec()),
    )
}
