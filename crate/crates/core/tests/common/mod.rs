//! Envelope helpers shared by the integration suites.
#![allow(dead_code)]

/// Sliding maximum of `|x - baseline|` over a centered window of `width`.
pub fn envelope(grid: &[f64], values: &[f64], baseline: f64, width: f64) -> Vec<f64> {
    let dt = grid[1] - grid[0];
    let half = ((0.5 * width / dt).round() as usize).max(1);
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(values.len() - 1);
            values[lo..=hi]
                .iter()
                .map(|v| (v - baseline).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Envelope lobes: maximal runs above `hi`, separated by a dip below `lo`.
/// Returns `(start, end, argmax)` indices per lobe.
pub fn lobes(env: &[f64], hi: f64, lo: f64) -> Vec<(usize, usize, usize)> {
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    let mut armed = true;
    let mut current: Option<(usize, usize)> = None;
    for (i, &e) in env.iter().enumerate() {
        match current {
            None if armed && e >= hi => current = Some((i, i)),
            Some((start, arg)) => {
                if e < lo {
                    out.push((start, i, arg));
                    current = None;
                    armed = true;
                } else if e > env[arg] {
                    current = Some((start, i));
                }
            }
            _ => {}
        }
        if current.is_none() && e < lo {
            armed = true;
        }
    }
    if let Some((start, arg)) = current {
        out.push((start, env.len() - 1, arg));
    }
    out
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
