//! Compensated summation and log-domain factorial ratios.

use num_complex::Complex64;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a real sequence.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

/// Complex accumulator with independent compensation of both parts.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `ln((j + s)! / j!)` as a running sum of logarithms.
pub fn ln_rising(j: usize, s: usize) -> f64 {
    sum((1..=s).map(|i| ((j + i) as f64).ln()))
}

/// `ln(m! / (m - s)!)`, or `None` when `s > m` (the ratio vanishes).
pub fn ln_falling(m: usize, s: usize) -> Option<f64> {
    (s <= m).then(|| ln_rising(m - s, s))
}

/// Table of `ln C(M, n)` for `n = 0..=M`, built by the multiplicative recurrence.
pub fn ln_binomial_row(m: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(m + 1);
    let mut acc = NeumaierSum::new();
    row.push(0.0);
    for n in 1..=m {
        acc.add(((m - n + 1) as f64).ln() - (n as f64).ln());
        row.push(acc.value());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(v), 2.0);
        let naive: f64 = v.iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn rising_matches_exact_products() {
        assert_eq!(ln_rising(5, 0), 0.0);
        let exact = (6.0f64 * 7.0 * 8.0).ln();
        assert!((ln_rising(5, 3) - exact).abs() < 1e-14);
        assert_eq!(ln_falling(2, 3), None);
        assert!((ln_falling(4, 4).unwrap() - 24f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn binomial_row_is_symmetric_and_exact_for_small_m() {
        let row = ln_binomial_row(10);
        let exact = [1u64, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1];
        for (n, &c) in exact.iter().enumerate() {
            assert!((row[n] - (c as f64).ln()).abs() < 1e-13, "n = {n}");
        }
        let big = ln_binomial_row(370);
        assert!((big[0] - big[370]).abs() < 1e-11);
        assert!(big.iter().all(|v| v.is_finite()));
    }
}
