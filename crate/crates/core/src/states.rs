//! Initial field states: superpositions of binomial states, the
//! orthogonal-even binomial state and (parity-projected) coherent states.
//!
//! All amplitudes are assembled from log-domain weights, so `M` in the
//! hundreds is handled without forming any factorial. Normalization is always
//! numerical; the closed-form normalization constants are exposed separately
//! as cross-checks.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, NeumaierSum};

/// Tail mass the coherent truncation may leave behind.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-14;

/// Smallest cutoff used for coherent states regardless of `alpha`.
pub const COHERENT_MIN_CUTOFF: usize = 40;

/// Superposition parameter of the binomial family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Epsilon {
    /// Plain binomial state.
    Zero,
    /// Even binomial state.
    Plus,
    /// Odd binomial state.
    Minus,
    /// Phased superposition with `epsilon = i`.
    I,
}

impl Epsilon {
    pub fn value(self) -> Complex64 {
        match self {
            Epsilon::Zero => Complex64::new(0.0, 0.0),
            Epsilon::Plus => Complex64::new(1.0, 0.0),
            Epsilon::Minus => Complex64::new(-1.0, 0.0),
            Epsilon::I => Complex64::new(0.0, 1.0),
        }
    }

    /// The real value for the three real tokens.
    pub fn real(self) -> Option<f64> {
        match self {
            Epsilon::Zero => Some(0.0),
            Epsilon::Plus => Some(1.0),
            Epsilon::Minus => Some(-1.0),
            Epsilon::I => None,
        }
    }

    /// `1 + (-1)^n epsilon`.
    fn interference(self, n: usize) -> Complex64 {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        Complex64::new(1.0, 0.0) + self.value() * sign
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Epsilon::Zero => "0",
            Epsilon::Plus => "1",
            Epsilon::Minus => "-1",
            Epsilon::I => "i",
        })
    }
}

impl std::str::FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Epsilon::Zero),
            "1" | "+1" => Ok(Epsilon::Plus),
            "-1" => Ok(Epsilon::Minus),
            "i" | "I" => Ok(Epsilon::I),
            other => Err(Error::invalid(
                "epsilon",
                format!("`{other}` is not one of 0, 1, -1, i"),
            )),
        }
    }
}

/// Parity projection applied to a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    None,
    Even,
    Odd,
}

impl Parity {
    fn keeps(self, n: usize) -> bool {
        match self {
            Parity::None => true,
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::None => "none",
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Parity::None),
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::invalid(
                "parity",
                format!("`{other}` is not one of none, even, odd"),
            )),
        }
    }
}

/// Parametric description of an initial field state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldStateSpec {
    Sbs {
        m: usize,
        eta: f64,
        epsilon: Epsilon,
    },
    OrthogonalEvenBs {
        m: usize,
        eta: f64,
    },
    Coherent {
        alpha: f64,
        parity: Parity,
    },
}

impl FieldStateSpec {
    /// Builds the amplitude vector with default options.
    pub fn build(&self) -> Result<FockAmplitudes> {
        match *self {
            FieldStateSpec::Sbs { m, eta, epsilon } => sbs_amplitudes(m, eta, epsilon),
            FieldStateSpec::OrthogonalEvenBs { m, eta } => oebs_amplitudes(m, eta),
            FieldStateSpec::Coherent { alpha, parity } => {
                coherent_amplitudes(alpha, parity, default_coherent_cutoff(alpha, parity)?)
            }
        }
    }

    /// `(M, eta)` for the binomial families.
    pub fn binomial_params(&self) -> Option<(usize, f64)> {
        match *self {
            FieldStateSpec::Sbs { m, eta, .. } | FieldStateSpec::OrthogonalEvenBs { m, eta } => {
                Some((m, eta))
            }
            FieldStateSpec::Coherent { .. } => None,
        }
    }
}

impl fmt::Display for FieldStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldStateSpec::Sbs { m, eta, epsilon } => {
                write!(f, "sbs(M={m}, eta={eta}, epsilon={epsilon})")
            }
            FieldStateSpec::OrthogonalEvenBs { m, eta } => write!(f, "oebs(M={m}, eta={eta})"),
            FieldStateSpec::Coherent { alpha, parity } => {
                write!(f, "coherent(alpha={alpha}, parity={parity})")
            }
        }
    }
}

/// Normalized amplitudes `C_0..C_{n_max}` over the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockAmplitudes {
    spec: FieldStateSpec,
    amps: Vec<Complex64>,
    norm_residual: f64,
    raw_norm_sq: f64,
    degenerate: bool,
}

impl FockAmplitudes {
    fn normalize(
        spec: FieldStateSpec,
        raw: Vec<Complex64>,
        degenerate: bool,
    ) -> Result<FockAmplitudes> {
        let raw_norm_sq = numerics::sum(raw.iter().map(|c| c.norm_sqr()));
        if !raw_norm_sq.is_finite() || raw_norm_sq <= 0.0 {
            return Err(Error::ZeroNorm(spec.to_string()));
        }
        let scale = raw_norm_sq.sqrt().recip();
        let amps: Vec<Complex64> = raw.into_iter().map(|c| c * scale).collect();
        let norm_residual = (1.0 - numerics::sum(amps.iter().map(|c| c.norm_sqr()))).abs();
        Ok(FockAmplitudes {
            spec,
            amps,
            norm_residual,
            raw_norm_sq,
            degenerate,
        })
    }

    pub fn spec(&self) -> &FieldStateSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    /// Largest Fock index carried by the vector.
    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// `|1 - sum |C_n|^2|` after normalization.
    pub fn norm_residual(&self) -> f64 {
        self.norm_residual
    }

    /// Squared norm of the unnormalized weights (the inverse of the
    /// closed-form normalization constant squared).
    pub fn raw_norm_sq(&self) -> f64 {
        self.raw_norm_sq
    }

    /// Set for orthogonal-even states with `M < 4`, which collapse to vacuum.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        photon_distribution(self)
    }

    pub fn mean_photon(&self) -> f64 {
        mean_photon(self)
    }
}

fn check_eta(eta: f64, allow_one: bool) -> Result<()> {
    let ok = eta.is_finite() && eta > 0.0 && (eta < 1.0 || (allow_one && eta == 1.0));
    if ok {
        Ok(())
    } else if allow_one {
        Err(Error::invalid("eta", format!("{eta} is outside (0, 1]")))
    } else {
        Err(Error::invalid("eta", format!("{eta} is outside (0, 1)")))
    }
}

/// Half the log of the binomial weight `C(M,n) eta^{2n} (1-eta^2)^{M-n}`.
fn half_log_binomial_weights(m: usize, eta: f64) -> Vec<f64> {
    if eta == 1.0 {
        // Fock |M>: no 0^0 evaluation.
        return (0..=m)
            .map(|n| if n == m { 0.0 } else { f64::NEG_INFINITY })
            .collect();
    }
    let ln_eta = eta.ln();
    let ln_q = (-eta * eta).ln_1p();
    numerics::ln_binomial_row(m)
        .into_iter()
        .enumerate()
        .map(|(n, lnc)| 0.5 * (lnc + (m - n) as f64 * ln_q) + n as f64 * ln_eta)
        .collect()
}

/// Superposition of binomial states `|M, eta>_epsilon`.
pub fn sbs_amplitudes(m: usize, eta: f64, epsilon: Epsilon) -> Result<FockAmplitudes> {
    sbs_amplitudes_with(m, eta, epsilon, false)
}

/// As [`sbs_amplitudes`], optionally accepting `M = 0` as the vacuum.
pub fn sbs_amplitudes_with(
    m: usize,
    eta: f64,
    epsilon: Epsilon,
    allow_vacuum: bool,
) -> Result<FockAmplitudes> {
    check_eta(eta, true)?;
    if m == 0 && !allow_vacuum {
        return Err(Error::invalid("M", "must be a positive integer"));
    }
    let raw: Vec<Complex64> = half_log_binomial_weights(m, eta)
        .into_iter()
        .enumerate()
        .map(|(n, half_log)| {
            let factor = epsilon.interference(n);
            if factor == Complex64::new(0.0, 0.0) || half_log == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                factor * half_log.exp()
            }
        })
        .collect();
    FockAmplitudes::normalize(FieldStateSpec::Sbs { m, eta, epsilon }, raw, false)
}

/// Closed form of `|lambda_epsilon|^{-2}`, defined for the real tokens only.
pub fn sbs_inverse_lambda_sq(m: usize, eta: f64, epsilon: Epsilon) -> Option<f64> {
    let e = epsilon.real()?;
    let z = 1.0 - 2.0 * eta * eta;
    Some(1.0 + e * e + 2.0 * z.powi(m as i32) * e)
}

/// Orthogonal-even binomial state supported on `|4n>`.
pub fn oebs_amplitudes(m: usize, eta: f64) -> Result<FockAmplitudes> {
    check_eta(eta, false)?;
    if m == 0 {
        return Err(Error::invalid("M", "must be a positive integer"));
    }
    let spec = FieldStateSpec::OrthogonalEvenBs { m, eta };
    if m < 4 {
        let mut raw = vec![Complex64::new(0.0, 0.0); m + 1];
        raw[0] = Complex64::new(1.0, 0.0);
        return FockAmplitudes::normalize(spec, raw, true);
    }
    let raw = half_log_binomial_weights(m, eta)
        .into_iter()
        .enumerate()
        .map(|(n, half_log)| {
            if n % 4 == 0 {
                Complex64::new(half_log.exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    FockAmplitudes::normalize(spec, raw, false)
}

/// Closed form of the orthogonal-even normalization constant `A^2`.
pub fn oebs_a_squared(m: usize, eta: f64) -> f64 {
    let p = eta * eta;
    let z = 1.0 - 2.0 * p;
    let w = Complex64::new(1.0 - p, p).powu(m as u32);
    4.0 / (1.0 + z.powi(m as i32) + 2.0 * w.re)
}

/// Poisson probabilities `e^{-a^2} a^{2n} / n!` starting at `from`, until
/// they stop contributing. Used for tail bounds only.
fn poisson_tail(alpha: f64, parity: Parity, from: usize) -> f64 {
    let mean = alpha * alpha;
    if mean == 0.0 {
        return 0.0;
    }
    let mut acc = NeumaierSum::new();
    let mut n = from;
    let ln_mean = mean.ln();
    let mut ln_fact = numerics::ln_rising(0, n);
    loop {
        if parity.keeps(n) {
            let term = (n as f64 * ln_mean - mean - ln_fact).exp();
            acc.add(term);
            if n as f64 > mean && term < 1e-40 * acc.value().max(f64::MIN_POSITIVE) {
                break;
            }
            if n as f64 > mean && term == 0.0 {
                break;
            }
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    acc.value()
}

/// Probability left outside `0..=cutoff`, relative to the projected norm.
pub fn coherent_tail_mass(alpha: f64, parity: Parity, cutoff: usize) -> f64 {
    let mean = alpha * alpha;
    let total = match parity {
        Parity::None => 1.0,
        Parity::Even => 0.5 * (1.0 + (-2.0 * mean).exp()),
        Parity::Odd => 0.5 * -(-2.0 * mean).exp_m1(),
    };
    if total == 0.0 {
        return 0.0;
    }
    poisson_tail(alpha, parity, cutoff + 1) / total
}

/// Smallest cutoff leaving less than [`COHERENT_TAIL_LIMIT`] behind, at least
/// [`COHERENT_MIN_CUTOFF`].
pub fn default_coherent_cutoff(alpha: f64, parity: Parity) -> Result<usize> {
    check_alpha(alpha)?;
    let mut cutoff = (alpha * alpha) as usize;
    while coherent_tail_mass(alpha, parity, cutoff) >= COHERENT_TAIL_LIMIT {
        cutoff += 1;
    }
    Ok(cutoff.max(COHERENT_MIN_CUTOFF))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "alpha",
            format!("{alpha} must be finite and >= 0"),
        ))
    }
}

/// Coherent state `|alpha>` truncated at `n_cutoff`, optionally projected
/// onto even or odd photon numbers.
pub fn coherent_amplitudes(alpha: f64, parity: Parity, n_cutoff: usize) -> Result<FockAmplitudes> {
    check_alpha(alpha)?;
    let tail = coherent_tail_mass(alpha, parity, n_cutoff);
    if tail >= COHERENT_TAIL_LIMIT {
        return Err(Error::Truncation {
            cutoff: n_cutoff,
            tail,
            limit: COHERENT_TAIL_LIMIT,
        });
    }
    let spec = FieldStateSpec::Coherent { alpha, parity };
    let mean = alpha * alpha;
    let mut raw = vec![Complex64::new(0.0, 0.0); n_cutoff + 1];
    if mean == 0.0 {
        if parity.keeps(0) {
            raw[0] = Complex64::new(1.0, 0.0);
        }
        return FockAmplitudes::normalize(spec, raw, false);
    }
    let ln_alpha = alpha.ln();
    let mut half_ln_fact = NeumaierSum::new();
    for (n, slot) in raw.iter_mut().enumerate() {
        if n > 0 {
            half_ln_fact.add(0.5 * (n as f64).ln());
        }
        if parity.keeps(n) {
            let ln_amp = n as f64 * ln_alpha - 0.5 * mean - half_ln_fact.value();
            *slot = Complex64::new(ln_amp.exp(), 0.0);
        }
    }
    FockAmplitudes::normalize(spec, raw, false)
}

/// `P(n) = |C_n|^2`.
pub fn photon_distribution(s: &FockAmplitudes) -> Vec<f64> {
    s.amps.iter().map(|c| c.norm_sqr()).collect()
}

/// `sum_n n P(n)`.
pub fn mean_photon(s: &FockAmplitudes) -> f64 {
    numerics::sum(
        s.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr()),
    )
}

/// Closed-form mean photon number of the even binomial state,
/// `eta^2 M (1 - z^{M-1}) / (1 + z^M)` with `z = 1 - 2 eta^2`.
pub fn even_sbs_mean_closed_form(m: usize, eta: f64) -> f64 {
    let p = eta * eta;
    let z = 1.0 - 2.0 * p;
    p * m as f64 * (1.0 - z.powi(m as i32 - 1)) / (1.0 + z.powi(m as i32))
}
