//! Exact resonant evolution of the k-photon Jaynes-Cummings model with the
//! atom initially excited.
//!
//! The state at scaled time `T` is
//! `sum_n C_n [cos(T nu_n) |+, n> - i sin(T nu_n) |-, n + k>]`, so every
//! observable is a finite sum over the initial amplitudes.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{self, ComplexSum, NeumaierSum};
use crate::series::{SeriesLabel, TimeSeries};
use crate::states::FockAmplitudes;

/// Transition parameter and uniform scaled-time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcmConfig {
    pub k: usize,
    pub t_max: f64,
    pub steps: usize,
}

impl JcmConfig {
    pub fn new(k: usize, t_max: f64, steps: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "must be >= 1"));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::invalid(
                "tmax",
                format!("{t_max} must be finite and > 0"),
            ));
        }
        if steps < 2 {
            return Err(Error::invalid("steps", "must be >= 2"));
        }
        Ok(JcmConfig { k, t_max, steps })
    }

    /// `T_i = i t_max / (steps - 1)`.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.steps)
    }
}

pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let dt = t_max / (steps - 1) as f64;
    (0..steps).map(|i| i as f64 * dt).collect()
}

/// `nu_{n,k} = sqrt((n + k)! / n!)`, evaluated as a product.
pub fn rabi_frequency(n: usize, k: usize) -> f64 {
    (1..=k).map(|j| (n + j) as f64).product::<f64>().sqrt()
}

/// cos/sin of `T nu_n` for every populated Fock index.
#[derive(Debug, Clone)]
pub struct Phases {
    pub t: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    a: usize,
    b: usize,
    weight: Complex64,
}

/// Precomputed sum for `<a^dag^{s2} a^{s1}>(T)`.
///
/// Excited-branch terms pair `C_{j+s2}^* C_{j+s1}` at field occupation `j`;
/// ground-branch terms pair the amplitudes that were promoted by `k` photons,
/// so their initial indices are `j + s - k`. Indices outside the vector carry
/// zero amplitude and are simply omitted.
#[derive(Debug, Clone)]
pub struct MomentPlan {
    s1: usize,
    s2: usize,
    excited: Vec<Term>,
    ground: Vec<Term>,
}

impl MomentPlan {
    pub fn orders(&self) -> (usize, usize) {
        (self.s1, self.s2)
    }

    pub fn eval(&self, phases: &Phases) -> Complex64 {
        let mut acc = ComplexSum::new();
        for t in &self.excited {
            acc.add(t.weight * (phases.cos[t.a] * phases.cos[t.b]));
        }
        for t in &self.ground {
            acc.add(t.weight * (phases.sin[t.a] * phases.sin[t.b]));
        }
        acc.value()
    }
}

/// A state coupled to the k-photon JCM, with Rabi frequencies tabulated.
#[derive(Debug, Clone)]
pub struct Evolution<'a> {
    state: &'a FockAmplitudes,
    k: usize,
    nu: Vec<f64>,
    probs: Vec<f64>,
}

impl<'a> Evolution<'a> {
    pub fn new(state: &'a FockAmplitudes, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "must be >= 1"));
        }
        let nu = (0..state.len()).map(|n| rabi_frequency(n, k)).collect();
        Ok(Evolution {
            state,
            k,
            nu,
            probs: state.photon_distribution(),
        })
    }

    pub fn state(&self) -> &FockAmplitudes {
        self.state
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn phases(&self, t: f64) -> Phases {
        let (sin, cos) = self.nu.iter().map(|&nu| (t * nu).sin_cos()).unzip();
        Phases { t, cos, sin }
    }

    /// `sum_n P(n) cos(2 T nu_{n,k})`.
    pub fn inversion(&self, t: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for (p, nu) in self.probs.iter().zip(&self.nu) {
            if *p != 0.0 {
                acc.add(p * (2.0 * t * nu).cos());
            }
        }
        acc.value()
    }

    pub fn plan(&self, s1: usize, s2: usize) -> Result<MomentPlan> {
        let len = self.state.len();
        if s1 > len || s2 > len {
            return Err(Error::MomentOrder { s1, s2, len });
        }
        let amps = self.state.amplitudes();
        let n_max = self.state.n_max();
        let k = self.k;
        let factor =
            |j: usize| (0.5 * (numerics::ln_rising(j, s1) + numerics::ln_rising(j, s2))).exp();
        let hi = s1.max(s2);

        let mut excited = Vec::new();
        if hi <= n_max {
            for j in 0..=(n_max - hi) {
                let (a, b) = (j + s2, j + s1);
                let w = amps[a].conj() * amps[b];
                if w != Complex64::new(0.0, 0.0) {
                    excited.push(Term {
                        a,
                        b,
                        weight: w * factor(j),
                    });
                }
            }
        }

        // Ground branch: field occupation j = n + k, initial index n + s.
        let lo = s1.min(s2);
        let mut ground = Vec::new();
        let j_min = k.saturating_sub(lo);
        if hi <= n_max + k {
            for j in j_min..=(n_max + k - hi) {
                let (a, b) = (j + s2 - k, j + s1 - k);
                let w = amps[a].conj() * amps[b];
                if w != Complex64::new(0.0, 0.0) {
                    ground.push(Term {
                        a,
                        b,
                        weight: w * factor(j),
                    });
                }
            }
        }
        Ok(MomentPlan {
            s1,
            s2,
            excited,
            ground,
        })
    }

    /// `<a^dag^{s2}(T) a^{s1}(T)>`.
    pub fn moment(&self, t: f64, s1: usize, s2: usize) -> Result<Complex64> {
        Ok(self.plan(s1, s2)?.eval(&self.phases(t)))
    }

    /// `<n(T)> + (k/2) <sigma_z(T)>`, conserved by the resonant dynamics.
    pub fn excitation(&self, t: f64) -> Result<f64> {
        Ok(self.moment(t, 1, 1)?.re + 0.5 * self.k as f64 * self.inversion(t))
    }
}

/// Maps `f` over the grid, in parallel when `threads > 1`. Each point is
/// evaluated independently, so the result does not depend on `threads`.
pub fn map_grid<T, F>(grid: &[f64], threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    if threads <= 1 {
        return grid.iter().map(|&t| f(t)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    pool.install(|| grid.par_iter().map(|&t| f(t)).collect())
}

pub fn atomic_inversion(s: &FockAmplitudes, k: usize, t: f64) -> Result<f64> {
    Ok(Evolution::new(s, k)?.inversion(t))
}

pub fn field_moment(
    s: &FockAmplitudes,
    k: usize,
    t: f64,
    s1: usize,
    s2: usize,
) -> Result<Complex64> {
    Evolution::new(s, k)?.moment(t, s1, s2)
}

pub fn excitation_invariant(s: &FockAmplitudes, k: usize, t: f64) -> Result<f64> {
    Evolution::new(s, k)?.excitation(t)
}

/// Atomic inversion sampled on the configured grid.
pub fn inversion_series(s: &FockAmplitudes, cfg: &JcmConfig, threads: usize) -> Result<TimeSeries> {
    let evo = Evolution::new(s, cfg.k)?;
    let grid = cfg.grid();
    let values = map_grid(&grid, threads, |t| Ok(evo.inversion(t)))?;
    TimeSeries::new(
        grid,
        values,
        SeriesLabel::new("inversion")
            .with("k", cfg.k)
            .with("state", s.spec()),
    )
}

/// Raw moment `<a^dag^{s2} a^{s1}>` on the grid.
pub fn moment_series(
    s: &FockAmplitudes,
    cfg: &JcmConfig,
    s1: usize,
    s2: usize,
    threads: usize,
) -> Result<TimeSeries<Complex64>> {
    let evo = Evolution::new(s, cfg.k)?;
    let plan = evo.plan(s1, s2)?;
    let grid = cfg.grid();
    let values = map_grid(&grid, threads, |t| Ok(plan.eval(&evo.phases(t))))?;
    TimeSeries::new(
        grid,
        values,
        SeriesLabel::new("moment")
            .with("s1", s1)
            .with("s2", s2)
            .with("k", cfg.k)
            .with("state", s.spec()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_amplitudes, oebs_amplitudes, sbs_amplitudes, Epsilon, Parity};
    use std::f64::consts::PI;

    #[test]
    fn rabi_frequency_products() {
        assert_eq!(rabi_frequency(0, 1), 1.0);
        assert_eq!(rabi_frequency(3, 3), 120f64.sqrt());
        assert_eq!(rabi_frequency(370, 1), 371f64.sqrt());
        assert!(rabi_frequency(10_000, 3).is_finite());
    }

    #[test]
    fn grid_and_config_validation() {
        let cfg = JcmConfig::new(1, 2.0, 5).unwrap();
        assert_eq!(cfg.grid(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(JcmConfig::new(0, 1.0, 10).is_err());
        assert!(JcmConfig::new(1, 1.0, 1).is_err());
        assert!(JcmConfig::new(1, -1.0, 10).is_err());
    }

    #[test]
    fn fock_inversion_is_a_pure_sinusoid() {
        let s = sbs_amplitudes(6, 1.0, Epsilon::Zero).unwrap();
        let evo = Evolution::new(&s, 1).unwrap();
        for i in 0..50 {
            let t = 0.37 * i as f64;
            assert_eq!(evo.inversion(t), (2.0 * t * 7f64.sqrt()).cos());
        }
        // Period pi / nu_{M,k}.
        let evo3 = Evolution::new(&s, 3).unwrap();
        let period = PI / rabi_frequency(6, 3);
        for i in 0..20 {
            let t = 0.11 * i as f64;
            assert!((evo3.inversion(t) - evo3.inversion(t + 3.0 * period)).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_starts_at_one_and_stays_bounded() {
        let s = sbs_amplitudes(200, 0.6, Epsilon::Plus).unwrap();
        for k in 1..=3 {
            let evo = Evolution::new(&s, k).unwrap();
            assert!((evo.inversion(0.0) - 1.0).abs() < 1e-14);
            for i in 0..500 {
                assert!(evo.inversion(0.1 * i as f64).abs() <= 1.0 + 1e-14);
            }
        }
    }

    #[test]
    fn moment_initial_values() {
        let s = sbs_amplitudes(50, 0.4, Epsilon::Zero).unwrap();
        let evo = Evolution::new(&s, 2).unwrap();
        for i in 0..10 {
            let norm = evo.moment(0.7 * i as f64, 0, 0).unwrap();
            assert!((norm.re - 1.0).abs() < 1e-13 && norm.im.abs() < 1e-15);
        }
        let n0 = evo.moment(0.0, 1, 1).unwrap().re;
        assert!((n0 - s.mean_photon()).abs() < 1e-12);
    }

    #[test]
    fn moment_order_limit() {
        let s = sbs_amplitudes(4, 0.5, Epsilon::Zero).unwrap();
        assert!(field_moment(&s, 1, 0.0, 5, 0).is_ok());
        assert!(matches!(
            field_moment(&s, 1, 0.0, 6, 0),
            Err(Error::MomentOrder { .. })
        ));
    }

    #[test]
    fn vacuum_partner_terms_are_included() {
        // For the vacuum, <n(T)> = k sin^2(T nu_0): only the ground branch
        // with negative shifted index contributes.
        let vac = coherent_amplitudes(0.0, Parity::None, 40).unwrap();
        for k in 1..=3 {
            let evo = Evolution::new(&vac, k).unwrap();
            let t = 0.9;
            let expected = k as f64 * (t * rabi_frequency(0, k)).sin().powi(2);
            assert!((evo.moment(t, 1, 1).unwrap().re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_symmetry_is_exact() {
        let s = sbs_amplitudes(40, 0.5, Epsilon::I).unwrap();
        let evo = Evolution::new(&s, 2).unwrap();
        for (s1, s2) in [(0, 1), (2, 0), (3, 1), (1, 4)] {
            let a = evo.moment(3.3, s1, s2).unwrap();
            let b = evo.moment(3.3, s2, s1).unwrap();
            assert!((a - b.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn excitation_is_conserved() {
        let s = sbs_amplitudes(100, 0.3, Epsilon::Zero).unwrap();
        let evo = Evolution::new(&s, 3).unwrap();
        for i in 0..200 {
            let v = evo.excitation(0.25 * i as f64).unwrap();
            assert!((v - 10.5).abs() < 1e-10, "{v}");
        }
        let fock = sbs_amplitudes(12, 1.0, Epsilon::Zero).unwrap();
        assert!((excitation_invariant(&fock, 1, 4.2).unwrap() - 12.5).abs() < 1e-12);
    }

    #[test]
    fn oebs_plan_is_sparse() {
        let s = oebs_amplitudes(370, 0.7).unwrap();
        let evo = Evolution::new(&s, 1).unwrap();
        let plan = evo.plan(3, 0).unwrap();
        assert!(plan.excited.is_empty() && plan.ground.is_empty());
        assert_eq!(plan.eval(&evo.phases(5.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn threaded_grid_is_bit_identical() {
        let s = sbs_amplitudes(370, 0.1, Epsilon::Zero).unwrap();
        let cfg = JcmConfig::new(1, 25.0, 777).unwrap();
        let seq = inversion_series(&s, &cfg, 1).unwrap();
        let par = inversion_series(&s, &cfg, 4).unwrap();
        assert_eq!(seq.values(), par.values());
    }
}
