//! Nth-order quadrature squeezing factors and the two rescaled factors that
//! follow the single-photon atomic inversion: `W_N` for the orthogonal-even
//! binomial state in the standard model, and `Q_N` from the three-photon model.

use num_complex::Complex64;

use crate::dynamics::{map_grid, rabi_frequency, Evolution, JcmConfig, MomentPlan};
use crate::error::{Error, Result};
use crate::numerics::{self, NeumaierSum};
use crate::series::{SeriesLabel, TimeSeries};
use crate::states::{sbs_amplitudes, Epsilon, FieldStateSpec, FockAmplitudes};

/// Transition parameter used by the numerical approach.
pub const Q_TRANSITION: usize = 3;

/// Squeezing factors at one time point together with their constituents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeRecord {
    pub t: f64,
    pub order: usize,
    /// `F_N`, the X-quadrature factor.
    pub f: f64,
    /// `S_N`, the Y-quadrature factor.
    pub s: f64,
    /// `<a^N>`
    pub m_a_n: Complex64,
    /// `<a^{2N}>`
    pub m_a_2n: Complex64,
    /// `<a^dag^N a^N>`
    pub m_ad_n_a_n: f64,
}

impl SqueezeRecord {
    fn assemble(
        t: f64,
        order: usize,
        m_a_n: Complex64,
        m_a_2n: Complex64,
        m_ad_n_a_n: f64,
    ) -> Self {
        SqueezeRecord {
            t,
            order,
            f: m_ad_n_a_n + m_a_2n.re - 2.0 * m_a_n.re * m_a_n.re,
            s: m_ad_n_a_n - m_a_2n.re - 2.0 * m_a_n.im * m_a_n.im,
            m_a_n,
            m_a_2n,
            m_ad_n_a_n,
        }
    }
}

/// Evaluates [`SqueezeRecord`]s for one state, `k` and order `N`.
#[derive(Debug, Clone)]
pub struct Squeezer<'a> {
    evo: Evolution<'a>,
    order: usize,
    a_n: MomentPlan,
    a_2n: MomentPlan,
    ad_n_a_n: MomentPlan,
}

impl<'a> Squeezer<'a> {
    pub fn new(state: &'a FockAmplitudes, k: usize, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("N", "squeezing order must be >= 1"));
        }
        let evo = Evolution::new(state, k)?;
        Ok(Squeezer {
            a_n: evo.plan(order, 0)?,
            a_2n: evo.plan(2 * order, 0)?,
            ad_n_a_n: evo.plan(order, order)?,
            evo,
            order,
        })
    }

    pub fn record(&self, t: f64) -> SqueezeRecord {
        let ph = self.evo.phases(t);
        SqueezeRecord::assemble(
            t,
            self.order,
            self.a_n.eval(&ph),
            self.a_2n.eval(&ph),
            self.ad_n_a_n.eval(&ph).re,
        )
    }
}

pub fn squeezing_factors(
    s: &FockAmplitudes,
    k: usize,
    t: f64,
    order: usize,
) -> Result<SqueezeRecord> {
    Ok(Squeezer::new(s, k, order)?.record(t))
}

pub fn squeezing_series(
    s: &FockAmplitudes,
    cfg: &JcmConfig,
    order: usize,
    threads: usize,
) -> Result<Vec<SqueezeRecord>> {
    let sq = Squeezer::new(s, cfg.k, order)?;
    map_grid(&cfg.grid(), threads, |t| Ok(sq.record(t)))
}

/// `<a^dag^s a^s>` of the initial field, `sum_m P(m) m! / (m - s)!`.
pub fn initial_factorial_moment(s: &FockAmplitudes, order: usize) -> f64 {
    numerics::sum(s.amplitudes().iter().enumerate().filter_map(|(m, c)| {
        let p = c.norm_sqr();
        if p == 0.0 {
            return None;
        }
        numerics::ln_falling(m, order).map(|ln| p * ln.exp())
    }))
}

fn oebs_params(s: &FockAmplitudes) -> Result<(usize, f64)> {
    match *s.spec() {
        FieldStateSpec::OrthogonalEvenBs { m, eta } => Ok((m, eta)),
        other => Err(Error::StateMismatch(format!(
            "expected an orthogonal-even binomial state, got {other}"
        ))),
    }
}

/// `F_{2N+1}(T)` for the orthogonal-even state in the standard model,
/// written as the diagonal sum
/// `X_0 + (N + 1/2) Y_0 - (N + 1/2) sum_m P(m) m!/(m-2N)! cos(2 T nu_{m,1})`
/// with `X_0`, `Y_0` the initial factorial moments of order `2N+1` and `2N`.
pub fn oebs_odd_factor_explicit(s_oebs: &FockAmplitudes, t: f64, n: usize) -> Result<f64> {
    oebs_params(s_oebs)?;
    let x0 = initial_factorial_moment(s_oebs, 2 * n + 1);
    let y0 = initial_factorial_moment(s_oebs, 2 * n);
    let mut acc = NeumaierSum::new();
    for (m, c) in s_oebs.amplitudes().iter().enumerate() {
        let p = c.norm_sqr();
        if p == 0.0 {
            continue;
        }
        if let Some(ln) = numerics::ln_falling(m, 2 * n) {
            acc.add(p * ln.exp() * (2.0 * t * rabi_frequency(m, 1)).cos());
        }
    }
    let half = n as f64 + 0.5;
    Ok(x0 + half * y0 - half * acc.value())
}

/// Rescaled squeezing factor `W_N` built from the odd order `2N+1`.
#[derive(Debug, Clone)]
pub struct RescaledW<'a> {
    squeezer: Squeezer<'a>,
    order: usize,
    x0: f64,
    y0: f64,
    y_bs: f64,
}

impl<'a> RescaledW<'a> {
    /// `s_oebs` must be an orthogonal-even state and `s_bs` the plain
    /// binomial state with the same `(M, eta)`.
    pub fn new(s_oebs: &'a FockAmplitudes, s_bs: &FockAmplitudes, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        let (m, eta) = oebs_params(s_oebs)?;
        match *s_bs.spec() {
            FieldStateSpec::Sbs {
                m: mb,
                eta: eb,
                epsilon: Epsilon::Zero,
            } if mb == m && eb == eta => {}
            other => {
                return Err(Error::StateMismatch(format!(
                    "reference must be sbs(M={m}, eta={eta}, epsilon=0), got {other}"
                )))
            }
        }
        let y_bs = initial_factorial_moment(s_bs, 2 * order);
        if y_bs == 0.0 {
            return Err(Error::invalid(
                "N",
                format!(
                    "<a^dag^{0} a^{0}> of the reference vanishes for M={m}",
                    2 * order
                ),
            ));
        }
        Ok(RescaledW {
            squeezer: Squeezer::new(s_oebs, 1, 2 * order + 1)?,
            order,
            x0: initial_factorial_moment(s_oebs, 2 * order + 1),
            y0: initial_factorial_moment(s_oebs, 2 * order),
            y_bs,
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        let odd = (2 * self.order + 1) as f64;
        let f = self.squeezer.record(t).f;
        (2.0 * self.x0 + odd * self.y0 - 2.0 * f) / (odd * self.y_bs)
    }
}

pub fn w_rescaled(
    s_oebs: &FockAmplitudes,
    s_bs: &FockAmplitudes,
    t: f64,
    order: usize,
) -> Result<f64> {
    Ok(RescaledW::new(s_oebs, s_bs, order)?.value(t))
}

pub fn w_series(
    s_oebs: &FockAmplitudes,
    s_bs: &FockAmplitudes,
    grid: &[f64],
    order: usize,
    threads: usize,
) -> Result<TimeSeries> {
    let w = RescaledW::new(s_oebs, s_bs, order)?;
    let values = map_grid(grid, threads, |t| Ok(w.value(t)))?;
    TimeSeries::new(
        grid.to_vec(),
        values,
        SeriesLabel::new("rescaled_w")
            .with("N", order)
            .with("state", s_oebs.spec()),
    )
}

/// Which squeezing factor feeds `Q_N` for a given superposition token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    F,
    S,
}

pub fn q_quadrature(epsilon: Epsilon, _order: usize) -> Quadrature {
    // epsilon = +-1: <a^N> vanishes for odd N, so neither factor carries the
    // (Im <a^N>)^2 term; S keeps the sign of Re <a^{2N}> for every N.
    match epsilon {
        Epsilon::I => Quadrature::F,
        Epsilon::Zero | Epsilon::Plus | Epsilon::Minus => Quadrature::S,
    }
}

/// Squeezing time that maps onto inversion time `t`: `2 t / (3 N)`.
pub fn q_time(t: f64, order: usize) -> f64 {
    2.0 * t / (3.0 * order as f64)
}

/// Rescaled squeezing factor `Q_N` of the three-photon model.
#[derive(Debug, Clone)]
pub struct RescaledQ<'a> {
    squeezer: Squeezer<'a>,
    order: usize,
    quadrature: Quadrature,
    scale: f64,
}

impl<'a> RescaledQ<'a> {
    pub fn new(
        s: &'a FockAmplitudes,
        order: usize,
        epsilon: Epsilon,
        n_bar_bs: f64,
    ) -> Result<Self> {
        if !(n_bar_bs.is_finite() && n_bar_bs > 0.0) {
            return Err(Error::invalid(
                "n_bar_bs",
                format!("{n_bar_bs} must be finite and > 0"),
            ));
        }
        Ok(RescaledQ {
            squeezer: Squeezer::new(s, Q_TRANSITION, order)?,
            order,
            quadrature: q_quadrature(epsilon, order),
            scale: n_bar_bs.powi(order as i32),
        })
    }

    pub fn record(&self, t: f64) -> SqueezeRecord {
        self.squeezer.record(q_time(t, self.order))
    }

    pub fn value(&self, t: f64) -> f64 {
        let rec = self.record(t);
        let v = match self.quadrature {
            Quadrature::F => rec.f,
            Quadrature::S => rec.s,
        };
        (self.scale - v) / self.scale
    }
}

/// Mean photon number of `BS(M, eta)`, computed from its amplitudes.
pub fn reference_bs_mean(m: usize, eta: f64) -> Result<f64> {
    Ok(sbs_amplitudes(m, eta, Epsilon::Zero)?.mean_photon())
}

pub fn q_rescaled(
    s: &FockAmplitudes,
    t: f64,
    order: usize,
    epsilon: Epsilon,
    n_bar_bs: f64,
) -> Result<f64> {
    Ok(RescaledQ::new(s, order, epsilon, n_bar_bs)?.value(t))
}

pub fn q_series(
    s: &FockAmplitudes,
    grid: &[f64],
    order: usize,
    epsilon: Epsilon,
    n_bar_bs: f64,
    threads: usize,
) -> Result<TimeSeries> {
    let q = RescaledQ::new(s, order, epsilon, n_bar_bs)?;
    let values = map_grid(grid, threads, |t| Ok(q.value(t)))?;
    TimeSeries::new(
        grid.to_vec(),
        values,
        SeriesLabel::new("rescaled_q")
            .with("N", order)
            .with("epsilon", epsilon)
            .with("state", s.spec()),
    )
}

/// `mu_N = (nu_{n+2N,k} - nu_{n,k}) / (2 sqrt(n + 1))`.
pub fn mu_exact(n: usize, k: usize, order: usize) -> f64 {
    (rabi_frequency(n + 2 * order, k) - rabi_frequency(n, k)) / (2.0 * ((n + 1) as f64).sqrt())
}

/// The same factor in the expanded product form, for `n >= 1`.
pub fn mu_expanded(n: usize, k: usize, order: usize) -> f64 {
    assert!(n >= 1, "expanded form needs n >= 1");
    let x = n as f64;
    let prod = |range: std::ops::RangeInclusive<usize>, f: &dyn Fn(f64) -> f64| {
        range.map(|j| f(j as f64)).product::<f64>()
    };
    let two_n = 2 * order;
    let shifted = prod(1..=k, &|j| 1.0 + j / x).sqrt();
    let upper = prod(1..=two_n, &|j| x + k as f64 + j);
    let lower = prod(1..=two_n, &|j| x + j);
    let root_lower = prod(1..=two_n, &|j| 1.0 + j / x).sqrt();
    let root_upper = prod(1..=two_n, &|j| 1.0 + (k as f64 + j) / x).sqrt();
    let num = x.powf(k as f64 / 2.0) * shifted * (upper - lower);
    let den = 2.0
        * x.powf(two_n as f64 + 0.5)
        * (1.0 + 1.0 / x).sqrt()
        * root_lower
        * (root_upper + root_lower);
    num / den
}

/// Exact `<a^{2N}(T)>`.
pub fn a2n_exact(s: &FockAmplitudes, k: usize, t: f64, order: usize) -> Result<Complex64> {
    Evolution::new(s, k)?.moment(t, 2 * order, 0)
}

/// Smooth-envelope approximation
/// `eta^{2N} M^N sum_n P(n) cos[T (nu_{n+2N,k} - nu_{n,k})]`.
///
/// For coherent states the prefactor is `alpha^{2N}`.
pub fn a2n_approx(s: &FockAmplitudes, k: usize, t: f64, order: usize) -> Result<f64> {
    let pre = match *s.spec() {
        FieldStateSpec::Sbs { m, eta, .. } | FieldStateSpec::OrthogonalEvenBs { m, eta } => {
            eta.powi(2 * order as i32) * (m as f64).powi(order as i32)
        }
        FieldStateSpec::Coherent { alpha, .. } => alpha.powi(2 * order as i32),
    };
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let sum = numerics::sum(s.amplitudes().iter().enumerate().map(|(n, c)| {
        let p = c.norm_sqr();
        if p == 0.0 {
            0.0
        } else {
            p * (t * (rabi_frequency(n + 2 * order, k) - rabi_frequency(n, k))).cos()
        }
    }));
    Ok(pre * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_amplitudes, oebs_amplitudes, Parity};

    #[test]
    fn fock_state_factors() {
        let s = sbs_amplitudes(9, 1.0, Epsilon::Zero).unwrap();
        let r = squeezing_factors(&s, 1, 0.0, 1).unwrap();
        assert!((r.f - 9.0).abs() < 1e-12 && (r.s - 9.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_is_a_minimum_uncertainty_state() {
        let s = coherent_amplitudes(1.7, Parity::None, 60).unwrap();
        for order in 1..=3 {
            let r = squeezing_factors(&s, 1, 0.0, order).unwrap();
            let scale = 1.7f64.powi(2 * order as i32);
            assert!(r.f.abs() < 1e-11 * scale, "N={order}: F={}", r.f);
            assert!(r.s.abs() < 1e-11 * scale, "N={order}: S={}", r.s);
        }
    }

    #[test]
    fn record_identities() {
        let s = sbs_amplitudes(60, 0.5, Epsilon::I).unwrap();
        let sq = Squeezer::new(&s, 2, 2).unwrap();
        for i in 0..30 {
            let r = sq.record(0.3 * i as f64);
            let f = r.m_ad_n_a_n + r.m_a_2n.re - 2.0 * r.m_a_n.re.powi(2);
            let s_ = r.m_ad_n_a_n - r.m_a_2n.re - 2.0 * r.m_a_n.im.powi(2);
            assert!((r.f - f).abs() <= 1e-12 * r.m_ad_n_a_n.abs().max(1.0));
            assert!((r.s - s_).abs() <= 1e-12 * r.m_ad_n_a_n.abs().max(1.0));
        }
    }

    #[test]
    fn oebs_odd_orders_reduce_to_the_normal_moment() {
        let s = oebs_amplitudes(370, 0.7).unwrap();
        for order in [1, 3] {
            let sq = Squeezer::new(&s, 1, order).unwrap();
            for i in 0..20 {
                let r = sq.record(1.3 * i as f64);
                assert_eq!(r.m_a_n, Complex64::new(0.0, 0.0));
                assert_eq!(r.m_a_2n, Complex64::new(0.0, 0.0));
                assert_eq!(r.f, r.m_ad_n_a_n);
                assert_eq!(r.s, r.m_ad_n_a_n);
            }
        }
    }

    #[test]
    fn w_is_normalized_to_the_moment_ratio_at_zero() {
        let oebs = oebs_amplitudes(370, 0.7).unwrap();
        let bs = sbs_amplitudes(370, 0.7, Epsilon::Zero).unwrap();
        let w0 = w_rescaled(&oebs, &bs, 0.0, 1).unwrap();
        let ratio = initial_factorial_moment(&oebs, 2) / initial_factorial_moment(&bs, 2);
        assert!((w0 - ratio).abs() < 1e-12);
        assert!((w0 - 1.0).abs() < 0.05 && w0 != 1.0);
    }

    #[test]
    fn w_rejects_mismatched_states() {
        let oebs = oebs_amplitudes(370, 0.7).unwrap();
        let other = sbs_amplitudes(370, 0.6, Epsilon::Zero).unwrap();
        assert!(matches!(
            RescaledW::new(&oebs, &other, 1),
            Err(Error::StateMismatch(_))
        ));
        let even = sbs_amplitudes(370, 0.7, Epsilon::Plus).unwrap();
        assert!(RescaledW::new(&oebs, &even, 1).is_err());
        assert!(RescaledW::new(&even, &even, 1).is_err());
    }

    #[test]
    fn explicit_odd_factor_matches_moment_route() {
        let oebs = oebs_amplitudes(120, 0.6).unwrap();
        let sq = Squeezer::new(&oebs, 1, 3).unwrap();
        for i in 0..40 {
            let t = 0.8 * i as f64;
            let a = sq.record(t).f;
            let b = oebs_odd_factor_explicit(&oebs, t, 1).unwrap();
            assert!(
                (a - b).abs() < 1e-10 * a.abs().max(1.0),
                "t={t}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn q_at_zero_uses_initial_moments() {
        let s = sbs_amplitudes(100, 0.3, Epsilon::Zero).unwrap();
        let nb = reference_bs_mean(100, 0.3).unwrap();
        assert!((nb - 9.0).abs() < 1e-12);
        let q0 = q_rescaled(&s, 0.0, 1, Epsilon::Zero, nb).unwrap();
        let r = squeezing_factors(&s, 3, 0.0, 1).unwrap();
        assert!((q0 - (nb - r.s) / nb).abs() < 1e-14);
        assert!(RescaledQ::new(&s, 1, Epsilon::Zero, 0.0).is_err());
    }

    #[test]
    fn q_quadrature_branches() {
        assert_eq!(q_quadrature(Epsilon::Zero, 1), Quadrature::S);
        assert_eq!(q_quadrature(Epsilon::I, 2), Quadrature::F);
        assert_eq!(q_quadrature(Epsilon::Plus, 2), Quadrature::S);
        // Odd N with a parity state: <a^N> vanishes, so the two factors
        // differ only by 2 Re<a^{2N}>.
        let s = sbs_amplitudes(200, 0.6, Epsilon::Minus).unwrap();
        let r = squeezing_factors(&s, 3, 2.5, 1).unwrap();
        assert_eq!(r.m_a_n, Complex64::new(0.0, 0.0));
        assert!((r.f - r.s - 2.0 * r.m_a_2n.re).abs() < 1e-12 * r.f.abs());
    }

    #[test]
    fn mu_forms_agree() {
        for n in [1usize, 2, 5, 17, 100] {
            for k in 1..=4 {
                for order in 1..=3 {
                    let a = mu_exact(n, k, order);
                    let b = mu_expanded(n, k, order);
                    assert!(
                        (a - b).abs() < 1e-10 * a.abs(),
                        "n={n} k={k} N={order}: {a} {b}"
                    );
                }
            }
        }
        // nu_{102,1} = sqrt(103), nu_{100,1} = sqrt(101)
        let v = (103f64.sqrt() - 101f64.sqrt()) / (2.0 * 101f64.sqrt());
        assert!((mu_exact(100, 1, 1) - v).abs() < 1e-15);
    }

    #[test]
    fn a2n_routes() {
        let oebs = oebs_amplitudes(80, 0.5).unwrap();
        assert_eq!(
            a2n_exact(&oebs, 1, 3.0, 1).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let s = sbs_amplitudes(200, 0.6, Epsilon::Zero).unwrap();
        let evo = Evolution::new(&s, 3).unwrap();
        assert_eq!(
            a2n_exact(&s, 3, 1.7, 1).unwrap(),
            evo.moment(1.7, 2, 0).unwrap()
        );
        let approx0 = a2n_approx(&s, 3, 0.0, 2).unwrap();
        assert!((approx0 - 0.6f64.powi(4) * 200f64.powi(2)).abs() < 1e-9);
    }
}
