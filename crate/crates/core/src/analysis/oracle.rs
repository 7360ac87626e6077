//! Reference evaluation of the field moments for small binomial states.
//!
//! Factorial ratios are exact integers, and amplitudes, trigonometric
//! weights and sums are carried in double-double arithmetic. Nothing here
//! shares code with the log-domain production path.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{Epsilon, FieldStateSpec};

pub const ORACLE_MAX_M: usize = 30;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from_u128(v: u128) -> Dd {
        let hi = v as f64;
        // hi rounds v; the remainder is exact in i128 and fits an f64 exactly
        // for the magnitudes used here (below 2^106).
        let rem = v as i128 - hi as i128;
        quick_two_sum(hi, rem as f64)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let xx = two_prod(x, x);
        let corr = ((self - xx).hi) / (2.0 * x);
        quick_two_sum(x, corr)
    }

    fn powi(self, e: usize) -> Dd {
        (0..e).fold(Dd::ONE, |acc, _| acc * self)
    }

    fn cos_sin(self) -> (Dd, Dd) {
        let (s, c) = self.hi.sin_cos();
        // First-order correction for the low word.
        let cos = two_sum(c, -s * self.lo);
        let sin = two_sum(s, c * self.lo);
        (cos, sin)
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(r.hi, r.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    fn conj(self) -> Self {
        DdComplex {
            re: self.re,
            im: -self.im,
        }
    }

    fn scale(self, s: Dd) -> Self {
        DdComplex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    fn is_zero(self) -> bool {
        self.re.hi == 0.0 && self.im.hi == 0.0
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DdComplex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        DdComplex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

fn binomial(m: u128, n: u128) -> u128 {
    (0..n).fold(1u128, |c, i| c * (m - i) / (i + 1))
}

/// `(j + s)! / j!` as an exact integer.
fn rising(j: u128, s: usize) -> Result<u128> {
    (1..=s as u128).try_fold(1u128, |acc, i| {
        acc.checked_mul(j + i)
            .ok_or_else(|| Error::OracleDomain(format!("({j} + {s})! / {j}! overflows")))
    })
}

fn check_spec(spec: &FieldStateSpec) -> Result<(usize, f64)> {
    let (m, eta) = spec
        .binomial_params()
        .ok_or_else(|| Error::OracleDomain(format!("{spec} is not a binomial family")))?;
    if m == 0 || m > ORACLE_MAX_M {
        return Err(Error::OracleDomain(format!(
            "M = {m} outside 1..={ORACLE_MAX_M}"
        )));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::OracleDomain(format!("eta = {eta} outside (0, 1]")));
    }
    Ok((m, eta))
}

fn amplitudes_dd(spec: &FieldStateSpec) -> Result<Vec<DdComplex>> {
    let (m, eta) = check_spec(spec)?;
    let p = two_prod(eta, eta);
    let q = Dd::ONE - p;
    let raw: Vec<DdComplex> = (0..=m)
        .map(|n| {
            let factor = match *spec {
                FieldStateSpec::Sbs { epsilon, .. } => {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    match epsilon {
                        Epsilon::Zero => (1.0, 0.0),
                        Epsilon::Plus => (1.0 + sign, 0.0),
                        Epsilon::Minus => (1.0 - sign, 0.0),
                        Epsilon::I => (1.0, sign),
                    }
                }
                FieldStateSpec::OrthogonalEvenBs { .. } => {
                    if n % 4 == 0 || m < 4 && n == 0 {
                        (1.0, 0.0)
                    } else {
                        (0.0, 0.0)
                    }
                }
                FieldStateSpec::Coherent { .. } => unreachable!(),
            };
            let weight = if matches!(spec, FieldStateSpec::OrthogonalEvenBs { .. }) && m < 4 {
                Dd::ONE
            } else {
                (Dd::from_u128(binomial(m as u128, n as u128)) * p.powi(n) * q.powi(m - n)).sqrt()
            };
            DdComplex {
                re: weight * Dd::from(factor.0),
                im: weight * Dd::from(factor.1),
            }
        })
        .collect();
    let norm = raw.iter().fold(Dd::ZERO, |acc, c| acc + c.norm_sqr());
    if norm.hi == 0.0 {
        return Err(Error::ZeroNorm(spec.to_string()));
    }
    let inv = Dd::ONE / norm.sqrt();
    Ok(raw.into_iter().map(|c| c.scale(inv)).collect())
}

/// Normalized amplitudes from exact binomial coefficients.
pub fn oracle_amplitudes(spec: &FieldStateSpec) -> Result<Vec<Complex64>> {
    Ok(amplitudes_dd(spec)?
        .into_iter()
        .map(|c| Complex64::new(c.re.to_f64(), c.im.to_f64()))
        .collect())
}

/// `<a^dag^{s2}(T) a^{s1}(T)>` summed termwise over
/// `C_{n+s2}^* C_{n+s1} [cos cos sqrt((n+s1)!(n+s2)!)/n! + sin sin sqrt((n+k+s1)!(n+k+s2)!)/(n+k)!]`,
/// with `n` running over every value for which the factorials are defined.
pub fn oracle_moment(
    spec: &FieldStateSpec,
    k: usize,
    t: f64,
    s1: usize,
    s2: usize,
) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::OracleDomain("k must be >= 1".into()));
    }
    let amps = amplitudes_dd(spec)?;
    let m = amps.len() as i64 - 1;
    let amp = |i: i64| -> DdComplex {
        if (0..=m).contains(&i) {
            amps[i as usize]
        } else {
            DdComplex::default()
        }
    };
    let trig = |i: i64| -> Result<(Dd, Dd)> {
        let nu = Dd::from_u128(rising(i as u128, k)?).sqrt();
        Ok((Dd::from(t) * nu).cos_sin())
    };
    let (s1i, s2i, ki) = (s1 as i64, s2 as i64, k as i64);
    let mut acc = DdComplex::default();
    for n in -(ki.max(s1i).max(s2i))..=m {
        let (ia, ib) = (n + s2i, n + s1i);
        let pair = amp(ia).conj() * amp(ib);
        if pair.is_zero() {
            continue;
        }
        let (ca, sa) = trig(ia)?;
        let (cb, sb) = trig(ib)?;
        let mut bracket = Dd::ZERO;
        if n >= 0 {
            let ratio = rising(n as u128, s1)?
                .checked_mul(rising(n as u128, s2)?)
                .ok_or_else(|| Error::OracleDomain("excited factor overflows".into()))?;
            bracket = bracket + ca * cb * Dd::from_u128(ratio).sqrt();
        }
        if n + ki >= 0 {
            let j = (n + ki) as u128;
            let ratio = rising(j, s1)?
                .checked_mul(rising(j, s2)?)
                .ok_or_else(|| Error::OracleDomain("ground factor overflows".into()))?;
            bracket = bracket + sa * sb * Dd::from_u128(ratio).sqrt();
        }
        acc = acc + pair.scale(bracket);
    }
    Ok(Complex64::new(acc.re.to_f64(), acc.im.to_f64()))
}
