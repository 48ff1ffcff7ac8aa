//! Entropy of an autoequivalence from its matrix `A`.
//!
//! The closed form is `h_t = log rho + slope * t`, with `rho` the spectral
//! radius on the Mukai lattice and `slope` the average homological shift per
//! application. The numerical side rebuilds the same number from the growth of
//! Euler characteristics `chi(N^i, A^n N^j)` between powers of a line bundle.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{eigenvalues, QuadraticReal};
use crate::fm_group::{act_on_vector, FMMatrix};
use crate::mukai_lattice::{central_charge, euler_chi, exp_vector, MukaiVector};

/// `h_t = log(rho) + slope * t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyFunction {
    pub rho: QuadraticReal,
    pub slope: Rational64,
}

impl EntropyFunction {
    pub fn rho_is_one(&self) -> bool {
        self.rho == QuadraticReal::one()
    }

    pub fn log_rho(&self) -> f64 {
        if self.rho_is_one() {
            0.0
        } else {
            self.rho.ln()
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.log_rho() + rational_to_f64(&self.slope) * t
    }
}

pub(crate) fn rational_to_f64(q: &Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn two() -> BigInt {
    BigInt::from(2)
}

/// `alpha^2` for `tr A > 2`, and `1` otherwise.
pub fn spectral_radius(a: &FMMatrix) -> QuadraticReal {
    let tr = a.trace();
    if tr > two() {
        let (alpha, _) = eigenvalues(&tr, &BigInt::one()).expect("tr > 2 has real roots");
        alpha.pow(2)
    } else {
        QuadraticReal::one()
    }
}

/// Average shift per application, read off from the sign of `b` and the trace.
pub fn shift_drift(a: &FMMatrix) -> Rational64 {
    let tr = a.trace();
    let r = Rational64::new;
    if a.b.is_zero() {
        return r(0, 1);
    }
    let positive = a.b.is_positive();
    if tr >= two() {
        if positive {
            r(0, 1)
        } else {
            r(-2, 1)
        }
    } else if tr.is_one() {
        if positive {
            r(-2, 3)
        } else {
            r(-4, 3)
        }
    } else {
        r(-1, 1)
    }
}

pub fn entropy_closed(a: &FMMatrix) -> EntropyFunction {
    EntropyFunction {
        rho: spectral_radius(a),
        slope: shift_drift(a),
    }
}

/// Slope `x` of a semi-homogeneous class, `mu = xH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeState {
    pub x: QuadraticReal,
}

impl SlopeState {
    pub fn new(x: QuadraticReal) -> Self {
        SlopeState { x }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        SlopeState {
            x: QuadraticReal::from_rational(BigRational::new(num.into(), den.into())),
        }
    }
}

/// `x -> (c + d x) / (a + bD x)`.
pub fn slope_step(a: &FMMatrix, x: &SlopeState) -> Result<SlopeState> {
    let q = |n: &BigInt| QuadraticReal::from_integer(n.clone());
    let bd = q(&(&a.b * a.params().d_big()));
    let den = &q(&a.a) + &(&bd * &x.x);
    let num = &q(&a.c) + &(&q(&a.d) * &x.x);
    match num.checked_div(&den) {
        Some(x) => Ok(SlopeState { x }),
        None => Err(Error::PoleHit(x.x.to_string())),
    }
}

/// The attracting fixed point `s = (alpha - a) / (bD)` of [`slope_step`].
pub fn slope_fixed_point(a: &FMMatrix) -> Result<QuadraticReal> {
    if a.b.is_zero() {
        return Err(Error::NotApplicable(
            "slope map has no finite fixed point when b = 0".into(),
        ));
    }
    let (alpha, _) = eigenvalues(&a.trace(), &BigInt::one())?;
    let bd = BigRational::from_integer(&a.b * a.params().d_big());
    Ok((&alpha - &QuadraticReal::from_integer(a.a.clone())).scale(&bd.recip()))
}

/// Smallest `m >= 1` with `m > 1 - s`.
///
/// Then `N^{i}` with `i >= -3` and the images `A^n N^j` have eventually
/// ordered slopes, so every Euler characteristic in the sum has a fixed sign.
pub fn choose_twist(a: &FMMatrix) -> Result<u64> {
    let tr = a.trace();
    if tr < two() || a.b.is_zero() {
        return Err(Error::NotApplicable(format!(
            "twist selection needs tr >= 2 and b != 0, got tr = {tr}, b = {}",
            a.b
        )));
    }
    let s = slope_fixed_point(a)?;
    let bound: BigInt = (&QuadraticReal::one() - &s).floor() + 1;
    Ok(bound
        .max(BigInt::one())
        .to_u64()
        .expect("twist fits in u64"))
}

/// Whether a caller-chosen twist `m` satisfies the margin used by [`choose_twist`].
pub fn twist_margin_met(a: &FMMatrix, m: u64) -> Result<bool> {
    let s = slope_fixed_point(a)?;
    let gap = &(&QuadraticReal::from_integer(m) + &s) - &QuadraticReal::one();
    Ok(gap.signum() == Ordering::Greater)
}

/// `delta'_0(n)` for `n = 0..=n_max` with the generators `N^{-3m..-m}` and
/// `N^{m..3m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSequence {
    pub n_values: Vec<u64>,
    pub delta_values: Vec<BigInt>,
    /// `log(delta(n+1) / delta(n))`; `None` where a term vanishes.
    pub ratio_estimates: Vec<Option<f64>>,
}

impl GrowthSequence {
    /// Growth rate from the last three terms.
    ///
    /// The sequences here are `P(n) + c rho^n + O(rho^-n)` with `P` a
    /// polynomial, so `log delta(n) = const + k log(n+1) + n log(rho) + ...`.
    /// Fitting `k` from the second log-difference removes the `O(1/n)` bias
    /// that the plain ratio has on polynomial sequences.
    pub fn growth_rate(&self) -> Result<f64> {
        self.growth_rate_until(self.delta_values.len() - 1)
    }

    /// As [`growth_rate`](Self::growth_rate), using terms up to index `last`.
    pub fn growth_rate_until(&self, last: usize) -> Result<f64> {
        if last < 2 || last >= self.delta_values.len() {
            return Err(Error::InvalidInput(format!(
                "need three terms ending at index {last}"
            )));
        }
        let window = &self.delta_values[last - 2..=last];
        if let Some(k) = window.iter().position(|d| !d.is_positive()) {
            return Err(Error::DegenerateSequence {
                n: self.n_values[last - 2 + k],
            });
        }
        let (lo, mid, hi) = (&window[0], &window[1], &window[2]);
        let ratio = ln_ratio(hi, mid);
        let second = ln_ratio(&(hi * lo), &(mid * mid));
        // log(n+1) at n = last-2, last-1, last
        let n = self.n_values[last] as f64;
        let g_hi = (1.0 / n).ln_1p();
        let g_second = (-1.0 / (n * n)).ln_1p();
        let k = second / g_second;
        Ok(ratio - k * g_hi)
    }

    pub fn last_ratio(&self) -> Option<f64> {
        self.ratio_estimates.last().copied().flatten()
    }
}

/// Natural log of a positive integer of any size.
pub fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log(num / den)` for positive integers, accurate also when the ratio is near 1.
pub fn ln_ratio(num: &BigInt, den: &BigInt) -> f64 {
    let diff = num - den;
    if (&diff * BigInt::from(2)).abs() < *den {
        let q = BigRational::new(diff, den.clone());
        q.to_f64().expect("bounded by 1/2").ln_1p()
    } else {
        big_ln(num) - big_ln(den)
    }
}

fn generator_exponents(m: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let m = BigInt::from(m);
    let sources = [-3, -2, -1].iter().map(|i| &m * *i).collect();
    let targets = [1, 2, 3].iter().map(|j| &m * *j).collect();
    (sources, targets)
}

/// Orbits `A^n v` for `n = 0..=n_max`.
fn orbit(a: &FMMatrix, v: MukaiVector, n_max: u64) -> Vec<MukaiVector> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut cur = v;
    for _ in 0..n_max {
        let next = act_on_vector(a, &cur);
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    out
}

pub fn delta0_sequence(a: &FMMatrix, m: u64, n_max: u64) -> Result<GrowthSequence> {
    if m == 0 {
        return Err(Error::InvalidInput("twist m must be positive".into()));
    }
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "n_max = {n_max}, expected >= 2"
        )));
    }
    let params = a.params();
    let (sources, targets) = generator_exponents(m);
    let sources: Vec<MukaiVector> = sources.into_iter().map(|i| exp_vector(i, params)).collect();
    // one orbit per target generator; each is an independent chain
    let per_target: Vec<Vec<BigInt>> = targets
        .into_par_iter()
        .map(|j| {
            orbit(a, exp_vector(j, params), n_max)
                .iter()
                .map(|w| {
                    sources
                        .iter()
                        .map(|v| euler_chi(v, w, params).abs())
                        .sum::<BigInt>()
                })
                .collect()
        })
        .collect();
    let len = n_max as usize + 1;
    let delta_values: Vec<BigInt> = (0..len)
        .map(|n| per_target.iter().map(|col| &col[n]).sum())
        .collect();
    let ratio_estimates = delta_values
        .windows(2)
        .map(|w| (w[0].is_positive() && w[1].is_positive()).then(|| ln_ratio(&w[1], &w[0])))
        .collect();
    Ok(GrowthSequence {
        n_values: (0..=n_max).collect(),
        delta_values,
        ratio_estimates,
    })
}

/// Numerical growth at `t = 0` together with the drift, so `h_t` can be
/// evaluated on a grid without recomputing the sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    /// Twist used; `None` for the periodic cases, which skip the sequence.
    pub m: Option<u64>,
    pub n_max: u64,
    pub growth: f64,
    pub drift: Rational64,
    pub last_ratio: Option<f64>,
    /// Change of the growth estimate between `n_max - 1` and `n_max`.
    pub last_change: Option<f64>,
}

impl EstimateReport {
    pub fn at(&self, t: f64) -> f64 {
        self.growth + rational_to_f64(&self.drift) * t
    }
}

fn is_periodic(a: &FMMatrix) -> bool {
    a.trace() < two()
}

/// Estimates the growth with the twist from [`choose_twist`] (or `1` when
/// `b = 0`).
pub fn estimate_growth(a: &FMMatrix, n_max: u64) -> Result<EstimateReport> {
    let m = if a.b.is_zero() || is_periodic(a) {
        1
    } else {
        choose_twist(a)?
    };
    estimate_growth_with_twist(a, m, n_max)
}

pub fn estimate_growth_with_twist(a: &FMMatrix, m: u64, n_max: u64) -> Result<EstimateReport> {
    let drift = shift_drift(a);
    if is_periodic(a) {
        return Ok(EstimateReport {
            m: None,
            n_max,
            growth: 0.0,
            drift,
            last_ratio: None,
            last_change: None,
        });
    }
    let seq = delta0_sequence(a, m, n_max)?;
    let growth = seq.growth_rate()?;
    let last_change = if n_max >= 3 {
        Some((growth - seq.growth_rate_until(n_max as usize - 1)?).abs())
    } else {
        None
    };
    Ok(EstimateReport {
        m: Some(m),
        n_max,
        growth,
        drift,
        last_ratio: seq.last_ratio(),
        last_change,
    })
}

/// Growth rate of `delta'_0` plus `shift_drift(A) * t`.
pub fn entropy_estimate(a: &FMMatrix, t: f64, n_max: u64) -> Result<f64> {
    Ok(estimate_growth(a, n_max)?.at(t))
}

/// Growth of `sum_j |Z(A^n N^{jm})|` for the central charge at `z`.
pub fn mass_growth_estimate(a: &FMMatrix, z: Complex64, m: u64, n_max: u64) -> Result<f64> {
    if a.trace() <= two() {
        return Err(Error::NotApplicable(format!(
            "mass growth needs tr > 2, got tr = {}",
            a.trace()
        )));
    }
    if m == 0 || n_max < 1 {
        return Err(Error::InvalidInput("need m >= 1 and n_max >= 1".into()));
    }
    let params = a.params();
    // validates z before any work
    central_charge(z, &MukaiVector::zero(), params)?;
    let (_, targets) = generator_exponents(m);
    let pairs: Vec<(MukaiVector, MukaiVector)> = targets
        .into_iter()
        .map(|j| {
            let orb = orbit(a, exp_vector(j, params), n_max);
            let n = orb.len();
            (orb[n - 2].clone(), orb[n - 1].clone())
        })
        .collect();
    // scale both steps by the same power of two so the floats stay finite
    let bits = pairs
        .iter()
        .flat_map(|(v, w)| [v, w])
        .flat_map(|v| [v.r.bits(), v.d.bits(), v.a.bits()])
        .max()
        .unwrap_or(0);
    let shift = bits.saturating_sub(500);
    let scaled = |v: &MukaiVector| MukaiVector::new(&v.r >> shift, &v.d >> shift, &v.a >> shift);
    let mut prev = 0.0;
    let mut last = 0.0;
    for (v, w) in &pairs {
        prev += central_charge(z, &scaled(v), params)?.norm();
        last += central_charge(z, &scaled(w), params)?.norm();
    }
    if !(prev > 0.0 && last > 0.0) {
        return Err(Error::DegenerateSequence { n: n_max });
    }
    Ok((last / prev).ln())
}

/// Comparison of the numerical growth at `t = 0` with `log rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct KtReport {
    pub estimate: f64,
    pub log_rho: f64,
    pub difference: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn kt_check(a: &FMMatrix, n_max: u64, tol: f64) -> Result<KtReport> {
    let estimate = estimate_growth(a, n_max)?.growth;
    let log_rho = entropy_closed(a).log_rho();
    let difference = estimate - log_rho;
    Ok(KtReport {
        estimate,
        log_rho,
        difference,
        tol,
        pass: difference.abs() < tol,
    })
}
