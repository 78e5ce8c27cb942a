//! Sine and cosine integrals.
//!
//! `Si(x) = ∫₀ˣ sin t / t dt` and `Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt`
//! evaluated to near machine precision over the whole range this crate needs
//! (arguments up to a few thousand π appear when large Galerkin blocks are
//! assembled, and the asymptotic branch is exercised far beyond that).
//!
//! Three regimes:
//! * `|x| ≤ 4` — Maclaurin series for both integrals; alternating with rapidly
//!   shrinking terms, no cancellation worth worrying about this close in.
//! * `4 < x < 100` — modified-Lentz evaluation of the continued fraction for
//!   `E₁(ix)`, which yields the auxiliary pair `(f, g)` and from it both
//!   integrals with uniform accuracy. The series would still converge here but
//!   loses digits to cancellation, and the asymptotic expansion cannot reach
//!   1e-14 until much later; the continued fraction covers the gap.
//! * `x ≥ 100` — asymptotic expansions of `(f, g)` truncated at the smallest
//!   term, well past the point where that truncation error is below 1e-16.

use crate::math;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Accuracy contract of this module: every value returned by [`si`]/[`ci`]
/// is within `abs_tol` of the true one, with the Maclaurin series used up to
/// `series_asymptotic_crossover` and auxiliary-function evaluation beyond.
///
/// The defaults describe what the implementation actually achieves (validated
/// against an independent quadrature oracle in the test suite); the type
/// exists so that the contract is stated in one inspectable place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionAccuracy {
    pub abs_tol: f64,
    pub series_asymptotic_crossover: f64,
}

impl SpecialFunctionAccuracy {
    pub fn validate(&self) -> Result<(), SpecfunError> {
        if !(self.abs_tol >= 1e-15 && self.abs_tol <= 1e-8) {
            return Err(SpecfunError::BadAccuracy);
        }
        if self.series_asymptotic_crossover.is_nan() || self.series_asymptotic_crossover <= 0.0 {
            return Err(SpecfunError::BadAccuracy);
        }
        Ok(())
    }
}

impl Default for SpecialFunctionAccuracy {
    fn default() -> Self {
        SpecialFunctionAccuracy {
            abs_tol: 1e-14,
            series_asymptotic_crossover: SERIES_CROSSOVER,
        }
    }
}

/// Series/auxiliary crossover. The series is kept well inside its
/// cancellation-free zone; pushing it further costs digits faster than the
/// auxiliary continued fraction does.
const SERIES_CROSSOVER: f64 = 4.0;
/// Below this the continued fraction converges quickly; above it the
/// optimally truncated asymptotic series is already at machine precision and
/// much cheaper.
const ASYMPTOTIC_CROSSOVER: f64 = 100.0;

/// Domain violations for the integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecfunError {
    /// `ci` requires a strictly positive argument.
    NonPositive(f64),
    /// NaN or infinite argument.
    NonFinite(f64),
    /// Accuracy contract outside its allowed ranges.
    BadAccuracy,
}

impl fmt::Display for SpecfunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecfunError::NonPositive(x) => {
                write!(f, "cosine integral needs x > 0, got {x}")
            }
            SpecfunError::NonFinite(x) => write!(f, "argument must be finite, got {x}"),
            SpecfunError::BadAccuracy => write!(
                f,
                "accuracy contract out of range (abs_tol in [1e-15, 1e-8], crossover > 0)"
            ),
        }
    }
}

impl core::error::Error for SpecfunError {}

/// Sine integral, defined for all finite real `x`.
///
/// Exactly odd by construction: evaluated on `|x|` and given the sign of `x`,
/// so `si(-x) == -si(x)` bitwise.
pub fn si(x: f64) -> Result<f64, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::NonFinite(x));
    }
    let ax = math::abs(x);
    let magnitude = if ax <= SERIES_CROSSOVER {
        si_series(ax)
    } else {
        let (f, g) = aux_fg(ax);
        let (s, c) = math::sin_cos(ax);
        FRAC_PI_2 - f * c - g * s
    };
    Ok(math::copysign(magnitude, x))
}

/// Cosine integral for finite `x > 0`.
pub fn ci(x: f64) -> Result<f64, SpecfunError> {
    if x.is_nan() || x.is_infinite() {
        return Err(SpecfunError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecfunError::NonPositive(x));
    }
    if x <= SERIES_CROSSOVER {
        Ok(ci_series(x))
    } else {
        let (f, g) = aux_fg(x);
        let (s, c) = math::sin_cos(x);
        Ok(f * s - g * c)
    }
}

/// Both integrals at once for finite `x > 0`; one trig/auxiliary evaluation
/// instead of two on the hot path of matrix assembly.
pub fn si_ci_pair(x: f64) -> Result<(f64, f64), SpecfunError> {
    if x.is_nan() || x.is_infinite() {
        return Err(SpecfunError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecfunError::NonPositive(x));
    }
    if x <= SERIES_CROSSOVER {
        Ok((si_series(x), ci_series(x)))
    } else {
        let (f, g) = aux_fg(x);
        let (s, c) = math::sin_cos(x);
        Ok((FRAC_PI_2 - f * c - g * s, f * s - g * c))
    }
}

/// Maclaurin series of `Si`; used for `0 ≤ x ≤ 4`.
fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^(2n+1) / (2n+1)!
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        let d = (2 * n) as f64 * (2 * n + 1) as f64;
        term *= -x2 / d;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if math::abs(add) <= 1e-18 * math::abs(sum) || n > 200 {
            return sum;
        }
    }
}

/// Maclaurin series of `Ci` via the entire part `Cin`; used for `0 < x ≤ 4`.
fn ci_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0; // (-1)^n x^(2n) / (2n)!
    let mut sum = 0.0; // accumulates -Cin(x)
    let mut n = 0u32;
    loop {
        n += 1;
        let d = (2 * n - 1) as f64 * (2 * n) as f64;
        term *= -x2 / d;
        let add = term / (2 * n) as f64;
        sum += add;
        if math::abs(add) < 1e-18 * (1.0 + math::abs(sum)) {
            break;
        }
    }
    EULER_GAMMA + math::ln(x) + sum
}

/// Auxiliary functions `f, g` with `Si = π/2 − f cos − g sin`,
/// `Ci = f sin − g cos`. Continued fraction below the asymptotic crossover,
/// truncated asymptotic series above.
fn aux_fg(x: f64) -> (f64, f64) {
    if x < ASYMPTOTIC_CROSSOVER {
        aux_fg_lentz(x)
    } else {
        aux_fg_asymptotic(x)
    }
}

/// Modified Lentz on the continued fraction of `e^{ix} E₁(ix) = g − i f`:
///
/// `e^{ix} E₁(ix) = 1/(1 + ix − 1²/(3 + ix − 2²/(5 + ix − …)))`
fn aux_fg_lentz(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-290;
    const EPS: f64 = 1e-16;
    const MAX_ITER: u32 = 400;

    // b_1 = 1 + ix, thereafter b += 2; a_k = -(k-1)^2.
    let (mut br, bi) = (1.0, x);
    let (mut cr, mut ci_) = (1.0 / TINY, 0.0);
    let (mut dr, mut di) = cinv(br, bi);
    let (mut hr, mut hi) = (dr, di);
    let mut k = 1u32;
    while k < MAX_ITER {
        k += 1;
        let a = -((k - 1) as f64) * ((k - 1) as f64);
        br += 2.0;
        // d = 1 / (a*d + b)
        let (t_r, t_i) = cinv(a * dr + br, a * di + bi);
        dr = t_r;
        di = t_i;
        // c = b + a/c
        let (q_r, q_i) = cinv(cr, ci_);
        cr = br + a * q_r;
        ci_ = bi + a * q_i;
        // delta = c*d; h *= delta
        let del_r = cr * dr - ci_ * di;
        let del_i = cr * di + ci_ * dr;
        let (nh_r, nh_i) = (hr * del_r - hi * del_i, hr * del_i + hi * del_r);
        hr = nh_r;
        hi = nh_i;
        if math::abs(del_r - 1.0) + math::abs(del_i) < EPS {
            break;
        }
    }
    // h = g - i f  =>  f = -Im h, g = Re h
    (-hi, hr)
}

/// Complex reciprocal, robust against overflow for the magnitudes seen here.
#[inline]
fn cinv(re: f64, im: f64) -> (f64, f64) {
    if math::abs(re) >= math::abs(im) {
        let r = im / re;
        let den = re + im * r;
        (1.0 / den, -r / den)
    } else {
        let r = re / im;
        let den = re * r + im;
        (r / den, -1.0 / den)
    }
}

/// Divergent asymptotic expansions
/// `f ~ (1/x) Σ (−1)ⁿ (2n)!/x^{2n}`, `g ~ (1/x²) Σ (−1)ⁿ (2n+1)!/x^{2n}`,
/// truncated at the smallest term. For `x ≥ 100` that term is far below
/// 1e-16 relative, so the truncation never limits accuracy.
fn aux_fg_asymptotic(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut f_sum = 1.0;
    let mut g_sum = 1.0;
    let mut f_term = 1.0;
    let mut g_term = 1.0;
    let mut n = 0u32;
    loop {
        n += 1;
        let two_n = (2 * n) as f64;
        let f_next = f_term * -(two_n - 1.0) * two_n / x2;
        let g_next = g_term * -two_n * (two_n + 1.0) / x2;
        if math::abs(f_next) >= math::abs(f_term) || n > 200 {
            break;
        }
        f_term = f_next;
        g_term = g_next;
        f_sum += f_term;
        g_sum += g_term;
        if math::abs(f_term) < 1e-17 * math::abs(f_sum)
            && math::abs(g_term) < 1e-17 * math::abs(g_sum)
        {
            break;
        }
    }
    (f_sum / x, g_sum / x2)
}
