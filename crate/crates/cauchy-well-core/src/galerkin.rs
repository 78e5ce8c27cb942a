//! Assembly of the symmetric Galerkin matrices of the operator in the two
//! parity bases.
//!
//! The even block is `γ_ki = ∫₋₁¹ f_k(x) cos((2i+1)πx/2) dx` over modes
//! `k, i ≥ 0`; the odd block is `η_ki = ∫₋₁¹ g_k(x) sin(kπx) dx` over modes
//! `k, i ≥ 1`. Storage is zero-based for both parities; for the odd block
//! stored index `j` corresponds to mode `j + 1`, with the conversion confined
//! to [`mode_of`].
//!
//! Three independent evaluation routes exist, in decreasing order of cost:
//!
//! 1. [`element_by_oracle`] — outer quadrature over the ε-limit oracle of
//!    [`crate::operator::apply_oracle`]; slowest, uses no closed forms at all.
//! 2. [`element`] — singularity-aware quadrature of the closed-form operator
//!    image against the basis function (the reference route; also the route
//!    the error model of `QuadratureSpec` speaks about).
//! 3. [`element_analytic`] — full closed form of the element itself in
//!    sine/cosine integrals; exact up to rounding.
//!
//! Route 3 is what [`assemble`] uses: the test suite validates it element-wise
//! against route 2 (and route 2 against route 1 on small indices), which is
//! the gate for enabling it. It reduces assembly from minutes to milliseconds
//! and carries no quadrature truncation error at all.
//!
//! Derivation of route 3, kept here because it exists nowhere else: in the
//! element integral substitute `u = 1 ∓ x` in the two halves produced by the
//! product-to-sum expansion of `image × basis`. Every term becomes one of
//!
//! ```text
//! A(ω) = ∫₀² sin(ωu) Ci(au) du,      B(ω) = ∫₀² cos(ωu) Si(au) du,
//! ```
//!
//! with `a` the mode frequency and `ω` a nonnegative multiple of π (so that
//! `sin(2ω) = 0`, `cos(2ω) = 1`). Integrating by parts:
//!
//! ```text
//! ω ≠ a, ω > 0:
//!   A(ω) = [−Ci(2a) + ½Ci(2(ω+a)) + ½Ci(2|ω−a|) + ln a − ½ln(ω+a) − ½ln|ω−a|]/ω
//!   B(ω) = −[Ci(2|ω−a|) − Ci(2(ω+a)) + ln((ω+a)/|ω−a|)]/(2ω)
//! ω = a:
//!   A(a) = [−Ci(2a) + ½Ci(4a) + ½γ + ½ln a]/a
//!   B(a) = −[γ − Ci(4a) + ln(4a)]/(2a)
//! ω = 0:
//!   A(0) = 0,   B(0) = 2Si(2a) + (cos(2a) − 1)/a
//! ```
//!
//! and the element is `pref · σ · [A(s) − sign(d)A(|d|) + B(|d|) − B(s)]`
//! where for the even block `a = (2k+1)π/2`, `s = (k+i+1)π`, `d = (k−i)π`,
//! `pref = (2k+1)/2`, and for the odd block `a = kπ`, `s = (k+i)π`,
//! `d = (k−i)π`, `pref = k`; `σ = (−1)^{k+i}`. The `ω = a` branch arises only
//! in the odd block when `i = 2k`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math;
use crate::operator::{
    self, apply_oracle, BasisIndex, HypersingularLimitSpec, OperatorError, Parity, SmoothProfile,
};
use crate::quad::{self, QuadError};
use crate::specfun::{self, EULER_GAMMA};

/// Number of geometric refinement levels used for the `ln u` boundary layers.
const GRADED_LEVELS: u32 = 40;

/// Tolerances and split parameters governing the singular integrations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Width of the boundary layers near x = ±1 handled by the graded rule.
    pub endpoint_margin: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 4000,
            endpoint_margin: 1.0 / 16.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), GalerkinError> {
        if !(self.rel_tol >= 1e-13 && self.rel_tol <= 1e-6) {
            return Err(GalerkinError::BadSpec("rel_tol must lie in [1e-13, 1e-6]"));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(GalerkinError::BadSpec("abs_tol must be positive"));
        }
        if self.max_subdivisions < 10 {
            return Err(GalerkinError::BadSpec("max_subdivisions must be >= 10"));
        }
        if !(self.endpoint_margin > 0.0 && self.endpoint_margin < 0.5) {
            return Err(GalerkinError::BadSpec(
                "endpoint_margin must lie in (0, 0.5)",
            ));
        }
        Ok(())
    }
}

/// Errors from element evaluation and assembly.
#[derive(Debug, Clone, PartialEq)]
pub enum GalerkinError {
    BadSpec(&'static str),
    /// Mode index invalid for the parity (odd modes start at 1).
    InvalidIndex {
        parity: Parity,
        k: usize,
    },
    /// Blocks have at least one row.
    EmptyBlock,
    /// Stored entry count does not match n(n+1)/2.
    Dimension {
        expected: usize,
        got: usize,
    },
    /// Quadrature failure, tagged with the element it occurred in.
    AtElement {
        k: usize,
        i: usize,
        error: QuadError,
    },
    /// Oracle failure inside [`element_by_oracle`].
    Oracle(OperatorError),
}

impl fmt::Display for GalerkinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalerkinError::BadSpec(msg) => write!(f, "invalid quadrature spec: {msg}"),
            GalerkinError::InvalidIndex { parity, k } => {
                write!(f, "mode {k} invalid for the {parity} block")
            }
            GalerkinError::EmptyBlock => write!(f, "block dimension must be at least 1"),
            GalerkinError::Dimension { expected, got } => write!(
                f,
                "lower triangle length mismatch: expected {expected}, got {got}"
            ),
            GalerkinError::AtElement { k, i, error } => {
                write!(f, "element ({k}, {i}): {error}")
            }
            GalerkinError::Oracle(e) => write!(f, "oracle route failed: {e}"),
        }
    }
}

impl core::error::Error for GalerkinError {}

impl From<OperatorError> for GalerkinError {
    fn from(e: OperatorError) -> Self {
        GalerkinError::Oracle(e)
    }
}

/// Dense symmetric Galerkin block for one parity; only the lower triangle is
/// stored, so the symmetry invariant holds exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinBlock {
    parity: Parity,
    n: usize,
    /// Row-major packed lower triangle: `(i, j)` with `j ≤ i` lives at
    /// `i(i+1)/2 + j`.
    lower: Vec<f64>,
    quad: QuadratureSpec,
    analytic_diagonal: bool,
}

impl GalerkinBlock {
    /// Rebuild a block from its packed lower triangle (e.g. from a file).
    pub fn from_lower_triangle(
        parity: Parity,
        n: usize,
        lower: Vec<f64>,
        quad: QuadratureSpec,
        analytic_diagonal: bool,
    ) -> Result<Self, GalerkinError> {
        if n == 0 {
            return Err(GalerkinError::EmptyBlock);
        }
        let expected = n * (n + 1) / 2;
        if lower.len() != expected {
            return Err(GalerkinError::Dimension {
                expected,
                got: lower.len(),
            });
        }
        Ok(GalerkinBlock {
            parity,
            n,
            lower,
            quad,
            analytic_diagonal,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn analytic_diagonal(&self) -> bool {
        self.analytic_diagonal
    }

    /// Entry by storage indices, mirrored across the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index out of range");
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.lower[r * (r + 1) / 2 + c]
    }

    /// Packed lower triangle, row-major.
    pub fn lower_triangle(&self) -> &[f64] {
        &self.lower
    }

    /// Expand to a dense row-major n×n buffer.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut dense = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.lower[i * (i + 1) / 2 + j];
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
        }
        dense
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Storage index → mode index; the only place the two are converted.
#[inline]
pub fn mode_of(parity: Parity, storage_index: usize) -> usize {
    match parity {
        Parity::Even => storage_index,
        Parity::Odd => storage_index + 1,
    }
}

fn check_mode(parity: Parity, k: usize) -> Result<(), GalerkinError> {
    if parity == Parity::Odd && k == 0 {
        return Err(GalerkinError::InvalidIndex { parity, k });
    }
    Ok(())
}

/// Analytic diagonal element for mode `k`:
/// even `−2/π + (2k+1)·Si((2k+1)π)`, odd `2k·Si(2kπ)`.
pub fn diagonal_analytic(parity: Parity, k: usize) -> Result<f64, GalerkinError> {
    check_mode(parity, k)?;
    let v = match parity {
        Parity::Even => {
            let m = (2 * k + 1) as f64;
            -2.0 / PI + m * specfun::si(m * PI).expect("finite argument")
        }
        Parity::Odd => {
            let m = k as f64;
            2.0 * m * specfun::si(2.0 * m * PI).expect("finite argument")
        }
    };
    Ok(v)
}

/// `A(ω) = ∫₀² sin(ωu) Ci(au) du` for `ω ≥ 0` a multiple of π (see module
/// docs). Exact float comparison `ω == a` is safe: both sides are the same
/// product `integer × π` when they coincide.
fn a_primitive(omega: f64, a: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    let ci = |t: f64| specfun::ci(t).expect("positive argument");
    if omega == a {
        return (-ci(2.0 * a) + 0.5 * ci(4.0 * a) + 0.5 * EULER_GAMMA + 0.5 * math::ln(a)) / a;
    }
    let sum = omega + a;
    let diff = math::abs(omega - a);
    (-ci(2.0 * a) + 0.5 * ci(2.0 * sum) + 0.5 * ci(2.0 * diff) + math::ln(a)
        - 0.5 * math::ln(sum)
        - 0.5 * math::ln(diff))
        / omega
}

/// `B(ω) = ∫₀² cos(ωu) Si(au) du` for `ω ≥ 0` a multiple of π.
fn b_primitive(omega: f64, a: f64) -> f64 {
    let ci = |t: f64| specfun::ci(t).expect("positive argument");
    if omega == 0.0 {
        let si2a = specfun::si(2.0 * a).expect("finite argument");
        return 2.0 * si2a + (math::cos(2.0 * a) - 1.0) / a;
    }
    if omega == a {
        return -(EULER_GAMMA - ci(4.0 * a) + math::ln(4.0 * a)) / (2.0 * a);
    }
    let sum = omega + a;
    let diff = math::abs(omega - a);
    -(ci(2.0 * diff) - ci(2.0 * sum) + math::ln(sum / diff)) / (2.0 * omega)
}

/// Closed form of the element over mode indices; see the module docs for the
/// derivation. Exact up to rounding — no quadrature involved.
pub fn element_analytic(parity: Parity, k: usize, i: usize) -> Result<f64, GalerkinError> {
    check_mode(parity, k)?;
    check_mode(parity, i)?;
    let (a, s, pref) = match parity {
        Parity::Even => (
            (2 * k + 1) as f64 * PI / 2.0,
            (k + i + 1) as f64 * PI,
            (2 * k + 1) as f64 / 2.0,
        ),
        Parity::Odd => (k as f64 * PI, (k + i) as f64 * PI, k as f64),
    };
    let m = k as i64 - i as i64;
    let sigma = if (k + i).is_multiple_of(2) { 1.0 } else { -1.0 };
    let a_s = a_primitive(s, a);
    let a_d = if m == 0 {
        0.0
    } else {
        let sign = if m > 0 { 1.0 } else { -1.0 };
        sign * a_primitive(m.unsigned_abs() as f64 * PI, a)
    };
    let b_d = b_primitive(m.unsigned_abs() as f64 * PI, a);
    let b_s = b_primitive(s, a);
    Ok(pref * sigma * (a_s - a_d + b_d - b_s))
}

/// Reference route: integrate the closed-form operator image against the
/// basis function with the endpoint-margin split. Uses the analytic formula
/// on the diagonal (`k == i`), as those values are known exactly.
///
/// The result carries error `≤ max(abs_tol, rel_tol·|value|)` plus the
/// (smaller) graded-mesh truncation of the boundary layers.
pub fn element(
    parity: Parity,
    k: usize,
    i: usize,
    quad: &QuadratureSpec,
) -> Result<f64, GalerkinError> {
    quad.validate()?;
    check_mode(parity, k)?;
    check_mode(parity, i)?;
    if k == i {
        return diagonal_analytic(parity, k);
    }

    let image_index = BasisIndex { parity, k };
    let test_index = BasisIndex { parity, k: i };
    let integrand = move |x: f64| {
        let image = operator::apply_basis(image_index, x).expect("x strictly inside (-1,1)");
        image * test_index.value(x)
    };

    let m = quad.endpoint_margin;
    let interior = quad::adaptive(
        &integrand,
        -1.0 + m,
        1.0 - m,
        quad.rel_tol,
        quad.abs_tol,
        quad.max_subdivisions,
    )
    .map_err(|error| GalerkinError::AtElement { k, i, error })?;
    // Boundary layers: substitute u = 1 ∓ x so the Ci log singularity sits at
    // u = 0 where the graded mesh resolves it.
    let left = quad::graded_toward_zero(&|u: f64| integrand(-1.0 + u), m, GRADED_LEVELS);
    let right = quad::graded_toward_zero(&|u: f64| integrand(1.0 - u), m, GRADED_LEVELS);
    Ok(interior + left + right)
}

/// Cross-validation route: the same element, but the operator image comes
/// from the ε-limit oracle instead of any closed form. Slow by design; meant
/// for small indices (`k, i ≤ 8`).
///
/// Near the endpoints the requested cutoffs are scaled down proportionally so
/// that the excision window always fits inside the interval; the extrapolation
/// model is unchanged by that rescaling.
pub fn element_by_oracle(
    parity: Parity,
    k: usize,
    i: usize,
    lim: &HypersingularLimitSpec,
) -> Result<f64, GalerkinError> {
    check_mode(parity, k)?;
    check_mode(parity, i)?;
    let image_index = BasisIndex { parity, k };
    let test_index = BasisIndex { parity, k: i };

    let value = move |x: f64| image_index.value(x);
    let derivative = move |x: f64| image_index.derivative(x);
    let failure: core::cell::RefCell<Option<OperatorError>> = core::cell::RefCell::new(None);
    let eps_max = lim.epsilons.first().copied().unwrap_or(1.0);
    let integrand = |x: f64| {
        let profile = SmoothProfile {
            value: &value,
            derivative: &derivative,
        };
        let h = (1.0 - x).min(1.0 + x);
        let image = if eps_max < 0.5 * h {
            apply_oracle(&profile, x, lim)
        } else {
            let scale = 0.25 * h / eps_max;
            let scaled = HypersingularLimitSpec {
                epsilons: lim.epsilons.iter().map(|e| e * scale).collect(),
                ..lim.clone()
            };
            apply_oracle(&profile, x, &scaled)
        };
        match image {
            Ok(v) => v * test_index.value(x),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    // The oracle output carries ~1e-10 noise; chasing 1e-12 estimates would
    // exhaust any panel budget, so the outer tolerances are fixed here rather
    // than taken from a QuadratureSpec.
    let m = 1.0 / 16.0;
    let interior = quad::adaptive(&integrand, -1.0 + m, 1.0 - m, 1e-9, 1e-10, 2000)
        .map_err(|error| GalerkinError::AtElement { k, i, error })?;
    let left = quad::graded_toward_zero(&|u: f64| integrand(-1.0 + u), m, 24);
    let right = quad::graded_toward_zero(&|u: f64| integrand(1.0 - u), m, 24);
    if let Some(e) = failure.into_inner() {
        return Err(GalerkinError::Oracle(e));
    }
    Ok(interior + left + right)
}

/// Assemble the n×n block of one parity over its first n modes.
///
/// Only the lower triangle is computed (symmetry is exact by construction);
/// rows are filled with the validated analytic fast path, in parallel when
/// the `parallel` feature is on. Deterministic for fixed `quad` and any
/// thread count: every entry is an independent pure computation.
pub fn assemble(
    parity: Parity,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinBlock, GalerkinError> {
    quad.validate()?;
    if n == 0 {
        return Err(GalerkinError::EmptyBlock);
    }
    let row = |r: usize| -> Vec<f64> {
        let mut out = Vec::with_capacity(r + 1);
        let k = mode_of(parity, r);
        for c in 0..=r {
            let i = mode_of(parity, c);
            let v = if r == c {
                diagonal_analytic(parity, k)
            } else {
                element_analytic(parity, k, i)
            }
            .expect("modes from mode_of are valid");
            out.push(v);
        }
        out
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n).map(row).collect();

    let mut lower = Vec::with_capacity(n * (n + 1) / 2);
    for r in rows {
        lower.extend_from_slice(&r);
    }
    GalerkinBlock::from_lower_triangle(parity, n, lower, *quad, true)
}

/// Assemble through the quadrature reference route instead of the fast path.
/// Same contract as [`assemble`], minutes instead of milliseconds at larger
/// sizes; exists so the fast path can be validated wholesale.
pub fn assemble_quadrature(
    parity: Parity,
    n: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinBlock, GalerkinError> {
    quad.validate()?;
    if n == 0 {
        return Err(GalerkinError::EmptyBlock);
    }
    let row = |r: usize| -> Result<Vec<f64>, GalerkinError> {
        let mut out = Vec::with_capacity(r + 1);
        let k = mode_of(parity, r);
        for c in 0..=r {
            out.push(element(parity, k, mode_of(parity, c), quad)?);
        }
        Ok(out)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<Vec<f64>, GalerkinError>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<Vec<f64>, GalerkinError>> = (0..n).map(row).collect();

    let mut lower = Vec::with_capacity(n * (n + 1) / 2);
    for r in rows {
        lower.extend_from_slice(&r?);
    }
    GalerkinBlock::from_lower_triangle(parity, n, lower, *quad, true)
}
