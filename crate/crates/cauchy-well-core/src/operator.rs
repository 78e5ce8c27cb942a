//! Action of the half-Laplacian on functions supported in `[−1, 1]`.
//!
//! For `ψ` vanishing outside the interval the operator is the finite-part
//! integral
//!
//! ```text
//! (|Δ|^{1/2} ψ)(x) = −(1/π) ⨍ ψ(t)/(t−x)² dt
//!                  = −(1/π) p.v.∫ ψ′(t)/(t−x) dt,   ψ(±1) = 0,
//! ```
//!
//! which closes in sine/cosine integrals for the two trigonometric families
//! used by the Galerkin scheme:
//!
//! * even basis `φ_k(x) = cos((2k+1)πx/2)`, `k ≥ 0`,
//! * odd basis `χ_k(x) = sin(kπx)`, `k ≥ 1`.
//!
//! [`apply_even_basis`]/[`apply_odd_basis`] evaluate those closed forms.
//! [`apply_oracle`] instead takes the defining limit numerically — symmetric
//! excision around the pole followed by Richardson extrapolation of the
//! cutoff — for any admissible profile. It is deliberately independent of the
//! closed forms so that each can check the other.
//!
//! [`trig_disproof_residual`] quantifies how far the two "obvious" candidates
//! `cos(πx/2)` and `sin(πx)` are from being eigenfunctions: the pointwise
//! residual against the best uniform eigenvalue stays O(1) on the interval,
//! growing toward the endpoints.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use crate::math;
use crate::quad;
use crate::specfun;

/// Symmetry class of a basis function or eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Index into one of the two trigonometric families.
///
/// Even indices start at 0 (`cos((2k+1)πx/2)`), odd ones at 1 (`sin(kπx)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    pub parity: Parity,
    pub k: usize,
}

impl BasisIndex {
    pub fn new(parity: Parity, k: usize) -> Result<Self, OperatorError> {
        if parity == Parity::Odd && k == 0 {
            return Err(OperatorError::InvalidIndex { parity, k });
        }
        Ok(BasisIndex { parity, k })
    }

    /// Basis function value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        match self.parity {
            Parity::Even => math::cos((2 * self.k + 1) as f64 * FRAC_PI_2 * x),
            Parity::Odd => math::sin(self.k as f64 * PI * x),
        }
    }

    /// Basis function derivative at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self.parity {
            Parity::Even => {
                let a = (2 * self.k + 1) as f64 * FRAC_PI_2;
                -a * math::sin(a * x)
            }
            Parity::Odd => {
                let a = self.k as f64 * PI;
                a * math::cos(a * x)
            }
        }
    }
}

/// A profile the oracle can act on: the function and its derivative on
/// `[−1, 1]` (zero outside). Both are needed — the derivative drives the
/// principal-value integral, the value lets the oracle verify admissibility.
pub struct SmoothProfile<'a> {
    pub value: &'a dyn Fn(f64) -> f64,
    pub derivative: &'a dyn Fn(f64) -> f64,
}

/// Controls for the finite-part limit in [`apply_oracle`].
#[derive(Debug, Clone)]
pub struct HypersingularLimitSpec {
    /// Strictly decreasing positive cutoffs; at least 3.
    pub epsilons: Vec<f64>,
    /// Number of odd cutoff powers (ε, ε³, …) removed by extrapolation.
    pub extrapolation_order: usize,
    /// Relative tolerance for the inner principal-value integrals.
    pub inner_quad_tol: f64,
}

impl Default for HypersingularLimitSpec {
    fn default() -> Self {
        HypersingularLimitSpec {
            epsilons: alloc::vec![1e-2, 5e-3, 2.5e-3, 1.25e-3],
            extrapolation_order: 3,
            inner_quad_tol: 1e-11,
        }
    }
}

/// Non-eigenfunction candidates probed by [`trig_disproof_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigCandidate {
    /// `cos(πx/2)` — the even half-period cosine.
    CosHalf,
    /// `sin(πx)` — the odd full-period sine.
    SinPi,
}

impl TrigCandidate {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            TrigCandidate::CosHalf => math::cos(FRAC_PI_2 * x),
            TrigCandidate::SinPi => math::sin(PI * x),
        }
    }

    /// Rayleigh quotient of the candidate — the eigenvalue a believer would
    /// fit. Both candidates are unit-norm, so this is the matching diagonal
    /// matrix element.
    pub fn best_fit_energy(&self) -> f64 {
        match self {
            TrigCandidate::CosHalf => -2.0 / PI + specfun::si(PI).expect("finite argument"),
            TrigCandidate::SinPi => 2.0 * specfun::si(2.0 * PI).expect("finite argument"),
        }
    }
}

/// Errors from operator evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorError {
    /// Evaluation point outside the open interval (−1, 1).
    OutOfDomain { x: f64 },
    /// Odd family starts at k = 1.
    InvalidIndex { parity: Parity, k: usize },
    /// Profile does not vanish at an endpoint, so the finite-part reduction
    /// to a principal value is invalid.
    ProfileNotAdmissible { endpoint: f64, value: f64 },
    /// Largest cutoff reaches past the nearer endpoint.
    CutoffTooLarge { epsilon: f64, distance: f64 },
    /// Fewer cutoffs than the extrapolation model needs, or not positive,
    /// strictly decreasing, and below 0.5.
    BadCutoffs,
    /// Residual grids must contain at least one point.
    EmptyGrid,
    /// The cutoff extrapolation disagrees with its lower-order companion by
    /// more than the acceptable bound.
    OracleDidNotConverge { estimate: f64 },
    /// Inner quadrature failure.
    Quadrature(quad::QuadError),
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::OutOfDomain { x } => {
                write!(f, "point {x} lies outside the open interval (-1, 1)")
            }
            OperatorError::InvalidIndex { parity, k } => {
                write!(f, "index k = {k} invalid for the {parity} family")
            }
            OperatorError::ProfileNotAdmissible { endpoint, value } => write!(
                f,
                "profile must vanish at the endpoints; |ψ({endpoint})| = {value:.3e}"
            ),
            OperatorError::CutoffTooLarge { epsilon, distance } => write!(
                f,
                "cutoff {epsilon} exceeds distance {distance:.3e} to the nearer endpoint"
            ),
            OperatorError::BadCutoffs => write!(
                f,
                "cutoffs must be in (0, 0.5), strictly decreasing, at least 3"
            ),
            OperatorError::EmptyGrid => write!(f, "grid must contain at least one point"),
            OperatorError::OracleDidNotConverge { estimate } => write!(
                f,
                "finite-part extrapolation uncertainty {estimate:.3e} exceeds 1e-6"
            ),
            OperatorError::Quadrature(e) => write!(f, "inner quadrature failed: {e}"),
        }
    }
}

impl core::error::Error for OperatorError {}

impl From<quad::QuadError> for OperatorError {
    fn from(e: quad::QuadError) -> Self {
        OperatorError::Quadrature(e)
    }
}

/// Closed form of the operator acting on the even basis function
/// `cos((2k+1)πx/2)` at `|x| < 1`:
///
/// ```text
/// f_k(x) = c · [ sin(ax)(Ci(a(1−x)) − Ci(a(1+x))) + cos(ax)(Si(a(1−x)) + Si(a(1+x))) ]
/// ```
///
/// with `c = (2k+1)/2`, `a = cπ`. Diverges logarithmically at the endpoints.
pub fn apply_even_basis(k: usize, x: f64) -> Result<f64, OperatorError> {
    if !x.is_finite() || math::abs(x) >= 1.0 {
        return Err(OperatorError::OutOfDomain { x });
    }
    let c = (2 * k + 1) as f64 / 2.0;
    let a = c * PI;
    let (si_m, ci_m) = specfun::si_ci_pair(a * (1.0 - x)).expect("argument positive for |x|<1");
    let (si_p, ci_p) = specfun::si_ci_pair(a * (1.0 + x)).expect("argument positive for |x|<1");
    let (s, co) = math::sin_cos(a * x);
    Ok(c * (s * (ci_m - ci_p) + co * (si_m + si_p)))
}

/// Closed form of the operator acting on the odd basis function `sin(kπx)`,
/// `k ≥ 1`, at `|x| < 1`:
///
/// ```text
/// g_k(x) = k · [ sin(ax)(Si(a(1−x)) + Si(a(1+x))) − cos(ax)(Ci(a(1−x)) − Ci(a(1+x))) ]
/// ```
///
/// with `a = kπ`.
pub fn apply_odd_basis(k: usize, x: f64) -> Result<f64, OperatorError> {
    if k == 0 {
        return Err(OperatorError::InvalidIndex {
            parity: Parity::Odd,
            k,
        });
    }
    if !x.is_finite() || math::abs(x) >= 1.0 {
        return Err(OperatorError::OutOfDomain { x });
    }
    let a = k as f64 * PI;
    let (si_m, ci_m) = specfun::si_ci_pair(a * (1.0 - x)).expect("argument positive for |x|<1");
    let (si_p, ci_p) = specfun::si_ci_pair(a * (1.0 + x)).expect("argument positive for |x|<1");
    let (s, co) = math::sin_cos(a * x);
    Ok(k as f64 * (s * (si_m + si_p) - co * (ci_m - ci_p)))
}

/// Closed form dispatched on a [`BasisIndex`].
pub fn apply_basis(index: BasisIndex, x: f64) -> Result<f64, OperatorError> {
    match index.parity {
        Parity::Even => apply_even_basis(index.k, x),
        Parity::Odd => apply_odd_basis(index.k, x),
    }
}

/// Evaluate the operator on an arbitrary admissible profile by taking the
/// defining limit numerically.
///
/// For each cutoff ε the principal-value integral with the symmetric window
/// `[x−ε, x+ε]` removed is computed as
///
/// ```text
/// I(ε) = ∫_ε^h [ψ′(x+u) − ψ′(x−u)]/u du  +  (one-sided leftover up to the far endpoint)
/// ```
///
/// with `h` the distance to the nearer endpoint; `I(ε) = PV − c₁ε − c₃ε³ − …`
/// since the even part of `ψ′` around `x` cancels in the window. Fitting that
/// model through the supplied cutoffs and taking the ε → 0 value gives `PV`,
/// and the operator value is `−PV/π`. The difference from the extrapolation
/// one order lower serves as the uncertainty estimate; above `1e-6` the call
/// fails rather than return a doubtful number.
pub fn apply_oracle(
    profile: &SmoothProfile<'_>,
    x: f64,
    spec: &HypersingularLimitSpec,
) -> Result<f64, OperatorError> {
    if !x.is_finite() || math::abs(x) >= 1.0 {
        return Err(OperatorError::OutOfDomain { x });
    }
    for &endpoint in &[-1.0, 1.0] {
        let v = math::abs((profile.value)(endpoint));
        if v > 1e-12 {
            return Err(OperatorError::ProfileNotAdmissible { endpoint, value: v });
        }
    }
    let n_eps = spec.epsilons.len();
    if n_eps < 3 || spec.extrapolation_order == 0 {
        return Err(OperatorError::BadCutoffs);
    }
    for w in spec.epsilons.windows(2) {
        if !(w[1] > 0.0 && w[1] < w[0]) {
            return Err(OperatorError::BadCutoffs);
        }
    }
    if !(spec.epsilons[0] > 0.0 && spec.epsilons[0] < 0.5) {
        return Err(OperatorError::BadCutoffs);
    }
    let h = (1.0 - x).min(1.0 + x);
    if spec.epsilons[0] >= h {
        return Err(OperatorError::CutoffTooLarge {
            epsilon: spec.epsilons[0],
            distance: h,
        });
    }

    let n_points = (spec.extrapolation_order + 1).min(n_eps);
    let mut values = Vec::with_capacity(n_points);
    for &eps in spec.epsilons.iter().take(n_points) {
        values.push(excised_pv(profile, x, eps, spec.inner_quad_tol)?);
    }
    let pv = extrapolate_to_zero(&spec.epsilons[..n_points], &values);
    let pv_lower = extrapolate_to_zero(&spec.epsilons[..n_points - 1], &values[..n_points - 1]);
    let estimate = math::abs(pv - pv_lower) / PI;
    if estimate > 1e-6 {
        return Err(OperatorError::OracleDidNotConverge { estimate });
    }
    Ok(-pv / PI)
}

/// `∫_{[−1,1] ∖ [x−ε, x+ε]} ψ′(t)/(t−x) dt` via the symmetric pairing.
fn excised_pv(
    profile: &SmoothProfile<'_>,
    x: f64,
    eps: f64,
    tol: f64,
) -> Result<f64, OperatorError> {
    let right = 1.0 - x;
    let left = 1.0 + x;
    let h = right.min(left);
    let dpsi = profile.derivative;

    let paired = |u: f64| ((dpsi)(x + u) - (dpsi)(x - u)) / u;
    let mut total = quad::adaptive(&paired, eps, h, tol, 1e-14, 4000)?;

    if right < left {
        // leftover reaches left of x: −∫_R^L ψ′(x−u)/u du
        let tail = |u: f64| (dpsi)(x - u) / u;
        total -= quad::adaptive(&tail, right, left, tol, 1e-14, 4000)?;
    } else if left < right {
        let tail = |u: f64| (dpsi)(x + u) / u;
        total += quad::adaptive(&tail, left, right, tol, 1e-14, 4000)?;
    }
    Ok(total)
}

/// Fit `I(ε) = PV − Σ_j c_j ε^{2j−1}` through the sample points and return
/// `PV`. Small dense solve; the Vandermonde-like system is well conditioned
/// for the handful of cutoffs used here.
fn extrapolate_to_zero(epsilons: &[f64], values: &[f64]) -> f64 {
    let n = epsilons.len();
    let mut matrix = Vec::with_capacity(n * n);
    for &e in epsilons {
        matrix.push(1.0);
        let mut p = e;
        for _ in 1..n {
            matrix.push(-p);
            p *= e * e;
        }
    }
    let mut rhs: Vec<f64> = values.to_vec();
    solve_dense(&mut matrix, &mut rhs);
    rhs[0]
}

/// In-place Gaussian elimination with partial pivoting for the tiny systems
/// above. `matrix` is row-major n×n, `rhs` length n; solution lands in `rhs`.
fn solve_dense(matrix: &mut [f64], rhs: &mut [f64]) {
    let n = rhs.len();
    debug_assert_eq!(matrix.len(), n * n);
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if math::abs(matrix[row * n + col]) > math::abs(matrix[pivot * n + col]) {
                pivot = row;
            }
        }
        if pivot != col {
            for j in 0..n {
                matrix.swap(col * n + j, pivot * n + j);
            }
            rhs.swap(col, pivot);
        }
        let diag = matrix[col * n + col];
        for row in col + 1..n {
            let factor = matrix[row * n + col] / diag;
            if factor != 0.0 {
                for j in col..n {
                    matrix[row * n + j] -= factor * matrix[col * n + j];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for j in col + 1..n {
            acc -= matrix[col * n + j] * rhs[j];
        }
        rhs[col] = acc / matrix[col * n + col];
    }
}

/// Pointwise residual magnitude of a trigonometric candidate against its
/// best-fitting eigenvalue: `r(x) = |(|Δ|^{1/2} candidate)(x) − E* · candidate(x)|`.
///
/// Returns `(E*, residuals)` with one residual per grid point. Grid points
/// must lie strictly inside (−1, 1); the operator image diverges at the
/// endpoints — which is exactly why these candidates fail. The profile is
/// manifestly nonzero and grows logarithmically toward ±1.
pub fn trig_disproof_residual(
    candidate: TrigCandidate,
    grid: &[f64],
) -> Result<(f64, Vec<f64>), OperatorError> {
    if grid.is_empty() {
        return Err(OperatorError::EmptyGrid);
    }
    let energy = candidate.best_fit_energy();
    let mut residuals = Vec::with_capacity(grid.len());
    for &x in grid {
        let image = match candidate {
            TrigCandidate::CosHalf => apply_even_basis(0, x)?,
            TrigCandidate::SinPi => apply_odd_basis(1, x)?,
        };
        residuals.push(math::abs(image - energy * candidate.value(x)));
    }
    Ok((energy, residuals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_image_at_center_is_si_half_pi() {
        // f_0(0) = Si(π/2), frozen reference value.
        let v = apply_even_basis(0, 0.0).unwrap();
        assert!((v - 1.370_762_168_154_488_5).abs() < 1e-14);
    }

    #[test]
    fn images_inherit_parity() {
        for &x in &[0.15, 0.4, 0.83] {
            for k in 0..4 {
                let plus = apply_even_basis(k, x).unwrap();
                let minus = apply_even_basis(k, -x).unwrap();
                assert!((plus - minus).abs() < 1e-13, "even image must be even");
            }
            for k in 1..4 {
                let plus = apply_odd_basis(k, x).unwrap();
                let minus = apply_odd_basis(k, -x).unwrap();
                assert!((plus + minus).abs() < 1e-13, "odd image must be odd");
            }
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(matches!(
            apply_even_basis(0, 1.0),
            Err(OperatorError::OutOfDomain { .. })
        ));
        assert!(matches!(
            apply_odd_basis(1, -1.2),
            Err(OperatorError::OutOfDomain { .. })
        ));
        assert!(matches!(
            apply_odd_basis(0, 0.3),
            Err(OperatorError::InvalidIndex { .. })
        ));
        assert!(BasisIndex::new(Parity::Odd, 0).is_err());
    }

    #[test]
    fn oracle_matches_quadratic_profile() {
        // ψ = 1 − x², ψ′ = −2x: the finite-part value at 0 is 4/π.
        let value = |x: f64| 1.0 - x * x;
        let derivative = |x: f64| -2.0 * x;
        let profile = SmoothProfile {
            value: &value,
            derivative: &derivative,
        };
        let v = apply_oracle(&profile, 0.0, &HypersingularLimitSpec::default()).unwrap();
        assert!((v - 4.0 / core::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn oracle_rejects_bad_inputs() {
        let value = |_: f64| 1.0; // does not vanish at ±1
        let derivative = |_: f64| 0.0;
        let profile = SmoothProfile {
            value: &value,
            derivative: &derivative,
        };
        assert!(matches!(
            apply_oracle(&profile, 0.0, &HypersingularLimitSpec::default()),
            Err(OperatorError::ProfileNotAdmissible { .. })
        ));

        let value = |x: f64| 1.0 - x * x;
        let derivative = |x: f64| -2.0 * x;
        let profile = SmoothProfile {
            value: &value,
            derivative: &derivative,
        };
        // cutoff larger than the distance to the endpoint
        assert!(matches!(
            apply_oracle(&profile, 0.995, &HypersingularLimitSpec::default()),
            Err(OperatorError::CutoffTooLarge { .. })
        ));
        let bad = HypersingularLimitSpec {
            epsilons: alloc::vec![1e-2, 5e-3],
            ..Default::default()
        };
        assert!(matches!(
            apply_oracle(&profile, 0.0, &bad),
            Err(OperatorError::BadCutoffs)
        ));
    }

    #[test]
    fn disproof_energies_match_rayleigh_quotients() {
        let (e_cos, _) = trig_disproof_residual(TrigCandidate::CosHalf, &[0.0]).unwrap();
        assert!((e_cos - 1.215_317_279_614_884_8).abs() < 1e-13);
        let (e_sin, _) = trig_disproof_residual(TrigCandidate::SinPi, &[0.5]).unwrap();
        assert!((e_sin - 2.836_303_152_265_257).abs() < 1e-13);
        assert!(e_cos > 0.0 && e_sin > 0.0, "operator is positive");
        assert!(trig_disproof_residual(TrigCandidate::CosHalf, &[]).is_err());
    }

    #[test]
    fn solve_dense_recovers_known_solution() {
        // 3×3 with known solution (1, -2, 3).
        let mut m = alloc::vec![2.0, 1.0, -1.0, -3.0, -1.0, 2.0, -2.0, 1.0, 2.0];
        let x = [1.0f64, -2.0, 3.0];
        let mut rhs = alloc::vec![
            2.0 * x[0] + x[1] - x[2],
            -3.0 * x[0] - x[1] + 2.0 * x[2],
            -2.0 * x[0] + x[1] + 2.0 * x[2],
        ];
        solve_dense(&mut m, &mut rhs);
        for (got, want) in rhs.iter().zip(x.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
