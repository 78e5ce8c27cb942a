//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! implicit-shift QL, in the classic EISPACK organization. Handles the 2×2
//! toy blocks and the 2000×2000 production blocks alike; only standard-issue
//! O(n³) dense linear algebra, no attempt at blocking or SIMD beyond what the
//! compiler finds.
//!
//! Conventions fixed here so downstream golden tests stay stable:
//! eigenvalues ascending; eigenvectors unit-norm with the largest-magnitude
//! coefficient positive; residual `‖Av − λv‖₂` recorded per pair.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::galerkin::GalerkinBlock;
use crate::math;
use crate::operator::Parity;

/// One Ritz pair. `vector` is empty and `residual` is NaN when the solve was
/// values-only.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub parity: Parity,
    pub residual: f64,
}

/// Iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct EigenSolveOptions {
    pub compute_vectors: bool,
    pub max_iterations_per_eigenvalue: usize,
    /// Relative deflation threshold: the off-diagonal `t_{i,i+1}` counts as
    /// zero when `|t_{i,i+1}| ≤ tol·(|t_{i,i}| + |t_{i+1,i+1}|)`.
    pub convergence_tol: f64,
}

impl Default for EigenSolveOptions {
    fn default() -> Self {
        EigenSolveOptions {
            compute_vectors: true,
            max_iterations_per_eigenvalue: 50,
            convergence_tol: f64::EPSILON,
        }
    }
}

impl EigenSolveOptions {
    pub fn validate(&self) -> Result<(), EigenError> {
        if self.convergence_tol < f64::EPSILON {
            return Err(EigenError::BadOptions(
                "convergence_tol must be at least machine epsilon",
            ));
        }
        if self.max_iterations_per_eigenvalue < 30 {
            return Err(EigenError::BadOptions(
                "max_iterations_per_eigenvalue must be at least 30",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenError {
    BadOptions(&'static str),
    /// QL failed to drive an off-diagonal to zero within the iteration cap;
    /// carries the index of the eigenvalue being isolated.
    DidNotConverge {
        index: usize,
    },
    /// `count` outside `1..=n` in [`eigvals_only`].
    CountOutOfRange {
        count: usize,
        n: usize,
    },
}

impl fmt::Display for EigenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigenError::BadOptions(msg) => write!(f, "invalid solver options: {msg}"),
            EigenError::DidNotConverge { index } => {
                write!(f, "QL iteration failed to converge at eigenvalue {index}")
            }
            EigenError::CountOutOfRange { count, n } => {
                write!(f, "requested {count} eigenvalues of a {n}x{n} block")
            }
        }
    }
}

impl core::error::Error for EigenError {}

/// Full eigendecomposition of the block, ascending.
///
/// With `compute_vectors` unset the vectors are left empty and residuals NaN,
/// at roughly a third of the cost.
pub fn eigh(block: &GalerkinBlock, opts: &EigenSolveOptions) -> Result<Vec<EigenPair>, EigenError> {
    opts.validate()?;
    let n = block.n();
    let dense = block.to_dense();
    let mut work = dense.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    tridiagonalize(&mut work, n, &mut diag, &mut off, opts.compute_vectors);
    ql_implicit(
        &mut diag,
        &mut off,
        if opts.compute_vectors {
            Some(&mut work)
        } else {
            None
        },
        n,
        opts,
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));

    let mut pairs = Vec::with_capacity(n);
    for &col in &order {
        let (vector, residual) = if opts.compute_vectors {
            let mut v: Vec<f64> = (0..n).map(|r| work[r * n + col]).collect();
            normalize_with_sign(&mut v);
            let r = residual_norm(&dense, n, &v, diag[col]);
            (v, r)
        } else {
            (Vec::new(), f64::NAN)
        };
        pairs.push(EigenPair {
            value: diag[col],
            vector,
            parity: block.parity(),
            residual,
        });
    }
    Ok(pairs)
}

/// The lowest `count` eigenvalues, ascending, without vector accumulation.
/// Matches [`eigh`]'s values to well below 1e-10 (identical reduction, the
/// QL rotations simply skip the accumulation step).
pub fn eigvals_only(
    block: &GalerkinBlock,
    count: usize,
    opts: &EigenSolveOptions,
) -> Result<Vec<f64>, EigenError> {
    opts.validate()?;
    let n = block.n();
    if count == 0 || count > n {
        return Err(EigenError::CountOutOfRange { count, n });
    }
    let mut work = block.to_dense();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    tridiagonalize(&mut work, n, &mut diag, &mut off, false);
    ql_implicit(&mut diag, &mut off, None, n, opts)?;
    diag.sort_by(|a, b| a.total_cmp(b));
    diag.truncate(count);
    Ok(diag)
}

/// Unit-normalize and flip so the largest-magnitude component is positive.
fn normalize_with_sign(v: &mut [f64]) {
    let mut norm_sq = 0.0;
    for &x in v.iter() {
        norm_sq += x * x;
    }
    let norm = math::sqrt(norm_sq);
    let mut dominant = 0.0f64;
    for &x in v.iter() {
        if math::abs(x) > math::abs(dominant) {
            dominant = x;
        }
    }
    let scale = if dominant < 0.0 {
        -1.0 / norm
    } else {
        1.0 / norm
    };
    for x in v.iter_mut() {
        *x *= scale;
    }
}

/// `‖Av − λv‖₂` against the original dense matrix.
fn residual_norm(dense: &[f64], n: usize, v: &[f64], lambda: f64) -> f64 {
    let mut acc = 0.0;
    for r in 0..n {
        let row = &dense[r * n..(r + 1) * n];
        let mut av = 0.0;
        for (m, x) in row.iter().zip(v.iter()) {
            av += m * x;
        }
        let diff = av - lambda * v[r];
        acc += diff * diff;
    }
    math::sqrt(acc)
}

/// Householder reduction to tridiagonal form (EISPACK `tred2` organization).
///
/// On entry `v` holds the symmetric matrix row-major; on exit `diag`/`off`
/// hold the tridiagonal form (`off[0]` unused) and, if `accumulate`, `v`
/// holds the orthogonal transformation as columns to feed the QL stage.
fn tridiagonalize(v: &mut [f64], n: usize, diag: &mut [f64], off: &mut [f64], accumulate: bool) {
    if n == 1 {
        diag[0] = v[0];
        off[0] = 0.0;
        if accumulate {
            v[0] = 1.0;
        }
        return;
    }
    for j in 0..n {
        diag[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in diag.iter().take(i) {
            scale += math::abs(*item);
        }
        if scale == 0.0 {
            off[i] = diag[i - 1];
            for j in 0..i {
                diag[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for item in diag.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = diag[i - 1];
            let mut g = math::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            off[i] = scale * g;
            h -= f * g;
            diag[i - 1] = f - g;
            for item in off.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                let f = diag[j];
                v[j * n + i] = f;
                let mut g = off[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * diag[k];
                    off[k] += v[k * n + j] * f;
                }
                off[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                off[j] /= h;
                f += off[j] * diag[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                off[j] -= hh * diag[j];
            }
            for j in 0..i {
                let f = diag[j];
                let g = off[j];
                for k in j..i {
                    v[k * n + j] -= f * off[k] + g * diag[k];
                }
                diag[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        diag[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            v[(n - 1) * n + i] = v[i * n + i];
            v[i * n + i] = 1.0;
            let h = diag[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    diag[k] = v[k * n + i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v[k * n + i + 1] * v[k * n + j];
                    }
                    for k in 0..=i {
                        v[k * n + j] -= g * diag[k];
                    }
                }
            }
            for k in 0..=i {
                v[k * n + i + 1] = 0.0;
            }
        }
        for j in 0..n {
            diag[j] = v[(n - 1) * n + j];
            v[(n - 1) * n + j] = 0.0;
        }
        v[(n - 1) * n + n - 1] = 1.0;
    } else {
        // Householder data in v is no longer needed; recover the tridiagonal
        // diagonal, which the reduction left in diag[i] as the h values.
        for (j, item) in diag.iter_mut().enumerate().take(n - 1) {
            *item = v[j * n + j];
        }
        diag[n - 1] = v[(n - 1) * n + n - 1];
    }
    off[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal form (EISPACK `tql2` organization),
/// optionally accumulating rotations into the columns of `v`.
fn ql_implicit(
    diag: &mut [f64],
    off: &mut [f64],
    mut v: Option<&mut [f64]>,
    n: usize,
    opts: &EigenSolveOptions,
) -> Result<(), EigenError> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = 0.0;
    let tol = opts.convergence_tol;
    let mut f = 0.0;

    for l in 0..n {
        // Find the first negligible off-diagonal at or after l.
        let mut m = l;
        while m < n - 1 {
            if math::abs(off[m]) <= tol * (math::abs(diag[m]) + math::abs(diag[m + 1])) {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > opts.max_iterations_per_eigenvalue {
                    return Err(EigenError::DidNotConverge { index: l });
                }
                // Wilkinson-style shift from the leading 2×2.
                let g = diag[l];
                let mut p = (diag[l + 1] - g) / (2.0 * off[l]);
                let mut r = math::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                diag[l] = off[l] / (p + r);
                diag[l + 1] = off[l] * (p + r);
                let dl1 = diag[l + 1];
                let mut h = g - diag[l];
                for item in diag.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep from m back down to l.
                p = diag[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = off[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * off[i];
                    h = c * p;
                    r = math::hypot(p, off[i]);
                    off[i + 1] = s * r;
                    s = off[i] / r;
                    c = p / r;
                    p = c * diag[i] - s * g;
                    diag[i + 1] = h + s * (c * g + s * diag[i]);
                    if let Some(vv) = v.as_deref_mut() {
                        for k in 0..n {
                            let h = vv[k * n + i + 1];
                            vv[k * n + i + 1] = s * vv[k * n + i] + c * h;
                            vv[k * n + i] = c * vv[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * off[l] / dl1;
                off[l] = s * p;
                diag[l] = c * p;
                if math::abs(off[l]) <= tol * (math::abs(diag[l]) + math::abs(diag[l + 1])) {
                    break;
                }
            }
        }
        diag[l] += f;
        off[l] = 0.0;
    }
    Ok(())
}
