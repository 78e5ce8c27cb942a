//! Helpers shared by the integration-test targets: slow independent oracles
//! (compensated Simpson quadrature, inertia-count bisection) and small
//! conveniences for solving both parity blocks at once.
//!
//! Everything here is deliberately written from first principles rather than
//! calling back into the library paths under test, so an agreement between a
//! library value and an oracle value is evidence, not a tautology.
#![allow(dead_code)]

use cauchy_well_core::eigensolver::{eigh, eigvals_only, EigenPair, EigenSolveOptions};
use cauchy_well_core::galerkin::{assemble, GalerkinBlock, QuadratureSpec};
use cauchy_well_core::operator::Parity;
use cauchy_well_core::spectrum::{merge, Level};

/// Euler–Mascheroni constant, kept as a local literal so the oracle does not
/// borrow anything from the crate under test.
pub const GAMMA: f64 = 0.577_215_664_901_532_86;

// ----------------------------------------------------------------- quadrature

/// Composite Simpson rule with Kahan-compensated accumulation.
///
/// The compensation matters: the special-function sweeps use up to ~3·10^5
/// panels, where naive summation alone would cost ~1e-10 — far above the
/// 1e-12 agreement the tests demand. `panels` is rounded up to an even count.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1usize;
    let h = (b - a) / n as f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |term: f64| {
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    add(f(a));
    add(f(b));
    for i in 1..n {
        let x = a + i as f64 * h;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        add(w * f(x));
    }
    sum * h / 3.0
}

fn sweep_panels(x: f64) -> usize {
    // Step ≤ 1e-3 keeps the Simpson truncation error below ~1e-12 for both
    // sinc-type integrands on [0, 300].
    ((x * 1000.0).ceil() as usize).max(4000)
}

/// Sine integral by direct quadrature of sin(t)/t on [0, x], x ≥ 0.
pub fn si_oracle(x: f64) -> f64 {
    simpson(
        |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t },
        0.0,
        x,
        sweep_panels(x),
    )
}

/// Cosine integral by γ + ln x + ∫₀ˣ (cos t − 1)/t dt, x > 0.
///
/// The integrand is written as −2·sin²(t/2)/t, which is exact and avoids the
/// catastrophic cancellation of computing cos t − 1 directly near t = 0.
pub fn ci_oracle(x: f64) -> f64 {
    let tail = simpson(
        |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                let s = (0.5 * t).sin();
                -2.0 * s * s / t
            }
        },
        0.0,
        x,
        sweep_panels(x),
    );
    GAMMA + x.ln() + tail
}

// ------------------------------------------------------ deterministic numbers

/// Minimal 64-bit linear congruential generator (Knuth's constants); good
/// enough to fill random symmetric test matrices reproducibly without adding
/// a dependency.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        self.0
    }

    /// Uniform in [−1, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        let u = self.next_u64() >> 11;
        (u as f64) / (1u64 << 52) as f64 - 1.0
    }

    /// Random symmetric n×n matrix, dense row-major, entries in [−1, 1).
    pub fn symmetric(&mut self, n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.next_f64();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }
}

// ------------------------------------------------- inertia bisection (oracle)

/// Number of eigenvalues of the dense symmetric `a` strictly below `t`,
/// obtained as the count of negative pivots in the LDLᵀ elimination of
/// A − tI. Returns `None` when a pivot degenerates (caller nudges `t`).
fn count_below(a: &[f64], n: usize, t: f64, scale: f64) -> Option<usize> {
    let mut m = a.to_vec();
    for i in 0..n {
        m[i * n + i] -= t;
    }
    let mut negatives = 0;
    for k in 0..n {
        let pivot = m[k * n + k];
        if pivot.abs() <= 1e-14 * scale {
            return None;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let factor = m[i * n + k] / pivot;
            for j in k..n {
                m[i * n + j] -= factor * m[k * n + j];
            }
        }
    }
    Some(negatives)
}

/// All eigenvalues of a dense symmetric matrix by pure bisection on the
/// inertia count between the Gershgorin bounds. O(n⁴ log) and proud of it:
/// the point is to be an algorithm with nothing in common with the QL solver
/// it cross-checks.
pub fn eigenvalues_by_bisection(a: &[f64], n: usize) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let d = a[i * n + i];
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a[i * n + j].abs()).sum();
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let robust_count = |t: f64| -> usize {
        let mut nudge = 0.0;
        loop {
            if let Some(c) = count_below(a, n, t + nudge, scale) {
                return c;
            }
            nudge = if nudge == 0.0 {
                1e-12 * scale
            } else {
                nudge * 4.0
            };
        }
    };
    (0..n)
        .map(|index| {
            let mut lo_k = lo - 1e-8 * scale;
            let mut hi_k = hi + 1e-8 * scale;
            while hi_k - lo_k > 1e-13 * scale {
                let mid = 0.5 * (lo_k + hi_k);
                if robust_count(mid) > index {
                    hi_k = mid;
                } else {
                    lo_k = mid;
                }
            }
            0.5 * (lo_k + hi_k)
        })
        .collect()
}

// ------------------------------------------------------------- parity solves

pub fn default_opts() -> EigenSolveOptions {
    EigenSolveOptions::default()
}

fn values_to_pairs(values: Vec<f64>, parity: Parity) -> Vec<EigenPair> {
    values
        .into_iter()
        .map(|value| EigenPair {
            value,
            vector: Vec::new(),
            parity,
            residual: f64::NAN,
        })
        .collect()
}

/// The `count` lowest merged levels at per-parity dimension `size`
/// (values-only solve; `source_block_size` is filled in).
pub fn merged_lowest(size: usize, count: usize) -> Result<Vec<Level>, String> {
    let quad = QuadratureSpec::default();
    let opts = EigenSolveOptions {
        compute_vectors: false,
        ..EigenSolveOptions::default()
    };
    let take = count.min(size);
    let mut report_levels = Vec::new();
    let even = assemble(Parity::Even, size, &quad).map_err(|e| e.to_string())?;
    let odd = assemble(Parity::Odd, size, &quad).map_err(|e| e.to_string())?;
    let ev = eigvals_only(&even, take, &opts).map_err(|e| e.to_string())?;
    let od = eigvals_only(&odd, take, &opts).map_err(|e| e.to_string())?;
    let report = merge(
        &values_to_pairs(ev, Parity::Even),
        &values_to_pairs(od, Parity::Odd),
        count,
    )
    .map_err(|e| e.to_string())?;
    for mut level in report.levels {
        level.source_block_size = size;
        report_levels.push(level);
    }
    Ok(report_levels)
}

/// Merged levels plus the per-parity eigenpairs they were drawn from.
pub type ParitySolve = (Vec<Level>, Vec<EigenPair>, Vec<EigenPair>);

/// Full solve of both parity blocks with vectors, plus the merged report.
pub fn merged_pairs(size: usize, count: usize) -> Result<ParitySolve, String> {
    let quad = QuadratureSpec::default();
    let opts = EigenSolveOptions::default();
    let even = assemble(Parity::Even, size, &quad).map_err(|e| e.to_string())?;
    let odd = assemble(Parity::Odd, size, &quad).map_err(|e| e.to_string())?;
    let ev = eigh(&even, &opts).map_err(|e| e.to_string())?;
    let od = eigh(&odd, &opts).map_err(|e| e.to_string())?;
    let report = merge(&ev, &od, count).map_err(|e| e.to_string())?;
    Ok((report.levels, ev, od))
}

/// The eigenpair behind `levels[index]`, looked up by parity rank.
pub fn pair_for_level<'a>(
    levels: &[Level],
    index: usize,
    even: &'a [EigenPair],
    odd: &'a [EigenPair],
) -> &'a EigenPair {
    let parity = levels[index].parity;
    let rank = levels[..=index]
        .iter()
        .filter(|l| l.parity == parity)
        .count()
        - 1;
    match parity {
        Parity::Even => &even[rank],
        Parity::Odd => &odd[rank],
    }
}

/// Dense copy of an assembled block (row-major), for feeding the oracles.
pub fn dense_of(block: &GalerkinBlock) -> Vec<f64> {
    block.to_dense()
}
