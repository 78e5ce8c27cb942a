//! One-dimensional quadrature: adaptive Gauss–Legendre with an embedded
//! error estimate, and a graded geometric mesh for integrable endpoint
//! (logarithmic) singularities.
//!
//! The adaptive driver keeps a worst-panel-first queue and bisects until the
//! summed estimate meets the requested tolerance or the panel budget runs
//! out. Error per panel is the difference between the 31-point and 15-point
//! Gauss rules evaluated on the same panel — the usual embedded-pair idea.
//! Everything is deterministic for fixed inputs: panel order, splits and the
//! final summation sequence depend only on the integrand values.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::math;

/// Failure of the adaptive driver to reach the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    /// Panel budget exhausted; carries the best value and its estimate so
    /// callers can decide whether the result is still usable.
    DidNotConverge { value: f64, error_estimate: f64 },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::DidNotConverge {
                value,
                error_estimate,
            } => write!(
                f,
                "quadrature did not converge: value ≈ {value:.17e}, estimate {error_estimate:.3e}"
            ),
        }
    }
}

impl core::error::Error for QuadError {}

const GL15_NODES: [f64; 15] = [
    -0.98799251802048543,
    -0.937273392400706,
    -0.8482065834104272,
    -0.7244177313601701,
    -0.5709721726085388,
    -0.3941513470775634,
    -0.20119409399743451,
    0.0,
    0.20119409399743451,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.937273392400706,
    0.98799251802048543,
];
const GL15_WEIGHTS: [f64; 15] = [
    0.030753241996117268,
    0.07036604748810812,
    0.10715922046717194,
    0.13957067792615431,
    0.16626920581699393,
    0.1861610000155622,
    0.19843148532711158,
    0.20257824192556127,
    0.19843148532711158,
    0.1861610000155622,
    0.16626920581699393,
    0.13957067792615431,
    0.10715922046717194,
    0.07036604748810812,
    0.030753241996117268,
];
const GL31_NODES: [f64; 31] = [
    -0.9970874818194771,
    -0.9846859096651525,
    -0.9625039250929497,
    -0.9307569978966482,
    -0.889760029948271,
    -0.8399203201462673,
    -0.7817331484166249,
    -0.7157767845868533,
    -0.6427067229242603,
    -0.5632491614071493,
    -0.4781937820449025,
    -0.38838590160823294,
    -0.29471806998170162,
    -0.19812119933557063,
    -0.09955531215234152,
    0.0,
    0.09955531215234152,
    0.19812119933557063,
    0.29471806998170162,
    0.38838590160823294,
    0.4781937820449025,
    0.5632491614071493,
    0.6427067229242603,
    0.7157767845868533,
    0.7817331484166249,
    0.8399203201462673,
    0.889760029948271,
    0.9307569978966482,
    0.9625039250929497,
    0.9846859096651525,
    0.9970874818194771,
];
const GL31_WEIGHTS: [f64; 31] = [
    0.007470831579248776,
    0.017318620790310582,
    0.027009019184979421,
    0.036432273912385464,
    0.0454937075272011,
    0.05410308242491685,
    0.06217478656102843,
    0.06962858323541037,
    0.07639038659877662,
    0.08239299176158926,
    0.08757674060847788,
    0.09189011389364148,
    0.09529024291231951,
    0.09774333538632873,
    0.09922501122667231,
    0.09972054479342645,
    0.09922501122667231,
    0.09774333538632873,
    0.09529024291231951,
    0.09189011389364148,
    0.08757674060847788,
    0.08239299176158926,
    0.07639038659877662,
    0.06962858323541037,
    0.06217478656102843,
    0.05410308242491685,
    0.0454937075272011,
    0.036432273912385464,
    0.027009019184979421,
    0.017318620790310582,
    0.007470831579248776,
];

/// Fixed 15-point Gauss–Legendre rule on `[a, b]`.
pub fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL15_NODES.iter().zip(GL15_WEIGHTS.iter()) {
        acc += w * f(mid + half * x);
    }
    half * acc
}

/// Fixed 31-point Gauss–Legendre rule on `[a, b]`.
pub fn gl31<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL31_NODES.iter().zip(GL31_WEIGHTS.iter()) {
        acc += w * f(mid + half * x);
    }
    half * acc
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Creation index; breaks heap ties so the refinement order (and thus the
    /// bitwise result) never depends on float comparison quirks.
    seq: u64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn evaluate_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, seq: u64) -> Panel {
    let coarse = gl15(f, a, b);
    let fine = gl31(f, a, b);
    Panel {
        a,
        b,
        value: fine,
        error: math::abs(fine - coarse),
        seq,
    }
}

/// Adaptively integrate `f` over `[a, b]` until the summed panel estimates
/// drop below `max(abs_tol, rel_tol · |integral|)`, bisecting the worst panel
/// first. `max_panels` bounds the number of panels ever alive.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64, QuadError> {
    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    heap.push(evaluate_panel(f, a, b, seq));
    let mut n_panels = 1usize;
    loop {
        let value: f64 = sum_ordered(heap.iter().map(|p| p.value));
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= abs_tol.max(rel_tol * math::abs(value)) {
            return Ok(value);
        }
        if n_panels >= max_panels {
            return Err(QuadError::DidNotConverge {
                value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        seq += 1;
        heap.push(evaluate_panel(f, worst.a, mid, seq));
        seq += 1;
        heap.push(evaluate_panel(f, mid, worst.b, seq));
        n_panels += 1;
    }
}

/// Integrate `f` over `(0, upper]` when `f` has an integrable logarithmic
/// singularity at 0: geometric panels `[upper/2^{j+1}, upper/2^j]` for
/// `j < levels`, a fixed 15-point rule on each. The leftover `(0, upper/2^levels]`
/// is dropped; with the default 40 levels its contribution is below 1e-12
/// even for a bare logarithm, and far below that once the integrand also
/// vanishes at 0.
pub fn graded_toward_zero<F: Fn(f64) -> f64>(f: &F, upper: f64, levels: u32) -> f64 {
    let mut pieces = Vec::with_capacity(levels as usize);
    let mut hi = upper;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        pieces.push(gl15(f, lo, hi));
        hi = lo;
    }
    // Sum smallest panels first to keep rounding noise down.
    let mut acc = 0.0;
    for v in pieces.iter().rev() {
        acc += v;
    }
    acc
}

/// Deterministic summation: collects and sorts by magnitude so the result is
/// independent of heap iteration order.
fn sum_ordered<I: Iterator<Item = f64>>(items: I) -> f64 {
    let mut vals: Vec<f64> = items.collect();
    vals.sort_by(|x, y| math::abs(*x).total_cmp(&math::abs(*y)));
    let mut acc = 0.0;
    for v in vals {
        acc += v;
    }
    acc
}
